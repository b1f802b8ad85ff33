# ============================================================
# 🧭 Catalog registry: case ids, parameter ranges, tensor presets
# ============================================================
"""
ChoiSense Catalog — name → case resolution.

This module centralizes:
  1) CASES: every catalog constructor, keyed by name, with the range of
     its integer parameter (if any)
  2) TENSOR_PRESETS: the tensor-product constructions, listed by id

Helpers:
  - list_cases(): deterministic listing of ids and parameter ranges
  - resolve_case(case_id): build a CatalogCase from "name", "name(d)" or
    "tensor:<idA>×<idB>" (an ASCII "x" is accepted in place of "×")
  - preset_ids(): the concrete ids of every preset, for batch reports
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from choisense.catalog import cases
from choisense.catalog.case import CatalogCase, Expected
from choisense.certify.criteria import parthasarathy_bound
from choisense.maps.compose import HypothesisError, compose_extremal, tensor_cpmap, tensor_label, tensor_marginals


class UnknownCaseError(ValueError):
    """Raised when a case id does not name a catalog case or preset."""


@dataclass(frozen=True)
class CaseEntry:
    name: str
    builder: Callable[..., CatalogCase]
    param: Optional[str] = None
    minimum: Optional[int] = None
    maximum: Optional[int] = None

    @property
    def listing_id(self) -> str:
        return f"{self.name}({self.param})" if self.param else self.name

    @property
    def params(self) -> Dict[str, str]:
        if not self.param:
            return {}
        if self.maximum is None:
            return {self.param: f"≥{self.minimum}"}
        return {self.param: f"{self.minimum}..{self.maximum}"}


# ------------------------------------------------------------
# 1️⃣  BASE CASES
# ------------------------------------------------------------
CASES: Dict[str, CaseEntry] = {
    e.name: e
    for e in (
        CaseEntry("ohno_hermitian", cases.ohno_hermitian, "d", 3),
        CaseEntry("ohno_3x3_rank4", cases.ohno_3x3_rank4),
        CaseEntry("ohno_4x4_rank5", cases.ohno_4x4_rank5),
        CaseEntry("five_rank6", cases.five_rank6),
        CaseEntry("five_rank7", cases.five_rank7),
        CaseEntry("qubit_to_d", cases.qubit_to_d, "d", 4),
        CaseEntry("three_to_four", cases.three_to_four),
        CaseEntry("cyclic_d_to_d_plus_1", cases.cyclic_d_to_d_plus_1, "d", 2),
        CaseEntry("remark_counterexample", cases.remark_counterexample),
    )
}

# Parameter values used when a batch report needs concrete instances.
REPORT_PARAMS: Dict[str, Tuple[int, ...]] = {
    "ohno_hermitian": (3, 4, 5),
    "qubit_to_d": (4, 5, 6, 8),
    "cyclic_d_to_d_plus_1": (2, 3, 4, 5, 6),
}

# ------------------------------------------------------------
# 2️⃣  TENSOR PRESETS
# ------------------------------------------------------------
HERMITIAN_FIVE_K_RANGE = range(3, 15)

# the pair whose first factor is not Hermitian; the product is minimal but not extreme
NOT_EXTREME_PRESET = tensor_label("ohno_3x3_rank4", "ohno_4x4_rank5")

TENSOR_PRESETS: Tuple[str, ...] = (
    tensor_label("ohno_hermitian(3)", "ohno_3x3_rank4"),
    tensor_label("ohno_hermitian(4)", "ohno_3x3_rank4"),
    NOT_EXTREME_PRESET,
    tensor_label("ohno_hermitian(k)", "five_rank7"),
)

_CALL = re.compile(r"^([a-z0-9_]+)\((-?\d+)\)$")


def list_cases() -> List[Dict[str, object]]:
    """
    Deterministic listing of every case id and tensor preset.

    :return: ``[{"id": ..., "params": {...}}, ...]``, base cases first in
        catalog order, then presets.
    :rtype: list[dict]
    """
    rows: List[Dict[str, object]] = [{"id": e.listing_id, "params": e.params} for e in CASES.values()]
    for preset in TENSOR_PRESETS:
        params = {"k": f"{HERMITIAN_FIVE_K_RANGE.start}..{HERMITIAN_FIVE_K_RANGE.stop - 1}"} if "(k)" in preset else {}
        rows.append({"id": preset, "params": params})
    return rows


def preset_ids() -> List[str]:
    """Concrete preset ids, with the five_rank7 family expanded over k."""
    out = [p for p in TENSOR_PRESETS if "(k)" not in p]
    out += [tensor_label(f"ohno_hermitian({k})", "five_rank7") for k in HERMITIAN_FIVE_K_RANGE]
    return out


def report_ids() -> List[str]:
    """Every concrete id a full report covers."""
    ids: List[str] = []
    for name, entry in CASES.items():
        if entry.param:
            ids += [f"{name}({v})" for v in REPORT_PARAMS[name]]
        else:
            ids.append(name)
    return ids + preset_ids()


def _parse_base(case_id: str) -> Tuple[CaseEntry, Optional[int]]:
    case_id = case_id.strip()
    m = _CALL.match(case_id)
    name, arg = (m.group(1), int(m.group(2))) if m else (case_id, None)
    entry = CASES.get(name)
    if entry is None:
        raise UnknownCaseError(f"unknown case id: {case_id!r}")
    if entry.param and arg is None:
        raise UnknownCaseError(f"case {name!r} needs a parameter, e.g. {name}({entry.minimum})")
    if not entry.param and arg is not None:
        raise UnknownCaseError(f"case {name!r} takes no parameter")
    return entry, arg


def _resolve_base(case_id: str) -> CatalogCase:
    entry, arg = _parse_base(case_id)
    return entry.builder(arg) if entry.param else entry.builder()


def _split_tensor(body: str) -> Tuple[str, str]:
    if "×" in body:
        left, _, right = body.partition("×")
        return left, right
    # "x" also occurs inside ids such as ohno_3x3_rank4: take the first split with two valid halves
    for pos, ch in enumerate(body):
        if ch != "x":
            continue
        left, right = body[:pos], body[pos + 1:]
        try:
            _parse_base(left)
            _parse_base(right)
        except UnknownCaseError:
            continue
        return left, right
    raise UnknownCaseError(f"cannot split tensor id {body!r} into two case ids")


def _not_extreme_case(a: CatalogCase, b: CatalogCase) -> CatalogCase:
    family = tensor_cpmap(a.family, b.family)
    return CatalogCase(
        id=family.label,
        params={},
        family=family,
        expected=Expected(
            choi_rank=a.expected.choi_rank * b.expected.choi_rank,
            bound=parthasarathy_bound(family.d_in, family.d_out),
            verdict="not-extreme-witnessed",
            marginals=tensor_marginals(a.family, b.family),
            bilinear_independent=False,
        ),
    )


def resolve_tensor(case_id: str) -> CatalogCase:
    """
    Build "tensor:<idA>×<idB>".

    The listed not-extreme pair is built directly; every other pair goes
    through :func:`compose_extremal`, whose hypotheses must hold.

    :raises UnknownCaseError: If a factor is unknown or the hypotheses fail.
    """
    left_id, right_id = _split_tensor(case_id[len("tensor:"):])
    a, b = _resolve_base(left_id), _resolve_base(right_id)
    if tensor_label(a.id, b.id) == NOT_EXTREME_PRESET:
        return _not_extreme_case(a, b)
    try:
        return compose_extremal(a.family, b.family, recertify=False)
    except HypothesisError as e:
        raise UnknownCaseError(f"{case_id!r} is not a preset and its factors fail the hypothesis {e}") from e


def resolve_case(case_id: str) -> CatalogCase:
    """
    Resolve a case id to a freshly built :class:`CatalogCase`.

    :param case_id: ``"five_rank7"``, ``"ohno_hermitian(4)"`` or ``"tensor:A×B"``.
    :raises UnknownCaseError: If the id names no case.
    :raises ValueError: If a parameter violates the constructor's range.
    """
    case_id = case_id.strip()
    if case_id.startswith("tensor:"):
        return resolve_tensor(case_id)
    return _resolve_base(case_id)

