"""
choisense.certify.certificate
=============================

Runs every extremality check on a Kraus family and folds the results into
a :class:`Certificate`.

Verdict rules
-------------
- ``extreme-unital-set``          {V_i*V_j} independent
- ``extreme-doubly-constrained``  otherwise, if the pairs (V_i*V_j, V_jV_i*) are independent
- ``not-extreme-witnessed``       otherwise, if the family itself is independent (minimal)
- ``indeterminate``               otherwise

Positive verdicts are conclusive. A negative one is conclusive only for a
minimal decomposition, and for the doubly-constrained set the output
carries a caveat note.

Usage
-----
>>> from choisense.catalog.registry import resolve_case
>>> from choisense.certify.certificate import verify_case
>>> report = verify_case(resolve_case("five_rank7"))
>>> report.certificate.verdict, report.passed
('extreme-doubly-constrained', True)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from choisense.algebra.linalg import (
    DenseMatrix,
    Independence,
    hstack,
    matmul,
    null_space,
    partial_trace_left,
    partial_trace_right,
    row_independence,
    stack_rows,
    vectorize,
)
from choisense.algebra.scalar import ONE, ZERO, RadScalar
from choisense.catalog.case import CatalogCase, Verdict
from choisense.certify.criteria import (
    FloatIndependence,
    choi_positivity,
    dual_system,
    float_criteria,
    float_minimality,
    gram_system,
    parthasarathy_bound,
    witness_residual,
)
from choisense.config import DEFAULT_SETTINGS, CertifySettings, FloatTol, resolve_mode
from choisense.maps.cpmap import (
    KrausFamily,
    MarginalPair,
    choi_rank,
    choi_rank_float,
    marginals,
    sum_products,
)

DOUBLY_CONSTRAINED_CAVEAT = (
    "negative verdict read off the given minimal decomposition; the bilinear "
    "criterion is only known to be necessary for the unital-set case"
)


@dataclass
class Certificate:
    """Structured outcome of an extremality verification."""

    case_id: str
    d_in: int
    d_out: int
    family_size: int
    family_independent: bool
    gram_independent: bool
    dual_gram_independent: bool
    bilinear_independent: bool
    choi_rank: int
    bound: int
    marginal_right: DenseMatrix
    marginal_left: DenseMatrix
    verdict: Verdict
    mode: str
    ranks: Dict[str, int] = field(default_factory=dict)
    witnesses: Dict[str, Tuple[RadScalar, ...]] = field(default_factory=dict)
    float_witnesses: Dict[str, List[complex]] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    choi_eigen_range: Optional[Tuple[float, float]] = None

    @property
    def witness(self) -> Optional[Tuple[RadScalar, ...]]:
        """The bilinear dependence vector, when one was found."""
        return self.witnesses.get("bilinear")

    @property
    def attains_bound(self) -> bool:
        return self.verdict.startswith("extreme") and self.choi_rank == self.bound

    @property
    def failed_checks(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def decide_verdict(family_independent: bool, gram_independent: bool, bilinear_independent: bool) -> Verdict:
    if gram_independent:
        return "extreme-unital-set"
    if bilinear_independent:
        return "extreme-doubly-constrained"
    if family_independent:
        return "not-extreme-witnessed"
    return "indeterminate"


def _exact_checks(family: KrausFamily, cert_checks: Dict[str, bool]) -> Dict[str, Independence]:
    systems = {
        "family": stack_rows([vectorize(v) for v in family.ops]),
        "gram": gram_system(family),
        "dual": dual_system(family),
    }
    systems["bilinear"] = hstack(systems["gram"], systems["dual"])
    results = {name: row_independence(system) for name, system in systems.items()}
    for name, result in results.items():
        if result.witness is not None:
            cert_checks[f"{name}_witness_resubstitutes"] = witness_residual(systems[name], result.witness)
    return results


def _float_checks(family: KrausFamily, tol: FloatTol, settings: CertifySettings) -> Dict[str, FloatIndependence]:
    gram, dual, bilinear = float_criteria(family, tol, settings.FLOAT_WITNESS_LIMIT)
    return {"family": float_minimality(family, tol), "gram": gram, "dual": dual, "bilinear": bilinear}


def certify(
    family: KrausFamily,
    expected_marginals: Optional[MarginalPair] = None,
    case_id: Optional[str] = None,
    mode: Optional[str] = None,
    tol: Optional[FloatTol] = None,
    settings: CertifySettings = DEFAULT_SETTINGS,
    verbose: bool = False,
) -> Certificate:
    """
    Run minimality, both independence criteria, the Choi rank, the rank
    bound and the marginals on ``family``.

    :param family: The Kraus family to certify.
    :type family: KrausFamily
    :param expected_marginals: Optional marginals to compare against; a
        mismatch is recorded as a failed check, never raised.
    :param case_id: Identifier stored on the certificate.
    :param mode: ``"exact"``, ``"float"`` or None for the size-based default.
    :param tol: Float rank tolerance override (float mode only).
    :param verbose: Print progress lines.
    :return: The certificate.
    :rtype: Certificate
    """
    mode = resolve_mode(family.d_in, family.d_out, mode, settings)
    tol = settings.FLOAT_RANK_TOL if tol is None else tol
    case_id = case_id or family.label or f"family({family.d_in}→{family.d_out}, n={family.size})"
    if verbose:
        print(f"🔎 Certifying {case_id} [{mode}]: {family.size} operators, {family.d_in}→{family.d_out}")

    checks: Dict[str, bool] = {}
    witnesses: Dict[str, Tuple[RadScalar, ...]] = {}
    float_witnesses: Dict[str, List[complex]] = {}

    if mode == "exact":
        results = _exact_checks(family, checks)
        cr = choi_rank(family)
        for name, result in results.items():
            if result.witness is not None:
                witnesses[name] = result.witness
    else:
        results = _float_checks(family, tol, settings)
        cr = choi_rank_float(family, tol)
        for name, result in results.items():
            if result.witness is not None:
                float_witnesses[name] = [complex(z) for z in np.asarray(result.witness)]

    pair = marginals(family)
    bound = parthasarathy_bound(family.d_in, family.d_out)
    fam, gram, dual, bil = (results[k] for k in ("family", "gram", "dual", "bilinear"))
    verdict = decide_verdict(fam.independent, gram.independent, bil.independent)

    checks["gram_implies_bilinear"] = bil.independent or not gram.independent
    checks["bilinear_implies_minimal"] = fam.independent or not bil.independent
    checks["choi_rank_matches_minimality"] = (cr == family.size) == fam.independent
    if verdict.startswith("extreme"):
        checks["rank_within_bound"] = cr <= bound
    if expected_marginals is not None:
        checks["marginals_match"] = pair.left == expected_marginals.left and pair.right == expected_marginals.right
    positive, lo, hi = choi_positivity(family, settings.POSITIVITY_TOL)
    checks["choi_positive"] = positive

    notes: List[str] = []
    if verdict == "not-extreme-witnessed":
        notes.append(DOUBLY_CONSTRAINED_CAVEAT)

    cert = Certificate(
        case_id=case_id,
        d_in=family.d_in,
        d_out=family.d_out,
        family_size=family.size,
        family_independent=fam.independent,
        gram_independent=gram.independent,
        dual_gram_independent=dual.independent,
        bilinear_independent=bil.independent,
        choi_rank=cr,
        bound=bound,
        marginal_right=pair.right,
        marginal_left=pair.left,
        verdict=verdict,
        mode=mode,
        ranks={name: result.rank for name, result in results.items()},
        witnesses=witnesses,
        float_witnesses=float_witnesses,
        checks=checks,
        notes=notes,
        choi_eigen_range=(lo, hi),
    )
    if verbose:
        status = "✅" if not cert.failed_checks else "⚠️"
        print(f"{status} {case_id}: CR={cr}, bound={bound}, verdict={verdict}")
    return cert


# ============================================================
# Case verification
# ============================================================
@dataclass(frozen=True)
class Mismatch:
    field: str
    claimed: str
    computed: str


@dataclass
class VerificationReport:
    case: CatalogCase
    certificate: Certificate
    mismatches: List[Mismatch]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def comparison_rows(self) -> List[Tuple[str, str, str]]:
        """(field, claimed, computed) for the headline properties."""
        exp, cert = self.case.expected, self.certificate
        return [
            ("choi_rank", str(exp.choi_rank), str(cert.choi_rank)),
            ("bound", str(exp.bound), str(cert.bound)),
            ("verdict", exp.verdict, cert.verdict),
        ]


def verify_case(
    case: CatalogCase,
    mode: Optional[str] = None,
    tol: Optional[FloatTol] = None,
    settings: CertifySettings = DEFAULT_SETTINGS,
    verbose: bool = False,
) -> VerificationReport:
    """Certify a catalog case and diff the outcome against its expected block."""
    exp = case.expected
    cert = certify(
        case.family,
        expected_marginals=exp.marginals,
        case_id=case.id,
        mode=mode,
        tol=tol,
        settings=settings,
        verbose=verbose,
    )
    cert.notes.extend(n for n in case.notes if n not in cert.notes)

    mismatches: List[Mismatch] = []

    def compare(name: str, claimed, computed) -> None:
        if claimed is not None and claimed != computed:
            mismatches.append(Mismatch(name, str(claimed), str(computed)))

    compare("choi_rank", exp.choi_rank, cert.choi_rank)
    compare("bound", exp.bound, cert.bound)
    compare("verdict", exp.verdict, cert.verdict)
    compare("hermitian_ops", exp.hermitian_ops, case.family.all_hermitian())
    compare("gram_independent", exp.gram_independent, cert.gram_independent)
    compare("dual_gram_independent", exp.dual_gram_independent, cert.dual_gram_independent)
    compare("bilinear_independent", exp.bilinear_independent, cert.bilinear_independent)
    for name in cert.failed_checks:
        mismatches.append(Mismatch(name, "True", "False"))
    return VerificationReport(case, cert, mismatches)


# ============================================================
# Supplementary checks
# ============================================================
def _column(values) -> DenseMatrix:
    return DenseMatrix(len(values), 1, values)


def _basis_vector(k: int, d: int) -> List[RadScalar]:
    return [ONE if i == k else ZERO for i in range(d)]


def _tensor_vector(x, y) -> List[RadScalar]:
    return [a * b for a in x for b in y]


def support_reduction_check(rho: DenseMatrix, d1: int, d2: int) -> bool:
    """
    ker(ρ₁)⊗ℂ^{d2} ⊆ ker(ρ) and ℂ^{d1}⊗ker(ρ₂) ⊆ ker(ρ), checked exactly.

    ρ₁, ρ₂ are the partial traces over the second and first factor; their
    kernels come from exact elimination, and ρ is applied to x⊗e_k (resp.
    e_k⊗y) for every kernel basis vector and standard basis vector.
    """
    rho1 = partial_trace_right(rho, d1, d2)
    rho2 = partial_trace_left(rho, d1, d2)
    for x in null_space(rho1):
        for k in range(d2):
            if not matmul(rho, _column(_tensor_vector(x, _basis_vector(k, d2)))).is_zero():
                return False
    for y in null_space(rho2):
        for k in range(d1):
            if not matmul(rho, _column(_tensor_vector(_basis_vector(k, d1), y))).is_zero():
                return False
    return True


@dataclass(frozen=True)
class SumIdentityReport:
    gram_sum: DenseMatrix
    dual_sum: DenseMatrix
    gram_is_identity: bool
    dual_is_identity: bool


def sum_identity_check(family: KrausFamily) -> SumIdentityReport:
    """Compare scale·Σ_{i,j}V_i*V_j and scale·Σ_{i,j}V_jV_i* against the identity."""
    gram_sum = sum_products(family)
    dual_sum = sum_products(family, dual=True)
    return SumIdentityReport(
        gram_sum=gram_sum,
        dual_sum=dual_sum,
        gram_is_identity=gram_sum == DenseMatrix.identity(family.d_out),
        dual_is_identity=dual_sum == DenseMatrix.identity(family.d_in),
    )
