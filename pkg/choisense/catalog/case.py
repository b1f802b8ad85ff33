from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, get_args

from choisense.maps.cpmap import KrausFamily, MarginalPair

Verdict = Literal[
    "extreme-unital-set",
    "extreme-doubly-constrained",
    "not-extreme-witnessed",
    "indeterminate",
]

VERDICTS = get_args(Verdict)


@dataclass(frozen=True)
class Expected:
    """Claimed properties of a catalog case, compared by ``verify_case``."""

    choi_rank: int
    bound: int
    verdict: Verdict
    marginals: Optional[MarginalPair] = None
    hermitian_ops: bool = False
    gram_independent: Optional[bool] = None
    dual_gram_independent: Optional[bool] = None
    bilinear_independent: Optional[bool] = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}; expected one of {', '.join(VERDICTS)}")


@dataclass(frozen=True)
class CatalogCase:
    id: str
    params: Dict[str, int]
    family: KrausFamily
    expected: Expected
    notes: List[str] = field(default_factory=list)

    @property
    def d_in(self) -> int:
        return self.family.d_in

    @property
    def d_out(self) -> int:
        return self.family.d_out
