from pydantic import BaseModel, Field
from typing import Dict, List, Literal, Optional

VerdictName = Literal["extreme-unital-set", "extreme-doubly-constrained", "not-extreme-witnessed", "indeterminate"]


# --- Exact numbers ---
class ScalarTermModel(BaseModel):
    rad: int = Field(description="Squarefree radicand m of the term (1 for the rational part)")
    re: str = Field(description="Real part of the coefficient as 'p/q'")
    im: str = Field(description="Imaginary part of the coefficient as 'p/q'")


class MatrixModel(BaseModel):
    rows: int
    cols: int
    # each entry is the term list of one scalar; [] is zero
    entries: List[List[ScalarTermModel]] = Field(description="Row-major entries, rows·cols of them")


# --- Catalog records ---
class ExpectedModel(BaseModel):
    choi_rank: int
    bound: int
    verdict: VerdictName
    hermitian_ops: bool = False
    marginal_left: Optional[MatrixModel] = Field(default=None, description="Claimed Φ*(I), d_in×d_in")
    marginal_right: Optional[MatrixModel] = Field(default=None, description="Claimed Φ(I), d_out×d_out")
    gram_independent: Optional[bool] = None
    dual_gram_independent: Optional[bool] = None
    bilinear_independent: Optional[bool] = None


class KrausFamilyModel(BaseModel):
    label: str = Field(default="", description="Case id or free-form name")
    d_in: int
    d_out: int
    scale: str = Field(description="Positive rational global factor as 'p/q'")
    ops: List[MatrixModel] = Field(description="Kraus operators, each d_in×d_out")
    notes: List[str] = Field(default_factory=list)
    expected: Optional[ExpectedModel] = Field(default=None, description="Claimed properties, present for catalog exports")


# --- Certification output ---
class CertificateModel(BaseModel):
    case_id: str
    mode: Literal["exact", "float"]
    d_in: int
    d_out: int
    family_size: int
    choi_rank: int
    bound: int
    attains_bound: bool = Field(description="Extreme verdict with choi_rank equal to the bound")
    verdict: VerdictName
    family_independent: bool
    gram_independent: bool
    dual_gram_independent: bool
    bilinear_independent: bool
    ranks: Dict[str, int] = Field(description="Rank of each assembled system (family, gram, dual, bilinear)")
    witnesses: Dict[str, List[List[ScalarTermModel]]] = Field(
        default_factory=dict, description="Exact dependence vectors a_ij, row (i, j) at index i·n + j"
    )
    float_witnesses: Dict[str, List[List[float]]] = Field(
        default_factory=dict, description="Float dependence vectors as [re, im] pairs"
    )
    checks: Dict[str, bool]
    notes: List[str] = Field(default_factory=list)
    marginal_left: MatrixModel
    marginal_right: MatrixModel
    choi_eigen_range: Optional[List[float]] = Field(default=None, description="[smallest, largest] Choi eigenvalue")


class MismatchModel(BaseModel):
    field: str
    claimed: str
    computed: str


class VerificationModel(BaseModel):
    passed: bool
    certificate: CertificateModel
    mismatches: List[MismatchModel]


class CaseSummaryModel(BaseModel):
    case: str
    d_in: int
    d_out: int
    mode: Optional[Literal["exact", "float"]] = None
    choi_rank_claimed: int
    choi_rank: Optional[int] = None
    bound_claimed: int
    bound: Optional[int] = None
    verdict_claimed: VerdictName
    verdict: Optional[VerdictName] = None
    passed: bool
    mismatches: List[str] = Field(default_factory=list, description="Names of the fields that differ")
    error: Optional[str] = Field(default=None, description="Exception text when the case could not be certified")


class ReportModel(BaseModel):
    passed: bool
    cases: List[CaseSummaryModel] = Field(description="One row per case, sorted by case id")
