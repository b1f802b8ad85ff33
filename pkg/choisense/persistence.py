"""
Encoding between domain objects and the pydantic records in
:mod:`choisense.schema`, plus the file formats:

- JSON: sorted keys, 2-space indent, UTF-8, trailing newline
- CSV (float matrices): one ``<j>.re`` and one ``<j>.im`` column per matrix column
"""

import json
import os
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from choisense.algebra.linalg import DenseMatrix, to_float_matrix
from choisense.algebra.scalar import RadScalar
from choisense.catalog.case import CatalogCase
from choisense.certify.certificate import Certificate, VerificationReport
from choisense.maps.cpmap import KrausFamily
from choisense.schema import (
    CertificateModel,
    ExpectedModel,
    KrausFamilyModel,
    MatrixModel,
    MismatchModel,
    ScalarTermModel,
    VerificationModel,
)


# ============================================================
# Scalars and matrices
# ============================================================
def rational_text(q: Fraction) -> str:
    """Always 'p/q', integers included ('3/1')."""
    return f"{q.numerator}/{q.denominator}"


def scalar_to_model(x: RadScalar) -> List[ScalarTermModel]:
    return [ScalarTermModel(rad=rad, re=rational_text(re), im=rational_text(im)) for rad, re, im in x.terms()]


def scalar_from_model(terms: Sequence[ScalarTermModel]) -> RadScalar:
    return RadScalar({t.rad: (Fraction(t.re), Fraction(t.im)) for t in terms})


def matrix_to_model(m: DenseMatrix) -> MatrixModel:
    return MatrixModel(rows=m.rows, cols=m.cols, entries=[scalar_to_model(x) for x in m.entries])


def matrix_from_model(model: MatrixModel) -> DenseMatrix:
    return DenseMatrix(model.rows, model.cols, [scalar_from_model(t) for t in model.entries])


# ============================================================
# Families and certificates
# ============================================================
def family_to_model(family: KrausFamily, case: Optional[CatalogCase] = None) -> KrausFamilyModel:
    """Encode a family; when ``case`` is given its claims go under ``expected``."""
    expected = None
    notes: List[str] = []
    if case is not None:
        exp = case.expected
        expected = ExpectedModel(
            choi_rank=exp.choi_rank,
            bound=exp.bound,
            verdict=exp.verdict,
            hermitian_ops=exp.hermitian_ops,
            marginal_left=matrix_to_model(exp.marginals.left) if exp.marginals else None,
            marginal_right=matrix_to_model(exp.marginals.right) if exp.marginals else None,
            gram_independent=exp.gram_independent,
            dual_gram_independent=exp.dual_gram_independent,
            bilinear_independent=exp.bilinear_independent,
        )
        notes = list(case.notes)
    return KrausFamilyModel(
        label=family.label,
        d_in=family.d_in,
        d_out=family.d_out,
        scale=rational_text(family.scale),
        ops=[matrix_to_model(v) for v in family.ops],
        notes=notes,
        expected=expected,
    )


def family_from_model(model: KrausFamilyModel) -> KrausFamily:
    """
    :raises DimensionError: If an operator's shape disagrees with d_in×d_out.
    """
    ops = tuple(matrix_from_model(m) for m in model.ops)
    return KrausFamily(model.d_in, model.d_out, Fraction(model.scale), ops, model.label)


def certificate_to_model(cert: Certificate) -> CertificateModel:
    return CertificateModel(
        case_id=cert.case_id,
        mode=cert.mode,
        d_in=cert.d_in,
        d_out=cert.d_out,
        family_size=cert.family_size,
        choi_rank=cert.choi_rank,
        bound=cert.bound,
        attains_bound=cert.attains_bound,
        verdict=cert.verdict,
        family_independent=cert.family_independent,
        gram_independent=cert.gram_independent,
        dual_gram_independent=cert.dual_gram_independent,
        bilinear_independent=cert.bilinear_independent,
        ranks=dict(cert.ranks),
        witnesses={k: [scalar_to_model(x) for x in w] for k, w in cert.witnesses.items()},
        float_witnesses={k: [[z.real, z.imag] for z in w] for k, w in cert.float_witnesses.items()},
        checks=dict(cert.checks),
        notes=list(cert.notes),
        marginal_left=matrix_to_model(cert.marginal_left),
        marginal_right=matrix_to_model(cert.marginal_right),
        choi_eigen_range=list(cert.choi_eigen_range) if cert.choi_eigen_range else None,
    )


def verification_to_model(report: VerificationReport) -> VerificationModel:
    return VerificationModel(
        passed=report.passed,
        certificate=certificate_to_model(report.certificate),
        mismatches=[MismatchModel(field=m.field, claimed=m.claimed, computed=m.computed) for m in report.mismatches],
    )


# ============================================================
# Files
# ============================================================
def dumps(model: BaseModel) -> str:
    """Canonical JSON text: sorted keys, 2-space indent."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_json(path: str, model: BaseModel) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(model))


def save_family(path: str, family: KrausFamily, case: Optional[CatalogCase] = None) -> None:
    write_json(path, family_to_model(family, case))


def load_family(path: str) -> KrausFamily:
    with open(path, "r", encoding="utf-8") as f:
        return family_from_model(KrausFamilyModel.model_validate_json(f.read()))


def save_matrix_json(path: str, m: DenseMatrix) -> None:
    write_json(path, matrix_to_model(m))


def load_matrix_json(path: str) -> DenseMatrix:
    with open(path, "r", encoding="utf-8") as f:
        return matrix_from_model(MatrixModel.model_validate_json(f.read()))


def save_matrix_csv(path: str, m: Union[DenseMatrix, np.ndarray]) -> pd.DataFrame:
    """Write a matrix in double precision; returns the frame that was written."""
    arr = to_float_matrix(m) if isinstance(m, DenseMatrix) else np.asarray(m, dtype=complex)
    data = {}
    for j in range(arr.shape[1]):
        data[f"{j}.re"] = arr[:, j].real
        data[f"{j}.im"] = arr[:, j].imag
    df = pd.DataFrame(data)
    _ensure_parent(path)
    df.to_csv(path, index=False)
    return df


def load_matrix_csv(path: str) -> np.ndarray:
    df = pd.read_csv(path)
    cols = len(df.columns) // 2
    return np.stack([df[f"{j}.re"].to_numpy() + 1j * df[f"{j}.im"].to_numpy() for j in range(cols)], axis=1)
