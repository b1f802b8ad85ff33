import json
from fractions import Fraction

import numpy as np

from choisense.algebra.scalar import IMAG, RadScalar
from choisense.catalog.cases import five_rank6, remark_counterexample
from choisense.catalog.families import three_to_four_family
from choisense.certify.certificate import certify, verify_case
from choisense.maps.cpmap import as_state, choi_matrix, choi_matrix_float, identity_family
from choisense.persistence import (
    certificate_to_model,
    dumps,
    family_from_model,
    family_to_model,
    load_family,
    load_matrix_csv,
    load_matrix_json,
    save_family,
    save_matrix_csv,
    save_matrix_json,
    scalar_from_model,
    scalar_to_model,
    verification_to_model,
)
from choisense.schema import CertificateModel, KrausFamilyModel, VerificationModel


def test_scalar_encoding():
    x = RadScalar.sqrt(Fraction(9, 176)) - IMAG * RadScalar.sqrt(3) + Fraction(1, 2)
    terms = scalar_to_model(x)
    assert [t.rad for t in terms] == [1, 3, 11]
    assert terms[0].re == "1/2" and terms[0].im == "0/1"
    assert terms[1].re == "0/1" and terms[1].im == "-1/1"
    assert terms[2].re == "3/44"
    assert scalar_from_model(terms) == x
    assert scalar_to_model(RadScalar()) == []


def test_family_file_round_trip(tmp_path):
    case = remark_counterexample()
    path = tmp_path / "remark.json"
    save_family(str(path), case.family, case)
    loaded = load_family(str(path))
    assert loaded == case.family
    assert loaded.label == "remark_counterexample"

    raw = json.loads(path.read_text(encoding="utf-8"))
    assert raw["expected"]["verdict"] == "extreme-unital-set"
    assert raw["expected"]["dual_gram_independent"] is False
    assert raw["notes"] == case.notes
    assert list(raw) == sorted(raw)


def test_integer_scale_is_written_as_a_fraction():
    model = family_to_model(identity_family(2, 3))
    assert model.scale == "3/1"
    assert model.ops[0].entries[0][0].re == "1/1"
    assert family_from_model(model) == identity_family(2, 3)


def test_dumps_is_canonical():
    model = family_to_model(five_rank6().family, five_rank6())
    text = dumps(model)
    assert text.endswith("}\n")
    assert dumps(KrausFamilyModel.model_validate_json(text)) == text


def test_choi_json_round_trip(tmp_path):
    j = choi_matrix(five_rank6().family)
    path = str(tmp_path / "nested" / "choi.json")
    save_matrix_json(path, j)
    assert load_matrix_json(path) == j


def test_choi_csv_of_normalized_state(tmp_path):
    path = str(tmp_path / "choi.csv")
    df = save_matrix_csv(path, choi_matrix_float(as_state(three_to_four_family())))
    assert list(df.columns[:2]) == ["0.re", "0.im"]
    m = load_matrix_csv(path)
    assert m.shape == (12, 12)
    assert abs(np.trace(m) - 1) < 1e-12
    assert np.allclose(m, m.conj().T)


def test_certificate_model_round_trip():
    cert = certify(remark_counterexample().family)
    model = certificate_to_model(cert)
    assert model.verdict == "extreme-unital-set"
    assert model.witnesses["dual"]
    text = dumps(model)
    assert dumps(CertificateModel.model_validate_json(text)) == text


def test_verification_model():
    model = verification_to_model(verify_case(five_rank6()))
    assert model.passed
    assert model.mismatches == []
    parsed = VerificationModel.model_validate_json(dumps(model))
    assert parsed.certificate.choi_rank == 6
    assert parsed.certificate.marginal_left.rows == 5
