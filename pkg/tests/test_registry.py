import pytest

from choisense.catalog.registry import (
    CASES,
    NOT_EXTREME_PRESET,
    UnknownCaseError,
    list_cases,
    preset_ids,
    report_ids,
    resolve_case,
)


# ---------------------------------------------------------
# Listing
# ---------------------------------------------------------
def test_list_cases_is_deterministic():
    rows = list_cases()
    assert rows == list_cases()
    ids = [r["id"] for r in rows]
    assert ids[:3] == ["ohno_hermitian(d)", "ohno_3x3_rank4", "ohno_4x4_rank5"]
    assert len(ids) == len(set(ids)) == len(CASES) + 4
    by_id = {r["id"]: r["params"] for r in rows}
    assert by_id["ohno_hermitian(d)"] == {"d": "≥3"}
    assert by_id["qubit_to_d(d)"] == {"d": "≥4"}
    assert by_id["five_rank7"] == {}
    assert by_id["tensor:ohno_hermitian(k)×five_rank7"] == {"k": "3..14"}
    assert NOT_EXTREME_PRESET in by_id


def test_report_ids():
    ids = report_ids()
    assert len(ids) == len(set(ids)) == 33
    assert "cyclic_d_to_d_plus_1(6)" in ids
    assert "qubit_to_d(8)" in ids
    assert "tensor:ohno_hermitian(14)×five_rank7" in preset_ids()
    assert all(pid in ids for pid in preset_ids())


# ---------------------------------------------------------
# Resolution
# ---------------------------------------------------------
def test_resolve_base_cases():
    assert resolve_case("five_rank7").family.size == 7
    assert resolve_case(" ohno_hermitian(4) ").id == "ohno_hermitian(4)"
    assert resolve_case("qubit_to_d(6)").params == {"d": 6}


@pytest.mark.parametrize("case_id", ["nosuch", "ohno_hermitian", "five_rank7(3)", "tensor:nosuch×five_rank7", ""])
def test_unknown_ids(case_id):
    with pytest.raises(UnknownCaseError):
        resolve_case(case_id)


def test_out_of_range_parameter_is_a_value_error():
    with pytest.raises(ValueError) as info:
        resolve_case("ohno_hermitian(2)")
    assert not isinstance(info.value, UnknownCaseError)


def test_ascii_tensor_separator():
    case = resolve_case("tensor:ohno_3x3_rank4xohno_4x4_rank5")
    assert case.id == NOT_EXTREME_PRESET
    assert case.expected.verdict == "not-extreme-witnessed"
    assert (case.expected.choi_rank, case.expected.bound) == (20, 16)
    assert case.expected.bilinear_independent is False


def test_tensor_preset_expected_values():
    case = resolve_case("tensor:ohno_hermitian(5)×five_rank7")
    assert (case.d_in, case.d_out) == (25, 25)
    assert (case.expected.choi_rank, case.expected.bound) == (35, 35)


def test_non_preset_tensor_needs_hypotheses():
    with pytest.raises(UnknownCaseError):
        resolve_case("tensor:three_to_four×five_rank7")
    case = resolve_case("tensor:ohno_hermitian(3)×remark_counterexample")
    assert case.expected.verdict == "extreme-unital-set"
