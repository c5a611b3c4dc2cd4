import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frcodes.errors import EnumerationCapError, InvalidCodeError, ParameterError
from frcodes.frcore import (
    DssParams,
    FrCode,
    c_mbr,
    is_universally_good,
    pairwise_intersections,
    rate,
    validate_fr,
)

from .conftest import brute_rate, constructed_codes

FANO_SETS = [(1, 2, 3), (3, 4, 5), (1, 5, 6), (1, 4, 7), (2, 5, 7), (3, 6, 7), (2, 4, 6)]


def test_fano_sets_validate():
    code = FrCode(n=7, d=3, rho=3, theta=7, node_sets=FANO_SETS)
    assert validate_fr(code).ok


def test_identical_node_sets_are_allowed():
    code = FrCode(n=4, d=2, rho=2, theta=4, node_sets=[(1, 2), (1, 2), (3, 4), (3, 4)])
    assert validate_fr(code).ok


def test_corrupted_fano_names_packets():
    sets = FANO_SETS[:6] + [(2, 4, 7)]
    report = validate_fr(FrCode(n=7, d=3, rho=3, theta=7, node_sets=sets))
    assert not report.ok
    bad = {v.index: v.message for v in report.violations if v.kind == "multiplicity"}
    assert set(bad) == {6, 7}
    assert "appears 2 times" in bad[6]
    assert "appears 4 times" in bad[7]


def test_validation_reports_node_problems():
    code = FrCode(n=3, d=2, rho=2, theta=3, node_sets=[(1, 2), (1, 1), (2, 9)])
    kinds = {(v.kind, v.index) for v in validate_fr(code).violations}
    assert ("duplicate_packet", 2) in kinds
    assert ("node_size", 2) in kinds
    assert ("out_of_range", 3) in kinds


def test_validation_checks_repetition_identity():
    code = FrCode(n=3, d=2, rho=3, theta=3, node_sets=[(1, 2), (1, 3), (2, 3)])
    assert any(v.kind == "repetition_identity" for v in validate_fr(code).violations)


@pytest.mark.parametrize("n,k,d,expected", [(5, 3, 4, 9), (7, 3, 3, 6), (10, 1, 7, 7), (4, 1, 1, 1)])
def test_c_mbr(n, k, d, expected):
    assert c_mbr(n, k, d) == expected


def test_c_mbr_independent_of_n():
    for k, d in [(1, 3), (2, 3), (3, 3), (2, 5), (4, 6)]:
        assert c_mbr(d + 1, k, d) == c_mbr(d + 20, k, d)


@pytest.mark.parametrize("n,k,d", [(5, 0, 3), (5, 4, 3), (5, 2, 5), (5, 2, 7)])
def test_c_mbr_domain(n, k, d):
    with pytest.raises(ParameterError):
        c_mbr(n, k, d)


def test_rate_golden(fano, grid):
    assert rate(fano, 3).value == 6
    assert rate(fano, 2).value == 5 == brute_rate(fano, 2)
    assert rate(grid, 3).value == 7
    assert rate(grid, 2).value == 5 == brute_rate(grid, 2)


def test_rate_domain_and_cap(fano):
    with pytest.raises(ParameterError):
        rate(fano, 0)
    with pytest.raises(ParameterError):
        rate(fano, 8)
    with pytest.raises(EnumerationCapError) as info:
        rate(fano, 3, cap=34)
    assert info.value.count == comb(7, 3)
    assert rate(fano, 3, cap=35).value == 6


@pytest.mark.parametrize("label,code", constructed_codes(max_n=15), ids=lambda x: x if isinstance(x, str) else "")
def test_rate_properties_on_constructions(label, code):
    values = [rate(code, k).value for k in range(1, code.n + 1)]
    assert values[0] == code.d
    assert values[-1] == code.theta
    assert values == sorted(values)
    m = max(pairwise_intersections(code), default=0)
    assert m <= 1
    for k in range(1, min(code.d, 5) + 1):
        v = values[k - 1]
        assert code.d <= v <= min(k * code.d, code.theta)
        assert v >= k * code.d - comb(k, 2) * m
        assert v == brute_rate(code, k)


def test_universal_goodness_examples(fano, grid):
    assert is_universally_good(fano) == (True, (0, 0, 0))
    good, margins = is_universally_good(grid)
    assert good and margins[2] == 1
    doubled = FrCode(n=4, d=2, rho=2, theta=4, node_sets=[(1, 2), (1, 2), (3, 4), (3, 4)])
    good, margins = is_universally_good(doubled)
    assert not good
    assert margins == (0, 2 - 3)


def test_universal_goodness_requires_valid_code():
    with pytest.raises(InvalidCodeError):
        is_universally_good(FrCode(n=3, d=2, rho=2, theta=3, node_sets=[(1, 2), (1, 2), (1, 2)]))


def test_dss_params():
    p = DssParams(n=7, k=3, d=3, rho=3)
    assert p.theta == 7 and p.theta * p.rho == p.n * p.d
    with pytest.raises(ParameterError):
        DssParams(n=5, k=2, d=3, rho=2)  # nd odd
    with pytest.raises(ParameterError):
        DssParams(n=5, k=4, d=3, rho=3)
    with pytest.raises(ParameterError):
        DssParams(n=5, k=1, d=3, rho=1)


def test_node_order_matters_but_set_order_does_not():
    a = FrCode.from_sets([(3, 2, 1), (4, 5, 6)])
    b = FrCode.from_sets([(1, 2, 3), (6, 5, 4)])
    c = FrCode.from_sets([(4, 5, 6), (1, 2, 3)])
    assert a == b
    assert a != c


def test_json_roundtrip(fano):
    doc = json.loads(fano.to_json())
    assert doc == {"n": 7, "d": 3, "rho": 3, "theta": 7, "nodes": [list(s) for s in FANO_SETS]}
    assert FrCode.from_json(fano.to_json()) == fano
    with pytest.raises(ParameterError):
        FrCode.from_dict({"n": 3})


def test_from_sets_infers_parameters():
    code = FrCode.from_sets(FANO_SETS)
    assert (code.n, code.d, code.rho, code.theta) == (7, 3, 3, 7)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sets(st.integers(1, 8), min_size=3, max_size=3), min_size=2, max_size=8), st.data())
def test_rate_matches_oracle_on_arbitrary_set_systems(sets, data):
    code = FrCode.from_sets(sets, d=3, theta=8, rho=2)
    k = data.draw(st.integers(1, len(sets)))
    assert rate(code, k).value == brute_rate(code, k)
