from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from agccz.classical_codes import construct_base_code
from agccz.tower_calculus import (
    FormulaRegimeError,
    InvalidK,
    TowerLevel,
    classical_params,
    compare_table3,
    deg_g,
    distance_limit,
    genus,
    k_bounds,
    length,
    load_reference,
    optimize_k,
    overhead_exponent,
    q_ary_entropy,
    quantum_params,
    rate_limit,
    table3,
    table3_csv,
    table3_json,
    tvz_check,
)

FROZEN_CLASSICAL = {
    (8, 1): (448, 96, 304, 144, 49),
    (8, 2): (3584, 712, 2432, 1152, 441),
    (8, 3): (28672, 5248, 19456, 9216, 3969),
    (16, 1): (3840, 864, 2752, 1088, 225),
    (16, 2): (61440, 13584, 44032, 17408, 3825),
}


@pytest.mark.parametrize("key,expected", list(FROZEN_CLASSICAL.items()))
def test_frozen_classical_params(key, expected):
    cp = classical_params(TowerLevel(*key))
    assert (cp.n, cp.k, cp.d_lower, cp.deg_g, cp.genus) == expected


@pytest.mark.parametrize("r", [8, 16, 32])
def test_level_zero_matches_constructed_code(r):
    cp = classical_params(TowerLevel(r, 0))
    if r == 32:
        assert (cp.n, cp.k, cp.d_lower) == (992, 331, 662)
        return
    c = construct_base_code(r, check=False)
    assert (cp.n, cp.k, cp.deg_g) == (c.n, c.k, c.deg_g)


@given(st.sampled_from([8, 16, 32, 64]), st.integers(0, 7))
def test_level_invariants(r, j):
    L = TowerLevel(r, j)
    cp = classical_params(L)
    assert cp.k == cp.deg_g + 1 - cp.genus
    assert cp.deg_g > 2 * cp.genus - 2
    assert cp.n == length(L) and cp.deg_g == deg_g(L)
    if j:
        # the length and degree grow by exactly r per level
        prev = TowerLevel(r, j - 1)
        assert length(L) == r * length(prev)
        assert deg_g(L) == r * deg_g(prev)
        assert genus(L) > genus(prev)


def test_rate_converges_to_limit():
    for r in (8, 16, 32):
        lim = float(rate_limit(r))
        gaps = [abs(classical_params(TowerLevel(r, j)).k / length(TowerLevel(r, j)) - lim) for j in range(0, 12, 2)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-3
        L = TowerLevel(r, 11)
        assert abs(classical_params(L).d_lower / length(L) - float(distance_limit(r))) < 1e-12


def test_small_r_is_outside_formula_regime():
    with pytest.raises(FormulaRegimeError):
        classical_params(TowerLevel(4, 0))
    with pytest.raises(ValueError):
        TowerLevel(12, 0)
    with pytest.raises(ValueError):
        TowerLevel(8, -1)


def test_quantum_params_r8_k14():
    qp = quantum_params(TowerLevel(8, 0), 14)
    assert (qp.n_phys, qp.k_log, qp.d_lower, qp.d_x_lower) == (42, 14, 6, 24)
    assert qp.label() == "[[42,14,6]]"
    assert f"{qp.gamma_max:.3f}" == "0.613"


def test_invalid_k_names_the_bound():
    with pytest.raises(InvalidK, match="k_j"):
        quantum_params(TowerLevel(8, 0), 25)
    with pytest.raises(InvalidK, match=">= 1"):
        quantum_params(TowerLevel(8, 0), 0)
    lo, hi = k_bounds(TowerLevel(8, 1))
    with pytest.raises(InvalidK, match="positive distance"):
        quantum_params(TowerLevel(8, 1), hi + 1)


@given(st.sampled_from([8, 16, 32]), st.integers(0, 3), st.data())
def test_quantum_bounds_relations(r, j, data):
    L = TowerLevel(r, j)
    lo, hi = k_bounds(L)
    k = data.draw(st.integers(lo, hi))
    qp = quantum_params(L, k)
    assert qp.d_lower >= 1
    assert qp.d_lower < qp.d_x_lower
    assert qp.n_phys + qp.k_log == length(L)


def test_overhead_exponent_edge():
    assert overhead_exponent(10, 2, 1) == float("inf")
    assert overhead_exponent(100, 10, 10) == pytest.approx(1.0)


def test_optimize_k_is_the_minimum_on_small_levels():
    for r, j in [(8, 0), (8, 1), (16, 0), (8, 2)]:
        L = TowerLevel(r, j)
        best = optimize_k(L)
        lo, hi = k_bounds(L)
        gammas = [quantum_params(L, k).gamma_max for k in range(lo, hi + 1)]
        assert best.gamma_max == pytest.approx(min(gammas), rel=1e-12)


def test_table3_frozen_rows():
    rows = {(row.r, row.j): row for row in table3()}
    assert len(rows) == 15
    assert rows[(8, 0)].label() == "[[42,14,6]]"
    assert rows[(16, 0)].label() == "[[188,52,18]]"
    assert rows[(32, 0)].label() == "[[708,284,48]]"
    assert rows[(32, 4)].label() == "[[774113521,266073871,12914929]]"


def test_table3_integers_match_reference():
    problems = compare_table3(table3())
    assert not [p for p in problems if " rate" not in p and " gamma" not in p]


def test_table3_serializers():
    rows = table3([8], [0, 1])
    text = table3_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0][:5] == ["r", "j", "N", "K", "D"]
    assert parsed[1][:7] == ["8", "0", "42", "14", "6", "0.333", "0.613"]
    js = table3_json(rows)
    assert js[1]["code"] == "[[422,26,22]]"
    json.dumps(js)


def test_beyond_reference_rows_flagged():
    rows = table3([64], [0])
    assert rows and rows[0].beyond_reference


def test_reference_fixture_loads():
    ref = load_reference()
    assert ref["version"] == 1
    assert len(ref["table3"]) == 15


def test_limits_exact():
    assert rate_limit(8) == Fraction(5, 28)
    assert distance_limit(8) == Fraction(19, 28)
    for r in (8, 16, 32, 64):
        assert rate_limit(r) + distance_limit(r) == 1 - Fraction(1, r - 1)


def test_tvz_report_r8():
    rep = tvz_check(8)
    assert rep.claimed_threshold == Fraction(149, 168)
    assert rep.tvz_threshold == Fraction(6, 7)
    comps = rep.comparisons
    assert comps["claimed_threshold > tvz_threshold"]["holds"]
    assert comps["limit_sum >= tvz_threshold"]["margin"] == 0
    assert comps["rate_limit > gv_rate"]["holds"]
    assert comps["limit_sum >= claimed_threshold"]["margin"] == Fraction(-5, 168)
    json.dumps(rep.to_json())
    with pytest.raises(ValueError):
        tvz_check(4)


def test_entropy():
    assert q_ary_entropy(0.0, 64) == 0.0
    assert q_ary_entropy(1 - 1 / 64, 64) == pytest.approx(1.0)
