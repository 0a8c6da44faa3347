from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from agccz import linalg
from agccz.classical_codes import LinearCode, construct_base_code
from agccz.css_builder import (
    StandardForm,
    build_css,
    encode_logical,
    exhaustive_css_distance,
    heuristic_distance_sides,
    heuristic_distance_upper,
    reed_muller_1,
    standard_form,
    transversal_ccz_phase_check,
)
from agccz.finite_fields import gf


@pytest.fixture(scope="module")
def c8():
    return construct_base_code(8)


@pytest.fixture(scope="module")
def q42(c8):
    return build_css(c8, 14, 18, 0)


def test_standard_form_shapes(c8):
    form = standard_form(c8, 14)
    assert form.h1.shape == (14, 42)
    assert form.h0.shape == (5, 42)
    assert not linalg.matmul(c8.field, form.h0, form.h1.T).any()
    # the permuted, reduced generator spans the same code
    assert linalg.same_rowspace(c8.field, form.matrix(), c8.gen[:, form.column_perm])
    assert sorted(form.column_perm.tolist()) == list(range(56))


def test_standard_form_full_k(c8):
    form = standard_form(c8, 19)
    assert form.h0.shape[0] == 0
    with pytest.raises(ValueError):
        standard_form(c8, 20)
    with pytest.raises(ValueError):
        standard_form(c8, 0)


def test_standard_form_under_column_permutation(c8):
    rng = np.random.default_rng(3)
    perm = rng.permutation(c8.n)
    shuffled = LinearCode(c8.field, c8.gen[:, perm])
    form = standard_form(shuffled, 14)
    composed = perm[form.column_perm]
    assert linalg.same_rowspace(c8.field, form.matrix(), c8.gen[:, composed])


def test_css_42(q42):
    assert (q42.n_phys, q42.k_log, q42.d_x_lower, q42.d_z_lower) == (42, 14, 24, 6)
    assert q42.d_lower == 6 and not q42.vacuous
    assert q42.x_stabilizers.shape == (5, 42)
    assert q42.z_stabilizers.shape == (23, 42)
    assert not linalg.matmul(q42.field, q42.x_stabilizers, q42.z_stabilizers.T).any()
    data = json.loads(q42.dumps())
    assert data["n"] == 42 and data["k"] == 14 and len(data["x_stab"]) == 5


@pytest.mark.parametrize("r,k,deg_g,bound", [(16, 52, 68, 18)])
def test_css_r16_bound(r, k, deg_g, bound):
    q = build_css(construct_base_code(r, check=False), k, deg_g, 0)
    assert q.d_lower == bound


def test_vacuous_flag(c8):
    q = build_css(c8, 19, 18, 0)
    assert q.d_z_lower == 1
    assert build_css(c8, 18, 18, 3).vacuous


def test_phase_check_42(q42):
    res = transversal_ccz_phase_check(q42.form, 1000, 5)
    assert res.ok and res.samples == 1000


def test_phase_of_zero_logical_is_zero(q42):
    F = q42.field
    rng = np.random.default_rng(0)
    for _ in range(20):
        words = [encode_logical(q42.form, np.zeros(14, dtype=np.int64), rng.integers(0, 64, 5)) for _ in range(3)]
        assert int(F.sum(F.mul(F.mul(words[0], words[1]), words[2]))) == 0


def test_phase_of_basis_triple(q42):
    F = q42.field
    e1 = np.eye(14, dtype=np.int64)[0]
    w = encode_logical(q42.form, e1, np.zeros(5, dtype=np.int64))
    assert int(F.sum(F.mul(F.mul(w, w), w))) == 1


def test_phase_check_catches_non_triorthogonal():
    F = gf(1)
    # H0 is orthogonal to H1, but H1 has even weight so its cube sums to 0, not 1
    form = StandardForm(F, 1, np.arange(4), np.array([[1, 1, 0]]), np.array([[1, 1, 1]]))
    res = transversal_ccz_phase_check(form, 50, 0)
    assert not res.ok and res.counterexample is not None


def test_reed_muller_toy_oracle():
    c = reed_muller_1(4)
    q = build_css(c, 1)
    assert q.n_phys == 15
    dx, dz = exhaustive_css_distance(q)
    assert (dx, dz) == (7, 3)
    assert heuristic_distance_sides(q, 2000, 0) == (7, 3)
    assert heuristic_distance_upper(q, 2000, 0) == 3
    assert transversal_ccz_phase_check(q.form, 200, 1).ok


@settings(max_examples=5)
@given(st.integers(0, 10**6))
def test_heuristic_never_below_bound(q42, seed):
    assert heuristic_distance_upper(q42, 300, seed) >= q42.d_lower


def test_heuristic_deterministic(q42):
    assert heuristic_distance_sides(q42, 500, 11) == heuristic_distance_sides(q42, 500, 11)
    with pytest.raises(ValueError):
        heuristic_distance_upper(q42, 0, 0)


@settings(max_examples=10)
@given(st.integers(0, 2**31 - 1))
def test_phase_invariant_under_offsets(q42, seed):
    F = q42.field
    rng = np.random.default_rng(seed)
    u = rng.integers(0, 64, size=(3, 14))
    base = [encode_logical(q42.form, u[t], np.zeros(5, dtype=np.int64)) for t in range(3)]
    moved = [encode_logical(q42.form, u[t], rng.integers(0, 64, 5)) for t in range(3)]
    phase = lambda w: int(F.absolute_trace(F.sum(F.mul(F.mul(w[0], w[1]), w[2]))))  # noqa: E731
    assert phase(base) == phase(moved)
