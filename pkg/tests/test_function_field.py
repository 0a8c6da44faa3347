from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from agccz.finite_fields import gf
from agccz.function_field import (
    INFINITY,
    Divisor,
    Place,
    PoleError,
    RationalFunction,
    UnsupportedFactorization,
    base_geometry,
    check_triorthogonality_condition,
    divisor_of_differential,
    divisor_of_function,
    eta0_closed_form,
    eta0_differential,
    finite_place,
    pdivmod,
    peval,
    pfrom_roots,
    pgcd,
    pmul,
    riemann_roch_basis,
    root_multiplicities,
    simple_pole_residues,
    valuation,
)

F16 = gf(4)
polys = st.lists(st.integers(0, 15), min_size=1, max_size=7).map(lambda v: np.array(v, dtype=np.int64))


@given(polys, polys)
def test_divmod_reconstructs(a, b):
    if not b.any():
        return
    q, r = pdivmod(F16, a, b)
    back = pmul(F16, q, b)
    n = max(len(back), len(r), len(a))
    pad = lambda p: np.pad(p, (0, n - len(p)))  # noqa: E731
    assert np.array_equal(pad(back) ^ pad(r), pad(a))


@given(st.lists(st.integers(0, 15), min_size=1, max_size=6))
def test_root_multiplicities_match_construction(roots):
    p = pfrom_roots(F16, roots)
    pts = np.arange(16)
    mult = root_multiplicities(F16, p, pts)
    for a in range(16):
        assert mult[a] == roots.count(a)


def test_gcd_of_shared_roots():
    a = pfrom_roots(F16, [1, 2, 2, 5])
    b = pfrom_roots(F16, [2, 5, 7])
    g = pgcd(F16, a, b)
    assert np.array_equal(g, pfrom_roots(F16, [2, 5]))


def test_place_ordering_and_json():
    places = sorted([INFINITY, finite_place(3), finite_place(1)])
    assert places == [finite_place(1), finite_place(3), INFINITY]
    assert INFINITY.to_json() == {"inf": True}
    assert Place.from_json(finite_place(10).to_json()) == finite_place(10)


def test_divisor_arithmetic():
    P, Q = finite_place(1), finite_place(2)
    D = Divisor({P: 2, Q: -1})
    assert D.degree == 1
    assert (D + D)[P] == 4
    assert (-D)[Q] == 1
    assert not D.is_effective()
    assert Divisor({P: 1}) <= Divisor({P: 2, Q: 0})
    assert Divisor.from_json(D.to_json()) == D
    assert 3 * Divisor({P: 1}) == Divisor({P: 3})


def test_rational_function_field_ops():
    x = RationalFunction.x(F16)
    one = RationalFunction.constant(F16, 1)
    f = (x + one) / (x * x)
    assert f * (x * x) == x + one
    assert valuation(finite_place(0), f) == -2
    assert valuation(finite_place(1), f) == 1
    assert valuation(INFINITY, f) == 1
    assert valuation(INFINITY, x - x) == math.inf
    with pytest.raises(PoleError):
        f.evaluate(np.array([0]))


@given(polys.filter(lambda p: p.any()), st.integers(1, 15))
def test_principal_divisors_have_degree_zero(num, root):
    den = pfrom_roots(F16, [root, root])
    f = RationalFunction(F16, num, den)
    try:
        D = divisor_of_function(f)
    except UnsupportedFactorization:
        return
    assert D.degree == 0


def test_irreducible_numerator_is_unsupported():
    # x^2 + x + (element with trace 1) has no roots in GF(16)
    F = F16
    c = next(int(a) for a in range(16) if F.absolute_trace(a))
    with pytest.raises(UnsupportedFactorization):
        divisor_of_function(RationalFunction(F, np.array([c, 1, 1])))


def test_leibniz_rule():
    x = RationalFunction.x(F16)
    f = x * x * x + RationalFunction.constant(F16, 3)
    g = (x + RationalFunction.constant(F16, 7)) / x
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_riemann_roch_dimension():
    P, Q = finite_place(2), finite_place(5)
    G = Divisor({P: 2, INFINITY: 3, Q: -1})
    basis = riemann_roch_basis(F16, G)
    assert len(basis) == G.degree + 1
    for f in basis:
        assert (divisor_of_function(f) + G).is_effective()
    assert riemann_roch_basis(F16, Divisor({P: -1})) == []


@pytest.mark.parametrize("r", [8, 16, 32])
def test_eta0_divisor(r):
    geo = base_geometry(r)
    eta = divisor_of_differential(eta0_differential(r))
    assert eta == -geo.d0 + Divisor.sum_of(geo.v_places) * (r - 2)
    assert eta.degree == -2
    assert check_triorthogonality_condition(geo.g0, geo.d0, eta)


@pytest.mark.parametrize("r", [8, 16])
def test_eta0_closed_form_and_residues(r):
    geo = base_geometry(r)
    u = eta0_differential(r).coefficient
    assert u == eta0_closed_form(r)
    assert np.all(simple_pole_residues(u, geo.z_points) == 1)


def test_base_geometry_counts():
    geo = base_geometry(8)
    assert len(geo.z_points) == 56
    assert len(geo.v_places) == 9
    assert geo.g0.degree == 18
    assert geo.d0.degree == 56


def test_condition_fails_for_small_r():
    # with G0 = 0 the inequality holds trivially; a nonzero G breaks it at r = 4
    geo = base_geometry(4)
    eta = divisor_of_differential(eta0_differential(4))
    assert check_triorthogonality_condition(geo.g0, geo.d0, eta)
    assert not check_triorthogonality_condition(Divisor.sum_of(geo.v_places), geo.d0, eta)
    assert peval(geo.field, np.array([0, 1]), np.array([3]))[0] == 3
