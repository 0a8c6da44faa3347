from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from agccz.finite_fields import gf, normal_basis_candidates
from agccz.state_reduction import (
    BUDGET,
    CliffordGate,
    ProtocolViolation,
    QuditState,
    apply_gate,
    build_ccz_state,
    correction_gates,
    default_basis,
    gate_counts,
    multiplier_is_clifford,
    plan_reduction,
    reduction_circuit,
    reduction_constants,
    simulate_reduction,
    trace_identity_check,
)


@pytest.mark.parametrize("r", [2, 4, 8])
def test_trace_identity_exhaustive(r):
    res = trace_identity_check(r, exhaustive=True)
    assert res.ok and res.triples == (r * r) ** 3


@pytest.mark.parametrize("r", [16, 32])
def test_trace_identity_sampled(r):
    assert trace_identity_check(r, exhaustive=False, samples=20000, seed=r).ok


@pytest.mark.parametrize("r", [4, 8])
def test_trace_identity_holds_for_every_basis(r):
    for basis in normal_basis_candidates(r):
        assert trace_identity_check(r, exhaustive=False, samples=2000, seed=1, basis=basis).ok


def test_r2_constants():
    c = reduction_constants(2)
    # gamma = 1 + theta^3 vanishes in GF(4), eta = theta^3 = 1
    assert (c.eta, c.gamma) == (1, 0)
    assert default_basis(8).theta.value == 24
    assert reduction_constants(8).gamma != 0


def test_ccz_qubit():
    s = build_ccz_state(2)
    amps = s.amplitudes.ravel()
    assert np.allclose(np.abs(amps), 2**-1.5)
    assert np.nonzero(amps < 0)[0].tolist() == [7]


def test_ccz_q4_sign_count():
    F = gf(2)
    s = build_ccz_state(4)
    neg = int((s.amplitudes < 0).sum())
    brute = sum(int(F.absolute_trace(F.mul(F.mul(x, y), z))) for x, y, z in itertools.product(range(4), repeat=3))
    assert neg == brute == 18
    assert np.allclose(np.abs(s.amplitudes), 1 / 8)


@pytest.mark.parametrize("q", [4, 16, 64])
def test_ccz_pairs_normalized(q):
    s = build_ccz_state(q, as_pairs=True)
    r = int(round(q**0.5))
    assert s.register_dims == (r,) * 6
    assert abs(s.norm - 1) < 1e-12
    assert np.count_nonzero(s.amplitudes) == q**3


def test_memory_guard():
    with pytest.raises(MemoryError):
        build_ccz_state(512)
    with pytest.raises(ValueError):
        build_ccz_state(8, as_pairs=True)


def test_circuit_counts():
    for r in (4, 8):
        for outcome in [(0, 0, 0), (1, 1, 1), (r - 1, 2, 3)]:
            counts = gate_counts(reduction_circuit(r, outcome))
            assert counts == {"measurements": 3, "single_qudit": 4, "two_qudit": 3}


def test_zero_outcome_only_multiplier_acts():
    gates = reduction_circuit(8, (0, 0, 0))
    nontrivial = [g for g in gates if g.kind != "MeasureZ" and g.param]
    assert [g.kind for g in nontrivial] == ["Mmul"]


def test_all_ones_outcome_uses_eta():
    c = reduction_constants(8)
    gates = correction_gates(c, 1, 1, 1)
    assert all(g.param == c.eta for g in gates if g.kind in ("Zpow", "CZpow"))


def test_gate_validation():
    with pytest.raises(ValueError):
        CliffordGate("Hadamard", (0,))
    with pytest.raises(ValueError):
        CliffordGate("CZpow", (0,), 1)
    with pytest.raises(ProtocolViolation):
        CliffordGate("Mmul", (0,), 0)
    with pytest.raises(ProtocolViolation):
        reduction_circuit(2)


@pytest.mark.parametrize("r", [2, 4, 8])
def test_multiplier_is_clifford(r):
    assert multiplier_is_clifford(r)


@pytest.mark.parametrize("r", [4, 8])
def test_reduction_all_outcomes(r):
    rep = simulate_reduction(r, "all")
    assert rep.ok
    assert len(rep.outcomes) == r**3
    for o in rep.outcomes:
        assert abs(o.probability - r**-3) < 1e-12
        assert o.factorizes
        assert o.fidelity_gamma > 1 - 1e-10
        assert o.fidelity_final > 1 - 1e-10


def test_reduction_r2_is_obstructed():
    rep = simulate_reduction(2, "all", strict=False)
    assert not rep.ok
    assert all(o.fidelity_final is None for o in rep.outcomes)
    # the remaining registers hold |CCZ^0> = |+++>
    assert all(o.fidelity_gamma > 1 - 1e-10 for o in rep.outcomes)
    with pytest.raises(ProtocolViolation):
        simulate_reduction(2, "all")


def test_without_multiplier_state_is_ccz_gamma():
    r = 4
    c = reduction_constants(r)
    assert c.gamma != 1
    F = c.small
    start = build_ccz_state(r * r, as_pairs=True)
    st_ = start.copy()
    a, b, cc = 1, 2, 3
    for t, v in zip((0, 1, 2), (a, b, cc)):
        apply_gate(st_, CliffordGate("MeasureZ", (t,)), F, v)
    st_.amplitudes /= np.sqrt(np.sum(st_.amplitudes**2))
    for g in correction_gates(c, a, b, cc, with_multiplier=False):
        apply_gate(st_, g, F)
    rest = QuditState((r,) * 3, st_.amplitudes[a, b, cc])
    target = build_ccz_state(r)
    assert abs(rest.overlap(target)) < 1 - 1e-3


@settings(max_examples=8)
@given(st.integers(0, 2**31 - 1))
def test_sampled_outcomes_reproducible(seed):
    a = simulate_reduction(8, ("sample", seed, 2))
    b = simulate_reduction(8, ("sample", seed, 2))
    assert [o.outcome for o in a.outcomes] == [o.outcome for o in b.outcomes]
    assert a.ok


def test_fixed_outcome_validation():
    with pytest.raises(ValueError):
        simulate_reduction(4, (4, 0, 0))
    with pytest.raises(ValueError):
        simulate_reduction(16, "all")


@pytest.mark.parametrize(
    "n,chain,totals",
    [
        (1, (256, 16, 4, 2), (9, 12, 9)),
        (2, (256, 16, 4), (6, 8, 6)),
        (4, (256, 16), (3, 4, 3)),
        (5, (1024, 32), (3, 4, 3)),
        (6, (64,), (0, 0, 0)),
    ],
)
def test_plan_cases(n, chain, totals):
    plan = plan_reduction(n)
    assert plan.steps[0].chain == chain
    assert tuple(plan.totals.values()) == totals


@given(st.integers(1, 64))
def test_plan_budget(n):
    plan = plan_reduction(n)
    assert plan.within_budget()
    step = plan.steps[0]
    assert step.chain[-1] == 2**n
    assert step.reductions == len(step.chain) - 1
    assert all(plan.totals[k] <= BUDGET[k] for k in BUDGET)


def test_plan_rejects_nonpositive():
    with pytest.raises(ValueError):
        plan_reduction(0)
