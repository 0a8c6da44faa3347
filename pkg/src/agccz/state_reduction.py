"""Reducing |CCZ> over GF(r^2) to |CCZ> over GF(r) with measurements and Cliffords.

Each GF(r^2) register is split into two GF(r) registers through the normal
basis {theta, theta^r}.  Measuring the three x0-type registers and applying
diagonal corrections leaves |CCZ^gamma>_r on the remaining three; a final
M_gamma on one register turns it into |CCZ>_r.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .finite_fields import GF, NormalBasisPair, _log2, decompose, find_normal_basis, gf, subfield

MAX_AMPLITUDES = 1 << 24
FIDELITY_TOL = 1e-10
NORM_TOL = 1e-12


class ProtocolViolation(RuntimeError):
    """The reduction did not produce the target state, or a gate is not valid."""


# --- trace identity --------------------------------------------------------------


@dataclass(frozen=True)
class ReductionConstants:
    """theta's basis and eta, gamma as GF(r) integers."""

    r: int
    basis: NormalBasisPair
    eta: int
    gamma: int

    @property
    def small(self) -> GF:
        return gf(_log2(self.r))


def default_basis(r: int) -> NormalBasisPair:
    """Smallest theta with gamma != 0, or the smallest theta if every gamma vanishes."""
    try:
        return find_normal_basis(r, require_invertible_gamma=True)
    except ValueError:
        return find_normal_basis(r)


def reduction_constants(r: int, basis: NormalBasisPair | None = None) -> ReductionConstants:
    basis = basis or default_basis(r)
    m = _log2(r)
    sub = subfield(2 * m, m)
    eta = int(sub.restrict(basis.eta.value))
    gamma = int(sub.restrict(basis.gamma.value))
    return ReductionConstants(r, basis, eta, gamma)


@dataclass
class IdentityResult:
    ok: bool
    triples: int
    exhaustive: bool
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _identity_sides(consts: ReductionConstants, x, y, z):
    r = consts.r
    m = _log2(r)
    big, small = gf(2 * m), consts.small
    sub = subfield(2 * m, m)
    xyz = big.mul(big.mul(x, y), z)
    lhs = sub.restrict(xyz ^ big.power(xyz, r))
    (x0, x1), (y0, y1), (z0, z1) = (decompose(v, consts.basis) for v in (x, y, z))
    mul = small.mul
    pure = mul(mul(x0, y0), z0) ^ mul(mul(x1, y1), z1)
    mixed = mul(mul(x0 ^ x1, y0 ^ y1), z0 ^ z1) ^ pure
    rhs = mul(consts.gamma, pure) ^ mul(consts.eta, mixed)
    return lhs, rhs


def trace_identity_check(
    r: int, exhaustive: bool = True, samples: int = 10**6, seed: int = 0, basis: NormalBasisPair | None = None
) -> IdentityResult:
    """Tr_{r^2/r}(xyz) == gamma(x0y0z0 + x1y1z1) + eta * (mixed terms) over GF(r^2)^3."""
    consts = reduction_constants(r, basis)
    q = r * r
    if exhaustive:
        if q**3 > MAX_AMPLITUDES:
            raise ValueError(f"exhaustive check over GF({q})^3 is too large")
        g = np.arange(q, dtype=np.int64)
        x, y, z = (a.ravel() for a in np.meshgrid(g, g, g, indexing="ij"))
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, q, size=(3, samples))
    bad = np.array([], dtype=np.int64)
    step = 1 << 18
    for s in range(0, x.size, step):
        lhs, rhs = _identity_sides(consts, x[s : s + step], y[s : s + step], z[s : s + step])
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            i = s + int(bad[0])
            return IdentityResult(False, int(x.size), exhaustive, (int(x[i]), int(y[i]), int(z[i])))
    return IdentityResult(True, int(x.size), exhaustive)


# --- states and gates -----------------------------------------------------------------


@dataclass
class QuditState:
    """Real amplitudes on a tensor product of GF(d) registers (one axis per register)."""

    register_dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        self.register_dims = tuple(int(d) for d in self.register_dims)
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.float64).reshape(self.register_dims)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.amplitudes**2)))

    def copy(self) -> QuditState:
        return QuditState(self.register_dims, self.amplitudes.copy())

    def overlap(self, other: QuditState) -> float:
        if self.register_dims != other.register_dims:
            raise ValueError("register dimensions differ")
        return float(np.sum(self.amplitudes * other.amplitudes))


def _ccz_amplitudes(F: GF, nregs: int = 3) -> np.ndarray:
    q = F.order
    g = np.arange(q, dtype=np.int64)
    prod = F.mul(F.mul(g[:, None, None], g[None, :, None]), g[None, None, :])
    signs = 1.0 - 2.0 * F.absolute_trace(prod)
    return signs / q**1.5


def build_ccz_state(field_order: int, as_pairs: bool = False, basis: NormalBasisPair | None = None) -> QuditState:
    """|CCZ>_q = q^(-3/2) sum (-1)^Tr(xyz) |x>|y>|z>.

    With ``as_pairs`` (q = r^2) each register is split into GF(r) halves and
    the six registers are ordered (x0, y0, z0, x1, y1, z1).
    """
    m = _log2(field_order)
    if field_order**3 > MAX_AMPLITUDES:
        raise MemoryError(f"|CCZ>_{field_order} needs {field_order**3} amplitudes (limit {MAX_AMPLITUDES})")
    F = gf(m)
    amps = _ccz_amplitudes(F)
    if not as_pairs:
        return QuditState((field_order,) * 3, amps)
    if m % 2:
        raise ValueError(f"q={field_order} is not a square")
    r = 1 << (m // 2)
    basis = basis or default_basis(r)
    g = np.arange(field_order, dtype=np.int64)
    h0, h1 = decompose(g, basis)
    out = np.zeros((r,) * 6)
    X, Y, Z = np.meshgrid(g, g, g, indexing="ij")
    out[h0[X], h0[Y], h0[Z], h1[X], h1[Y], h1[Z]] = amps
    return QuditState((r,) * 6, out)


@dataclass(frozen=True)
class CliffordGate:
    """One of Zpow, CZpow, Mmul, MeasureZ over GF(r); ``param`` is an integer field element."""

    kind: str
    targets: tuple[int, ...]
    param: int | None = None

    KINDS = ("Zpow", "CZpow", "Mmul", "MeasureZ")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind == "CZpow" else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.kind} acts on {arity} register(s)")
        if self.kind == "Mmul" and not self.param:
            raise ProtocolViolation("M_gamma needs gamma != 0; multiplication by 0 is not invertible")

    @property
    def is_single(self) -> bool:
        return self.kind in ("Zpow", "Mmul")

    @property
    def is_two(self) -> bool:
        return self.kind == "CZpow"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "targets": list(self.targets)}
        if self.param is not None:
            out["param"] = format(self.param, "x")
        return out


def _sign_table(F: GF, beta: int, *axes: int) -> np.ndarray:
    g = np.arange(F.order, dtype=np.int64)
    if len(axes) == 1:
        arg = F.mul(beta, g)
    else:
        arg = F.mul(beta, F.mul(g[:, None], g[None, :]))
    return 1.0 - 2.0 * F.absolute_trace(arg)


def apply_gate(state: QuditState, gate: CliffordGate, F: GF, outcome: int | None = None) -> QuditState:
    """Apply ``gate`` in place; MeasureZ projects onto ``outcome`` without renormalizing."""
    amps = state.amplitudes
    nd = amps.ndim
    if gate.kind == "Zpow":
        (t,) = gate.targets
        shape = [1] * nd
        shape[t] = F.order
        amps *= _sign_table(F, gate.param, t).reshape(shape)
    elif gate.kind == "CZpow":
        t, u = gate.targets
        shape = [1] * nd
        shape[t] = shape[u] = F.order
        table = _sign_table(F, gate.param, t, u)
        amps *= (table if t < u else table.T).reshape(shape)
    elif gate.kind == "Mmul":
        (t,) = gate.targets
        src = F.mul(F.inv(gate.param), np.arange(F.order, dtype=np.int64))
        state.amplitudes = np.take(amps, src, axis=t)
    else:
        (t,) = gate.targets
        if outcome is None:
            raise ValueError("MeasureZ needs an outcome")
        mask = np.zeros(F.order)
        mask[outcome] = 1.0
        shape = [1] * nd
        shape[t] = F.order
        amps *= mask.reshape(shape)
    return state


def multiplier_matrix(F: GF, beta: int) -> np.ndarray:
    """Permutation matrix of M_beta: |v> -> |beta v>."""
    g = np.arange(F.order, dtype=np.int64)
    M = np.zeros((F.order, F.order))
    M[F.mul(beta, g), g] = 1.0
    return M


def shift_matrix(F: GF, alpha: int) -> np.ndarray:
    """X^alpha: |v> -> |v + alpha>."""
    g = np.arange(F.order, dtype=np.int64)
    M = np.zeros((F.order, F.order))
    M[g ^ alpha, g] = 1.0
    return M


def phase_matrix(F: GF, alpha: int) -> np.ndarray:
    """Z^alpha: |v> -> (-1)^Tr(alpha v) |v>."""
    return np.diag(_sign_table(F, alpha, 0))


def multiplier_is_clifford(r: int) -> bool:
    """M_b X^a M_b^-1 == X^(ab) and M_b Z^a M_b^-1 == Z^(a/b) for all a and nonzero b."""
    F = gf(_log2(r))
    for b in range(1, r):
        M = multiplier_matrix(F, b)
        Minv = M.T
        for a in range(r):
            if not np.array_equal(M @ shift_matrix(F, a) @ Minv, shift_matrix(F, int(F.mul(a, b)))):
                return False
            if not np.array_equal(M @ phase_matrix(F, a) @ Minv, phase_matrix(F, int(F.div(a, b)))):
                return False
    return True


# --- the reduction circuit -------------------------------------------------------------

X0, Y0, Z0, X1, Y1, Z1 = range(6)


def correction_gates(consts: ReductionConstants, a: int, b: int, c: int, with_multiplier: bool = True) -> list[CliffordGate]:
    """Corrections for the measurement record (a, b, c) on (x0, y0, z0)."""
    F, eta = consts.small, consts.eta

    def mul(*vals):
        return _prod(F, vals)

    gates = [
        CliffordGate("Zpow", (Z1,), mul(eta, a, b)),
        CliffordGate("Zpow", (Y1,), mul(eta, a, c)),
        CliffordGate("Zpow", (X1,), mul(eta, b, c)),
        CliffordGate("CZpow", (Y1, Z1), mul(eta, a)),
        CliffordGate("CZpow", (X1, Z1), mul(eta, b)),
        CliffordGate("CZpow", (X1, Y1), mul(eta, c)),
    ]
    if with_multiplier:
        gates.append(CliffordGate("Mmul", (X1,), consts.gamma))
    return gates


def _prod(F: GF, vals) -> int:
    out = 1
    for v in vals:
        out = int(F.mul(out, int(v)))
    return out


def reduction_circuit(r: int, outcome: tuple[int, int, int] = (0, 0, 0)) -> list[CliffordGate]:
    """Measurements on (x0, y0, z0) then the outcome-dependent corrections."""
    consts = reduction_constants(r)
    a, b, c = outcome
    measure = [CliffordGate("MeasureZ", (t,)) for t in (X0, Y0, Z0)]
    return measure + correction_gates(consts, a, b, c)


def gate_counts(gates: Iterable[CliffordGate]) -> dict:
    gates = list(gates)
    return {
        "measurements": sum(g.kind == "MeasureZ" for g in gates),
        "single_qudit": sum(g.is_single for g in gates),
        "two_qudit": sum(g.is_two for g in gates),
    }


@dataclass
class OutcomeReport:
    outcome: tuple[int, int, int]
    probability: float
    fidelity_gamma: float
    fidelity_final: float | None
    factorizes: bool

    def to_json(self) -> dict:
        return {
            "outcome": list(self.outcome),
            "probability": self.probability,
            "fidelity_gamma": self.fidelity_gamma,
            "fidelity_final": self.fidelity_final,
            "factorizes": self.factorizes,
        }


@dataclass
class SimulationReport:
    r: int
    theta: int
    eta: int
    gamma: int
    outcomes: list[OutcomeReport] = dc_field(default_factory=list)
    violations: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def min_fidelity(self) -> float:
        vals = [o.fidelity_final for o in self.outcomes]
        return min((v for v in vals if v is not None), default=float("nan"))

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "theta": format(self.theta, "x"),
            "eta": format(self.eta, "x"),
            "gamma": format(self.gamma, "x"),
            "ok": self.ok,
            "violations": self.violations,
            "outcomes": [o.to_json() for o in self.outcomes],
        }


def _resolve_outcomes(r: int, outcome_mode) -> list[tuple[int, int, int]]:
    if outcome_mode == "all":
        return list(itertools.product(range(r), repeat=3))
    if isinstance(outcome_mode, tuple) and outcome_mode[0] == "sample":
        rng = np.random.default_rng(outcome_mode[1])
        count = outcome_mode[2] if len(outcome_mode) > 2 else 1
        return [tuple(int(v) for v in rng.integers(0, r, size=3)) for _ in range(count)]
    out = tuple(int(v) for v in outcome_mode)
    if len(out) != 3 or not all(0 <= v < r for v in out):
        raise ValueError(f"bad outcome {outcome_mode!r} for r={r}")
    return [out]


def simulate_reduction(r: int, outcome_mode="all", strict: bool = True, basis: NormalBasisPair | None = None) -> SimulationReport:
    """Simulate the reduction of |CCZ>_{r^2} for each requested measurement outcome.

    ``outcome_mode`` is "all", a fixed triple (a, b, c), or ("sample", seed[, count]).
    Reports the probability of each outcome and the fidelity of the remaining
    registers with |CCZ^gamma>_r (before M_gamma) and |CCZ>_r (after).  With
    ``strict`` a ProtocolViolation is raised if anything falls short.
    """
    if r > 8:
        raise ValueError("dense simulation is limited to r <= 8")
    consts = reduction_constants(r, basis)
    F = consts.small
    start = build_ccz_state(r * r, as_pairs=True, basis=consts.basis)
    target = QuditState((r,) * 3, _ccz_amplitudes(F))
    # |CCZ^gamma>: signs (-1)^Tr(gamma xyz)
    g = np.arange(r, dtype=np.int64)
    prod = F.mul(F.mul(g[:, None, None], g[None, :, None]), g[None, None, :])
    target_gamma = QuditState((r,) * 3, (1.0 - 2.0 * F.absolute_trace(F.mul(consts.gamma, prod))) / r**1.5)
    report = SimulationReport(r, consts.basis.theta.value, consts.eta, consts.gamma)
    if consts.gamma == 0:
        report.violations.append(
            f"gamma = 0 for theta = {consts.basis.theta.value:#x}: M_gamma is not invertible and the "
            "remaining registers carry no cubic phase"
        )
    for a, b, c in _resolve_outcomes(r, outcome_mode):
        st = start.copy()
        for t, v in zip((X0, Y0, Z0), (a, b, c)):
            apply_gate(st, CliffordGate("MeasureZ", (t,)), F, v)
        prob = float(np.sum(st.amplitudes**2))
        support = st.amplitudes.copy()
        support[a, b, c] = 0.0
        factorizes = not support.any()
        st.amplitudes = st.amplitudes / np.sqrt(prob)
        for gate in correction_gates(consts, a, b, c, with_multiplier=False):
            apply_gate(st, gate, F)
        rest = QuditState((r,) * 3, st.amplitudes[a, b, c])
        fid_gamma = abs(rest.overlap(target_gamma))
        fid_final = None
        if consts.gamma:
            apply_gate(rest, CliffordGate("Mmul", (0,), consts.gamma), F)
            fid_final = abs(rest.overlap(target))
        report.outcomes.append(OutcomeReport((a, b, c), prob, fid_gamma, fid_final, factorizes))
        if abs(prob - r**-3) > NORM_TOL:
            report.violations.append(f"outcome {(a, b, c)} has probability {prob!r}, expected r^-3")
        if not factorizes:
            report.violations.append(f"outcome {(a, b, c)}: state does not factorize")
        if fid_gamma < 1 - FIDELITY_TOL:
            report.violations.append(f"outcome {(a, b, c)}: fidelity with |CCZ^gamma> is {fid_gamma!r}")
        if fid_final is not None and fid_final < 1 - FIDELITY_TOL:
            report.violations.append(f"outcome {(a, b, c)}: fidelity with |CCZ> is {fid_final!r}")
    if strict and report.violations:
        raise ProtocolViolation("; ".join(report.violations[:5]))
    return report


# --- planning ------------------------------------------------------------------------------

PER_REDUCTION = {"measurements": 3, "single_qudit": 4, "two_qudit": 3}
BUDGET = {"measurements": 9, "single_qudit": 12, "two_qudit": 9}


@dataclass(frozen=True)
class ReductionStep:
    distill_dim: int
    reductions: int
    chain: tuple[int, ...]

    def to_json(self) -> dict:
        return {"distill_dim": self.distill_dim, "reductions": self.reductions, "chain": list(self.chain)}


@dataclass(frozen=True)
class ReductionPlan:
    n: int
    steps: tuple[ReductionStep, ...]

    @property
    def totals(self) -> dict:
        k = sum(s.reductions for s in self.steps)
        return {key: k * v for key, v in PER_REDUCTION.items()}

    def within_budget(self) -> bool:
        return all(self.totals[k] <= BUDGET[k] for k in BUDGET)

    def to_json(self) -> dict:
        return {"n": self.n, "steps": [s.to_json() for s in self.steps], "totals": self.totals}


def plan_reduction(n: int) -> ReductionPlan:
    """How to obtain |CCZ> over GF(2^n) from codes over square fields.

    Even n >= 6 distills at 2^n directly; odd n > 2 and n = 4 distill at
    2^(2n) and reduce once; n <= 2 distills at 2^8 and halves the degree
    until it reaches n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2 == 0 and n >= 6:
        step = ReductionStep(1 << n, 0, (1 << n,))
    elif n > 2:
        step = ReductionStep(1 << (2 * n), 1, (1 << (2 * n), 1 << n))
    else:
        chain = (256, 16, 4, 2)[: 5 - n]
        step = ReductionStep(256, len(chain) - 1, chain)
    plan = ReductionPlan(n, (step,))
    assert plan.within_budget(), plan.totals
    return plan


def plan_table(ns: Sequence[int]) -> list[ReductionPlan]:
    return [plan_reduction(n) for n in ns]
