"""CSS codes with transversal CCZ from triorthogonal classical codes.

A generator matrix brought to the form ``[[I_K, H1], [0, H0]]`` gives
X-stabilizers spanning rowspace(H0) and Z-stabilizers spanning the dual of
rowspace(H0, H1), both on the N = n - K unpunctured coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .classical_codes import LinearCode
from .finite_fields import GF, gf


@dataclass(frozen=True)
class StandardForm:
    field: GF
    k_log: int
    column_perm: np.ndarray
    h1: np.ndarray
    h0: np.ndarray

    @property
    def n_phys(self) -> int:
        return self.h1.shape[1] if self.h1.size else self.h0.shape[1]

    def matrix(self) -> np.ndarray:
        """The full k x n matrix [[I, H1], [0, H0]] in permuted column order."""
        k_log = self.k_log
        top = np.hstack([np.eye(k_log, dtype=np.int64), self.h1])
        bottom = np.hstack([np.zeros((self.h0.shape[0], k_log), dtype=np.int64), self.h0])
        return np.vstack([top, bottom])


def standard_form(c: LinearCode, k_log: int) -> StandardForm:
    """Row-reduce ``c.gen`` and move the first ``k_log`` pivot columns to the front."""
    F = c.field
    R, pivots = linalg.rref(F, c.gen)
    if len(pivots) != c.k:
        raise ValueError(f"generator has rank {len(pivots)} < k = {c.k}")
    if not 1 <= k_log <= c.k:
        raise ValueError(f"K={k_log} outside 1..{c.k}")
    logical = pivots[:k_log]
    rest = [j for j in range(c.n) if j not in set(logical)]
    perm = np.array(logical + rest, dtype=np.int64)
    P = R[:, perm]
    assert np.array_equal(P[:k_log, :k_log], np.eye(k_log, dtype=np.int64))
    assert not P[k_log:, :k_log].any()
    h1, h0 = P[:k_log, k_log:], P[k_log:, k_log:]
    assert linalg.in_rowspace(F, R, np.ones((1, c.n), dtype=np.int64))[0], "all-ones must stay representable"
    if h0.size and h1.size and linalg.matmul(F, h0, h1.T).any():
        raise ValueError("rowspace(H0) is not orthogonal to rowspace(H1); code is not triorthogonal")
    return StandardForm(F, k_log, perm, h1, h0)


@dataclass
class CssCode:
    field: GF
    n_phys: int
    k_log: int
    x_stabilizers: np.ndarray
    z_stabilizers: np.ndarray
    d_x_lower: int
    d_z_lower: int
    column_perm: np.ndarray
    form: StandardForm | None = None

    @property
    def d_lower(self) -> int:
        return min(self.d_x_lower, self.d_z_lower)

    @property
    def vacuous(self) -> bool:
        return self.d_lower <= 0

    def to_json(self) -> dict:
        hexm = lambda M: [[format(int(v), "x") for v in row] for row in M]  # noqa: E731
        return {
            "q": self.field.order,
            "n": self.n_phys,
            "k": self.k_log,
            "d_x_lower": self.d_x_lower,
            "d_z_lower": self.d_z_lower,
            "x_stab": hexm(self.x_stabilizers),
            "z_stab": hexm(self.z_stabilizers),
            "column_perm": [int(v) for v in self.column_perm],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_css(c: LinearCode, k_log: int, deg_g: int | None = None, genus: int | None = None) -> CssCode:
    """CSS code from the first ``k_log`` rows of the standard form.

    Distance lower bounds come from deg G and the genus; without them (codes
    that are not AG evaluation codes) both bounds are reported as 0.
    """
    form = standard_form(c, k_log)
    F = form.field
    H = np.vstack([form.h0, form.h1])
    z_stab = linalg.nullspace(F, H, n=form.n_phys)
    x_stab = form.h0
    if x_stab.size and z_stab.size:
        assert not linalg.matmul(F, x_stab, z_stab.T).any(), "stabilizers must commute"
    assert linalg.rank(F, x_stab) + linalg.rank(F, z_stab) == form.n_phys - k_log, "stabilizer count"
    n = c.n
    return CssCode(
        field=F,
        n_phys=n - k_log,
        k_log=k_log,
        x_stabilizers=x_stab,
        z_stabilizers=z_stab,
        d_x_lower=0 if deg_g is None else n - deg_g - k_log,
        d_z_lower=0 if deg_g is None else deg_g - k_log - (2 * (genus or 0) - 2),
        column_perm=form.column_perm,
        form=form,
    )


def reed_muller_1(m: int) -> LinearCode:
    """Binary first-order Reed-Muller code RM(1, m), a triorthogonal [2^m, m+1] code for m >= 4."""
    pts = np.array([[(i >> b) & 1 for b in range(m)] for i in range(2**m)], dtype=np.int64).T
    return LinearCode(gf(1), np.vstack([np.ones(2**m, dtype=np.int64), pts]))


# --- distance heuristics -------------------------------------------------------


def _isd_walk(F: GF, G: np.ndarray, excluded: np.ndarray, trials: int, rng: np.random.Generator) -> int:
    """Random-walk information-set search for the lightest row outside ``excluded``.

    ``G`` spans the search space; ``excluded`` is a parity-check matrix of the
    subspace to avoid (a word w is excluded iff excluded @ w == 0).  Each trial
    swaps one random non-pivot column into the information set.
    """
    R, piv = linalg.rref(F, G)
    k, n = R.shape
    best = n + 1
    piv = list(piv)

    def scan(R):
        nonlocal best
        w = np.count_nonzero(R, axis=1)
        for i in np.nonzero(w < best)[0]:
            if excluded.size == 0 or linalg.matmul(F, excluded, R[i][:, None]).any():
                best = int(w[i])

    scan(R)
    for _ in range(trials):
        j = int(rng.integers(n))
        col = R[:, j]
        rows = np.nonzero(col)[0]
        if j in piv or rows.size == 0:
            continue
        i = int(rows[rng.integers(rows.size)])
        R[i] = F.mul(R[i], F.inv(R[i, j]))
        others = np.nonzero(R[:, j])[0]
        others = others[others != i]
        if others.size:
            R[others] ^= F.mul(R[others, j][:, None], R[i][None, :])
        piv[i] = j
        scan(R)
    return best


def heuristic_distance_sides(code: CssCode, trials: int, seed: int) -> tuple[int, int]:
    """(X-side, Z-side) minimum weights found by the information-set walk."""
    F = code.field
    form = code.form
    H = np.vstack([form.h0, form.h1])
    rng = np.random.default_rng(seed)
    # X logicals: H minus H0; a word of H is in H0 iff it is orthogonal to H0^perp
    h0_perp = linalg.nullspace(F, form.h0, n=code.n_phys) if form.h0.size else np.eye(code.n_phys, dtype=np.int64)
    dx = _isd_walk(F, H, h0_perp, trials, rng)
    # Z logicals: H0^perp minus H^perp; a word is in H^perp iff H @ w == 0
    dz = _isd_walk(F, h0_perp, H, trials, rng)
    return dx, dz


def heuristic_distance_upper(code: CssCode, trials: int, seed: int) -> int:
    """Upper bound on the CSS distance from randomized information-set sampling."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return min(heuristic_distance_sides(code, trials, seed))


def exhaustive_css_distance(code: CssCode) -> tuple[int, int]:
    """Exact (D_X, D_Z) by enumerating both logical spaces; tiny codes only."""
    import itertools

    F = code.field
    form = code.form
    H = np.vstack([form.h0, form.h1])
    h0_perp = linalg.nullspace(F, form.h0, n=code.n_phys) if form.h0.size else np.eye(code.n_phys, dtype=np.int64)

    def min_outside(G, check):
        if F.order ** G.shape[0] > 2_000_000:
            raise ValueError("space too large to enumerate")
        msgs = np.array(list(itertools.product(range(F.order), repeat=G.shape[0])), dtype=np.int64)
        words = linalg.matmul(F, msgs, G)
        outside = linalg.matmul(F, words, check.T).any(axis=1)
        return int(np.count_nonzero(words[outside], axis=1).min())

    return min_outside(H, h0_perp), min_outside(h0_perp, H)


# --- transversal CCZ ---------------------------------------------------------------


@dataclass
class PhaseCheckResult:
    ok: bool
    samples: int
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def encode_logical(form: StandardForm, u, offset) -> np.ndarray:
    """Physical word u*H1 + offset*H0 on the N unpunctured coordinates."""
    F = form.field
    word = linalg.matmul(F, np.atleast_2d(u), form.h1)[0]
    if form.h0.size:
        word ^= linalg.matmul(F, np.atleast_2d(offset), form.h0)[0]
    return word


def transversal_ccz_phase_check(form: StandardForm, samples: int, seed: int) -> PhaseCheckResult:
    """Physical CCZ phase sum equals the logical one for random logical triples.

    For encoded words a, b, c of logical vectors u, v, w (each with a random
    stabilizer offset), checks sum_i a_i b_i c_i == sum_j u_j v_j w_j in GF(q),
    and hence equality of the absolute traces that define the CCZ phases.
    """
    F = form.field
    rng = np.random.default_rng(seed)
    K, s = form.k_log, form.h0.shape[0]
    U = rng.integers(0, F.order, size=(samples, 3, K))
    S = rng.integers(0, F.order, size=(samples, 3, s))
    words = [
        linalg.matmul(F, U[:, t], form.h1) ^ (linalg.matmul(F, S[:, t], form.h0) if s else 0)
        for t in range(3)
    ]
    phys = F.sum(F.mul(F.mul(words[0], words[1]), words[2]), axis=1)
    logi = F.sum(F.mul(F.mul(U[:, 0], U[:, 1]), U[:, 2]), axis=1)
    bad = np.nonzero((phys != logi) | (F.absolute_trace(phys) != F.absolute_trace(logi)))[0]
    if bad.size:
        i = int(bad[0])
        return PhaseCheckResult(
            False,
            samples,
            {"u": U[i].tolist(), "offsets": S[i].tolist(), "physical": int(phys[i]), "logical": int(logi[i])},
        )
    return PhaseCheckResult(True, samples)
