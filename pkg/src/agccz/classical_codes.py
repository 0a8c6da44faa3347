"""Linear codes over GF(q) given by generator matrices, and the base AG code."""

from __future__ import annotations

import csv
import io
import itertools
import struct
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg
from .finite_fields import GF, _log2, gf
from .function_field import (
    Place,
    RationalFunction,
    _power_table,
    base_geometry,
    check_triorthogonality_condition,
    divisor_of_differential,
    eta0_differential,
    pdeg,
    peval,
    pfrom_roots,
    pole_polynomials,
    riemann_roch_basis,
)


class DegenerateDivisorError(ValueError):
    """The evaluation map on L(G) is not injective."""


class DisjointnessError(ValueError):
    """An evaluation point is a pole of a basis function."""


@dataclass
class LinearCode:
    """Code spanned by the rows of ``gen`` (a k x n integer matrix over ``field``).

    ``points`` and ``deg_g`` are filled in for AG evaluation codes.
    """

    field: GF
    gen: np.ndarray
    points: np.ndarray | None = None
    deg_g: int | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.gen = np.atleast_2d(np.asarray(self.gen, dtype=np.int64))
        if self.gen.shape[0] < 1 or self.gen.shape[1] < self.gen.shape[0]:
            raise ValueError(f"need n >= k >= 1, got generator of shape {self.gen.shape}")

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def n(self) -> int:
        return self.gen.shape[1]

    @property
    def k(self) -> int:
        return self.gen.shape[0]

    def rank(self) -> int:
        return linalg.rank(self.field, self.gen)

    def contains(self, words) -> np.ndarray:
        return linalg.in_rowspace(self.field, self.gen, words)

    def encode(self, messages) -> np.ndarray:
        return linalg.matmul(self.field, messages, self.gen)

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}]_{self.q})"

    # -- serialization -----------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        for row in self.gen:
            w.writerow(format(int(v), "x") for v in row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, field: GF) -> LinearCode:
        rows = [[int(v, 16) for v in row] for row in csv.reader(io.StringIO(text)) if row]
        return cls(field, np.array(rows, dtype=np.int64))

    def to_bytes(self) -> bytes:
        """Header ``b"AGCG"`` then little-endian uint32 q, n, k, then k*n uint32 entries row-major."""
        head = b"AGCG" + struct.pack("<III", self.q, self.n, self.k)
        return head + self.gen.astype("<u4").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> LinearCode:
        if data[:4] != b"AGCG":
            raise ValueError("not a generator-matrix blob")
        q, n, k = struct.unpack("<III", data[4:16])
        body = np.frombuffer(data[16:], dtype="<u4")
        if body.size != n * k:
            raise ValueError(f"expected {n * k} entries, found {body.size}")
        return cls(gf(q.bit_length() - 1), body.reshape(k, n).astype(np.int64))


@dataclass(frozen=True)
class EvaluationSpec:
    """Evaluation points (finite places) and the functions evaluated there."""

    eval_points: Sequence[Place]
    rr_basis: Sequence[RationalFunction]

    def __post_init__(self):
        alphas = [p.alpha for p in self.eval_points]
        if any(a is None for a in alphas):
            raise ValueError("evaluation points must be finite places")
        if len(set(alphas)) != len(alphas):
            raise ValueError("evaluation points must be distinct")


def _evaluate_functions(F: GF, funcs: Sequence[RationalFunction], pts: np.ndarray) -> np.ndarray:
    # batch: one power table, numerators as a (sparse) coefficient matrix
    maxdeg = max(max(pdeg(f.num), pdeg(f.den)) for f in funcs)
    powers = _power_table(F, pts, maxdeg).T  # (maxdeg+1) x n
    nums = np.zeros((len(funcs), maxdeg + 1), dtype=np.int64)
    for i, f in enumerate(funcs):
        nums[i, : len(f.num)] = f.num
    top = linalg.matmul(F, nums, powers)
    dens: dict[bytes, np.ndarray] = {}
    bottom = np.empty_like(top)
    for i, f in enumerate(funcs):
        key = f.den.tobytes()
        if key not in dens:
            dens[key] = peval(F, f.den, pts)
        bottom[i] = dens[key]
    if np.any(bottom == 0):
        i, j = map(int, np.argwhere(bottom == 0)[0])
        raise DisjointnessError(f"basis function {i} has a pole at point {hex(int(pts[j]))}")
    return F.div(top, bottom)


def evaluate_code(spec: EvaluationSpec, field: GF | None = None, check_rank: bool = True) -> LinearCode:
    """Generator matrix gen[i][j] = rr_basis[i](eval_points[j])."""
    F = field or spec.rr_basis[0].field
    pts = np.array([p.alpha for p in spec.eval_points], dtype=np.int64)
    gen = _evaluate_functions(F, spec.rr_basis, pts)
    code = LinearCode(F, gen, points=pts)
    if check_rank and code.rank() != code.k:
        raise DegenerateDivisorError(f"evaluation matrix has rank {code.rank()} < {code.k}")
    return code


def base_code_parameters(r: int) -> tuple[int, int, int]:
    """(n0, k0, d0) of the base code."""
    a = (r - 2) // 3
    n0 = r * (r - 1)
    return n0, (r + 1) * a + 1, n0 - (r + 1) * a


def construct_base_code(r: int, check: bool = True) -> LinearCode:
    """The evaluation code of L(G0) on the places GF(r^2) minus GF(r).

    G0 = floor((r-2)/3) * (sum over the zeros of x^r + x, plus infinity).
    Raises ValueError for r < 8, where G0 = 0 gives only the repetition code.
    """
    m = _log2(r)
    if m < 3:
        raise ValueError(
            f"r={r}: need r = 2^m with m >= 3; for smaller r, floor((r-2)/3) = 0 so G0 = 0 and "
            "3*G0 <= D0 + (eta0) leaves no room for a nontrivial code"
        )
    geo = base_geometry(r)
    F = geo.field
    g0 = geo.g0
    if check:
        eta = divisor_of_differential(eta0_differential(r))
        assert check_triorthogonality_condition(g0, geo.d0, eta)
    basis = riemann_roch_basis(F, g0, check=check and r <= 16)
    spec = EvaluationSpec([Place(int(a)) for a in geo.z_points], basis)
    code = evaluate_code(spec, F, check_rank=check)
    code.deg_g = g0.degree
    code.meta.update(r=r, a_q=geo.a_q)
    n0, k0, _ = base_code_parameters(r)
    assert (code.n, code.k) == (n0, k0)
    return code


def dual_code(c: LinearCode) -> LinearCode:
    return LinearCode(c.field, linalg.nullspace(c.field, c.gen))


def star_product(F: GF, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"length mismatch {a.shape[-1]} != {b.shape[-1]}")
    return F.mul(a, b)


@dataclass
class TriorthogonalityReport:
    ok: bool
    contains_all_ones: bool
    triples_checked: int
    pairs_checked: int
    witness: tuple | None = None
    exhaustive: bool = True

    def __bool__(self) -> bool:
        return self.ok


def is_triorthogonal(
    c: LinearCode, samples: int | None = None, seed: int = 0
) -> TriorthogonalityReport:
    """All-ones in the code and every basis triple (pair) sums to zero.

    With ``samples`` set, that many random basis triples (and pairs) are
    checked instead of all of them.
    """
    F, G = c.field, c.gen
    ones = np.ones((1, c.n), dtype=np.int64)
    has_ones = bool(c.contains(ones)[0])
    k = c.k
    if samples is None:
        pairs = np.array(list(itertools.product(range(k), repeat=2)), dtype=np.int64)
        P = F.mul(G[pairs[:, 0]], G[pairs[:, 1]])
        pair_sums = F.sum(P, axis=1)
        # triple sums T[(a,b), c] = sum_i G[a,i] G[b,i] G[c,i]
        T = linalg.matmul(F, P, G.T)
        bad = np.argwhere(T != 0)
        triple_witness = None
        for pi, ci in bad:
            triple_witness = (int(pairs[pi, 0]), int(pairs[pi, 1]), int(ci))
            break
        n_triples = k**3
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, k, size=(samples, 3))
        pairs = idx[:, :2]
        P = F.mul(G[idx[:, 0]], G[idx[:, 1]])
        pair_sums = F.sum(P, axis=1)
        trip = F.sum(F.mul(P, G[idx[:, 2]]), axis=1)
        bad = np.nonzero(trip)[0]
        triple_witness = tuple(int(v) for v in idx[bad[0]]) if bad.size else None
        n_triples = samples
    pair_bad = np.nonzero(pair_sums)[0]
    pair_witness = tuple(int(v) for v in pairs[pair_bad[0]]) if pair_bad.size else None
    witness = triple_witness or pair_witness
    if not has_ones and witness is None:
        witness = ("all-ones not in code",)
    return TriorthogonalityReport(
        ok=has_ones and witness is None,
        contains_all_ones=has_ones,
        triples_checked=n_triples,
        pairs_checked=len(pairs),
        witness=witness,
        exhaustive=samples is None,
    )


@dataclass(frozen=True)
class DistanceCertificate:
    lower: int
    upper: int
    witness: np.ndarray
    singleton: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def distance_certificate(c: LinearCode, deg_g: int | None = None) -> DistanceCertificate:
    """Goppa lower bound n - deg G and an explicit codeword of that weight.

    The witness evaluates prod_{i < deg G}(x + alpha_i) / h on the code's
    points, where the alpha_i are the smallest evaluation points and h is
    the denominator of the code's Riemann-Roch basis.
    """
    deg_g = c.deg_g if deg_g is None else deg_g
    if deg_g is None or c.points is None:
        raise ValueError("distance certificate needs an AG evaluation code")
    if deg_g >= c.n:
        raise ValueError(f"deg G = {deg_g} >= n = {c.n}: no bound")
    F = c.field
    h, _ = pole_polynomials(F, base_geometry(c.meta["r"]).g0)
    chosen = np.sort(c.points)[:deg_g]
    f = RationalFunction(F, pfrom_roots(F, chosen), h)
    word = f.evaluate(c.points)
    if not c.contains(word[None, :])[0]:
        raise AssertionError("witness is not a codeword")
    weight = int(np.count_nonzero(word))
    return DistanceCertificate(lower=c.n - deg_g, upper=weight, witness=word, singleton=c.n - c.k + 1)


def minimum_distance_bruteforce(c: LinearCode) -> int:
    """Exhaustive minimum weight; only for q^k up to a few million."""
    F = c.field
    if c.q**c.k > 5_000_000:
        raise ValueError("code too large for exhaustive search")
    best = c.n
    msgs = np.array(list(itertools.product(range(c.q), repeat=c.k))[1:], dtype=np.int64)
    for chunk in np.array_split(msgs, max(1, len(msgs) // 20000)):
        words = linalg.matmul(F, chunk, c.gen)
        best = min(best, int(np.count_nonzero(words, axis=1).min()))
    return best
