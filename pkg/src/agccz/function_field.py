"""Divisor calculus on the rational function field GF(q)(x), q = 2^m.

Every place used here is rational: a finite place ``P_alpha`` (the zero of
x + alpha) or the place at infinity.  Polynomials are numpy coefficient
arrays, lowest degree first, with no trailing zeros (the zero polynomial is
the empty array).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .finite_fields import GF, _log2, gf, subfield


class UnsupportedFactorization(ValueError):
    """A polynomial does not split into linear factors over the base field."""


class PoleError(ValueError):
    """A rational function was evaluated at one of its poles."""


# --- polynomials ----------------------------------------------------------


def ptrim(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    nz = np.nonzero(p)[0]
    return p[: nz[-1] + 1].copy() if nz.size else np.zeros(0, dtype=np.int64)


def pdeg(p: np.ndarray) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def pmonomial(i: int, c: int = 1) -> np.ndarray:
    p = np.zeros(i + 1, dtype=np.int64)
    p[i] = c
    return p


def padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(max(len(a), len(b)), dtype=np.int64)
    out[: len(a)] ^= a
    out[: len(b)] ^= b
    return ptrim(out)


def pmul(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i in np.nonzero(a)[0]:
        out[i : i + len(b)] ^= F.mul(a[i], b)
    return ptrim(out)


def ppow(F: GF, a: np.ndarray, e: int) -> np.ndarray:
    out = np.ones(1, dtype=np.int64)
    base = a
    while e:
        if e & 1:
            out = pmul(F, out, base)
        e >>= 1
        if e:
            base = pmul(F, base, base)
    return out


def pdivmod(F: GF, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b = ptrim(b)
    if len(b) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = ptrim(a)
    db = pdeg(b)
    if pdeg(r) < db:
        return np.zeros(0, dtype=np.int64), ptrim(r)
    inv_lead = int(F.inv(b[-1]))
    scaled = F.mul(b, inv_lead)
    q = np.zeros(len(r) - db, dtype=np.int64)
    for i in range(len(r) - 1, db - 1, -1):
        c = int(r[i])
        if c:
            q[i - db] = c
            r[i - db : i + 1] ^= F.mul(c, scaled)
    q = F.mul(q, inv_lead)
    return ptrim(q), ptrim(r[:db])


def pmonic(F: GF, a: np.ndarray) -> np.ndarray:
    a = ptrim(a)
    return F.mul(a, F.inv(a[-1])) if len(a) else a


def _low_order(p: np.ndarray) -> int:
    return int(np.nonzero(p)[0][0])


def pgcd(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Monic gcd."""
    a, b = ptrim(a), ptrim(b)
    for p, o in ((a, b), (b, a)):
        if len(p) and np.count_nonzero(p) == 1 and len(o):
            # gcd(c*x^i, g) = x^min(i, ord_0 g)
            return pmonomial(min(pdeg(p), _low_order(o)))
    while len(b):
        a, b = b, pdivmod(F, a, b)[1]
    return pmonic(F, a) if len(a) else a


def pderiv(p: np.ndarray) -> np.ndarray:
    """Formal derivative in characteristic 2: only odd-degree terms survive."""
    if len(p) <= 1:
        return np.zeros(0, dtype=np.int64)
    d = p[1:].copy()
    d[1::2] = 0
    return ptrim(d)


def pfrom_roots(F: GF, roots: Iterable[int]) -> np.ndarray:
    """prod (x + alpha) over ``roots`` (repetition allowed)."""
    out = np.ones(1, dtype=np.int64)
    for a in roots:
        nxt = np.zeros(len(out) + 1, dtype=np.int64)
        nxt[1:] = out
        nxt[:-1] ^= F.mul(out, int(a))
        out = nxt
    return out


def _power_table(F: GF, points: np.ndarray, deg: int) -> np.ndarray:
    """points[:, None] ** arange(deg + 1), with 0**0 = 1."""
    points = np.asarray(points, dtype=np.int64)
    i = np.arange(deg + 1)
    n = F.order - 1
    tab = F._exp[(F._log[points][:, None] * i[None, :]) % n]
    tab = np.where(points[:, None] == 0, 0, tab)
    tab[:, 0] = 1
    return tab


def peval(F: GF, p: np.ndarray, points) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    if len(p) == 0:
        return np.zeros(points.shape, dtype=np.int64)
    flat = points.reshape(-1)
    T = F.mul(p[None, :], _power_table(F, flat, pdeg(p)))
    return np.bitwise_xor.reduce(T, axis=1).reshape(points.shape)


def root_multiplicities(F: GF, p: np.ndarray, points) -> np.ndarray:
    """Multiplicity of each point as a root of ``p`` (0 for non-roots).

    Uses Hasse derivatives: mult = least k with D^(k) p (alpha) != 0, where
    the binomial C(i, k) mod 2 is 1 iff the bits of k are a subset of i's.
    """
    points = np.asarray(points, dtype=np.int64)
    if len(p) == 0:
        raise ValueError("zero polynomial has no finite root multiplicities")
    d = pdeg(p)
    mult = np.full(points.shape, -1, dtype=np.int64)
    zero = points == 0
    if zero.any():
        mult[zero] = _low_order(p)
    idx = np.nonzero(~zero)[0]
    if idx.size:
        # f_i * alpha^i; the common alpha^(-k) factor does not affect vanishing
        T = F.mul(p[None, :], _power_table(F, points[idx], d))
        i = np.arange(d + 1)
        todo = np.ones(idx.size, dtype=bool)
        res = np.full(idx.size, -1, dtype=np.int64)
        for k in range(d + 1):
            mask = (i & k) == k
            vals = np.bitwise_xor.reduce(T[np.ix_(todo, mask)], axis=1)
            hit = np.nonzero(todo)[0][vals != 0]
            res[hit] = k
            todo[hit] = False
            if not todo.any():
                break
        mult[idx] = res
    assert np.all(mult >= 0)
    return mult


# --- places and divisors -----------------------------------------------------


@dataclass(frozen=True)
class Place:
    """Rational place: ``alpha`` is a field element, or None for infinity."""

    alpha: int | None

    @property
    def is_infinite(self) -> bool:
        return self.alpha is None

    def sort_key(self) -> tuple[int, int]:
        return (1, 0) if self.alpha is None else (0, self.alpha)

    def to_json(self) -> dict:
        return {"inf": True} if self.alpha is None else {"alpha": format(self.alpha, "x")}

    @classmethod
    def from_json(cls, data: Mapping) -> Place:
        if data.get("inf"):
            return INFINITY
        return cls(int(data["alpha"], 16))

    def __repr__(self) -> str:
        return "Q_inf" if self.alpha is None else f"P_{self.alpha:#x}"

    def __lt__(self, other: Place) -> bool:
        return self.sort_key() < other.sort_key()


INFINITY = Place(None)


def finite_place(alpha: int) -> Place:
    return Place(int(alpha))


class Divisor:
    """Formal integer combination of rational places (zero coefficients dropped)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Place, int] | None = None):
        self._c = {p: int(v) for p, v in (coeffs or {}).items() if v}

    @classmethod
    def sum_of(cls, places: Iterable[Place], coeff: int = 1) -> Divisor:
        out: dict[Place, int] = {}
        for p in places:
            out[p] = out.get(p, 0) + coeff
        return cls(out)

    def __getitem__(self, p: Place) -> int:
        return self._c.get(p, 0)

    def items(self):
        return sorted(self._c.items(), key=lambda kv: kv[0].sort_key())

    @property
    def support(self) -> list[Place]:
        return [p for p, _ in self.items()]

    @property
    def degree(self) -> int:
        return sum(self._c.values())

    def __add__(self, other: Divisor) -> Divisor:
        out = dict(self._c)
        for p, v in other._c.items():
            out[p] = out.get(p, 0) + v
        return Divisor(out)

    def __neg__(self) -> Divisor:
        return Divisor({p: -v for p, v in self._c.items()})

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __mul__(self, k: int) -> Divisor:
        return Divisor({p: k * v for p, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __le__(self, other: Divisor) -> bool:
        return all(v >= 0 for v in (other - self)._c.values())

    def __ge__(self, other: Divisor) -> bool:
        return other <= self

    def is_effective(self) -> bool:
        return all(v >= 0 for v in self._c.values())

    def __repr__(self) -> str:
        if not self._c:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{v}*{p!r}" for p, v in self.items()) + ")"

    def to_json(self) -> list[dict]:
        return [{"place": p.to_json(), "coeff": v} for p, v in self.items()]

    @classmethod
    def from_json(cls, data) -> Divisor:
        if isinstance(data, str):
            data = json.loads(data)
        return cls({Place.from_json(d["place"]): int(d["coeff"]) for d in data})


# --- rational functions ----------------------------------------------------------


class RationalFunction:
    """num/den over GF(q), reduced, with monic denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: GF, num, den=None):
        num = ptrim(num)
        den = ptrim(np.ones(1, dtype=np.int64) if den is None else den)
        if len(den) == 0:
            raise ZeroDivisionError("zero denominator")
        if len(num) == 0:
            den = np.ones(1, dtype=np.int64)
        else:
            g = pgcd(field, num, den)
            if pdeg(g) > 0:
                num = pdivmod(field, num, g)[0]
                den = pdivmod(field, den, g)[0]
        lead = int(den[-1])
        if lead != 1:
            inv = int(field.inv(lead))
            num, den = field.mul(num, inv), field.mul(den, inv)
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def x(cls, field: GF) -> RationalFunction:
        return cls(field, pmonomial(1))

    @classmethod
    def constant(cls, field: GF, c: int) -> RationalFunction:
        return cls(field, np.array([c]))

    def is_zero(self) -> bool:
        return len(self.num) == 0

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        F = self.field
        return RationalFunction(F, pmul(F, self.num, other.num), pmul(F, self.den, other.den))

    def __truediv__(self, other: RationalFunction) -> RationalFunction:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        F = self.field
        return RationalFunction(F, pmul(F, self.num, other.den), pmul(F, self.den, other.num))

    def __add__(self, other: RationalFunction) -> RationalFunction:
        F = self.field
        num = padd(pmul(F, self.num, other.den), pmul(F, other.num, self.den))
        return RationalFunction(F, num, pmul(F, self.den, other.den))

    __sub__ = __add__

    def __pow__(self, e: int) -> RationalFunction:
        F = self.field
        if e < 0:
            return RationalFunction(F, ppow(F, self.den, -e), ppow(F, self.num, -e))
        return RationalFunction(F, ppow(F, self.num, e), ppow(F, self.den, e))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFunction)
            and np.array_equal(self.num, other.num)
            and np.array_equal(self.den, other.den)
        )

    def __hash__(self) -> int:
        return hash((self.num.tobytes(), self.den.tobytes()))

    def derivative(self) -> RationalFunction:
        """d/dx by the quotient rule (signs vanish in characteristic 2)."""
        F = self.field
        top = padd(pmul(F, pderiv(self.num), self.den), pmul(F, self.num, pderiv(self.den)))
        return RationalFunction(F, top, pmul(F, self.den, self.den))

    def evaluate(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        d = peval(self.field, self.den, points)
        if np.any(d == 0):
            bad = points[d == 0]
            raise PoleError(f"evaluation at pole(s) {[hex(int(b)) for b in bad[:5]]}")
        return self.field.div(peval(self.field, self.num, points), d)

    def __repr__(self) -> str:
        return f"RationalFunction(deg num={pdeg(self.num)}, deg den={pdeg(self.den)})"


@dataclass(frozen=True)
class DifferentialForm:
    """u dx."""

    coefficient: RationalFunction


def valuation(p: Place, f: RationalFunction) -> float:
    """v_p(f); ``math.inf`` for the zero function."""
    if f.is_zero():
        return float("inf")
    if p.is_infinite:
        return pdeg(f.den) - pdeg(f.num)
    F = f.field
    a = np.array([p.alpha])
    return int(root_multiplicities(F, f.num, a)[0] - root_multiplicities(F, f.den, a)[0])


def _finite_part(F: GF, poly: np.ndarray) -> dict[Place, int]:
    if pdeg(poly) <= 0:
        return {}
    pts = F.elements()
    roots = pts[peval(F, poly, pts) == 0]
    mult = root_multiplicities(F, poly, roots) if roots.size else np.zeros(0, dtype=np.int64)
    if int(mult.sum()) != pdeg(poly):
        raise UnsupportedFactorization(
            f"polynomial of degree {pdeg(poly)} has only {int(mult.sum())} roots over {F!r}"
        )
    return {finite_place(a): int(k) for a, k in zip(roots, mult)}


def divisor_of_function(f: RationalFunction) -> Divisor:
    if f.is_zero():
        raise ValueError("the zero function has no divisor")
    F = f.field
    out = Divisor(_finite_part(F, f.num)) - Divisor(_finite_part(F, f.den))
    return out + Divisor({INFINITY: pdeg(f.den) - pdeg(f.num)})


def divisor_of_differential(w: DifferentialForm) -> Divisor:
    # (dx) = -2 Q_inf on the rational function field
    return divisor_of_function(w.coefficient) + Divisor({INFINITY: -2})


def pole_polynomials(F: GF, g_div: Divisor) -> tuple[np.ndarray, np.ndarray]:
    """(h_pos, h_neg): products of (x + alpha)^|c| over positive / negative finite coefficients."""
    pos, neg = [], []
    for p, c in g_div.items():
        if not p.is_infinite:
            (pos if c > 0 else neg).extend([p.alpha] * abs(c))
    return pfrom_roots(F, pos), pfrom_roots(F, neg)


def riemann_roch_basis(F: GF, g_div: Divisor, check: bool = True) -> list[RationalFunction]:
    """Basis x^i * h_neg / h_pos, 0 <= i <= deg G, of L(G).

    h_pos collects the positive finite coefficients of G (allowed poles) and
    h_neg the negative ones (required zeros).
    """
    deg = g_div.degree
    if deg < 0:
        return []
    h_pos, h_neg = pole_polynomials(F, g_div)
    basis = [RationalFunction(F, pmul(F, pmonomial(i), h_neg), h_pos) for i in range(deg + 1)]
    if check:
        for f in basis:
            if not (divisor_of_function(f) + g_div).is_effective():
                raise AssertionError(f"{f!r} is not in L(G)")
    return basis


def check_triorthogonality_condition(g_div: Divisor, d_div: Divisor, eta_div: Divisor) -> bool:
    """G >= 0 and 3G <= D + (eta), coefficientwise."""
    return g_div.is_effective() and 3 * g_div <= d_div + eta_div


# --- the base-code geometry over GF(r^2) ----------------------------------------


@dataclass(frozen=True)
class BaseGeometry:
    """Places of GF(r^2)(x) used by the base code.

    ``z_points`` are the evaluation points GF(r^2) minus GF(r), ascending;
    ``v_places`` the zeros of x^r + x together with infinity.
    """

    r: int
    field: GF
    z_points: np.ndarray
    v_places: tuple[Place, ...]

    @property
    def d0(self) -> Divisor:
        return Divisor.sum_of(finite_place(a) for a in self.z_points)

    @property
    def a_q(self) -> int:
        return (self.r - 2) // 3

    @property
    def g0(self) -> Divisor:
        return Divisor.sum_of(self.v_places, self.a_q)


def base_geometry(r: int) -> BaseGeometry:
    m = _log2(r)
    F = gf(2 * m)
    sub = subfield(2 * m, m)
    z = np.nonzero(~sub.contains(F.elements()))[0].astype(np.int64)
    v = tuple(sorted(finite_place(a) for a in sub.elements())) + (INFINITY,)
    return BaseGeometry(r, F, z, v)


def _x_pow_plus_x(F: GF, e: int) -> np.ndarray:
    p = pmonomial(e)
    p[1] ^= 1
    return p


def eta0_differential(r: int) -> DifferentialForm:
    """dz0/z0 with z0 = prod over alpha in GF(r^2) minus GF(r) of (x + alpha).

    z0 is formed as (x^(r^2) + x)/(x^r + x) and differentiated with the
    quotient rule; the result is reduced, so it can be compared directly
    against the closed form in :func:`eta0_closed_form`.
    """
    m = _log2(r)
    if m < 1:
        raise ValueError("r must be a power of two")
    F = gf(2 * m)
    big = RationalFunction(F, _x_pow_plus_x(F, r * r))
    small = RationalFunction(F, _x_pow_plus_x(F, r))
    z0 = big / small
    assert pdeg(z0.den) == 0, "x^r + x divides x^(r^2) + x"
    return DifferentialForm(z0.derivative() / z0)


def eta0_closed_form(r: int) -> RationalFunction:
    """(x^r + x)^(r-2) / prod_{alpha in Z}(x + alpha)."""
    geo = base_geometry(r)
    F = geo.field
    num = ppow(F, _x_pow_plus_x(F, r), r - 2)
    return RationalFunction(F, num, pfrom_roots(F, geo.z_points))


def simple_pole_residues(u: RationalFunction, points) -> np.ndarray:
    """res_{P_alpha}(u dx) = num(alpha)/den'(alpha) at simple poles alpha."""
    F = u.field
    points = np.asarray(points, dtype=np.int64)
    if np.any(root_multiplicities(F, u.den, points) != 1):
        raise ValueError("residue formula needs simple poles")
    return F.div(peval(F, u.num, points), peval(F, pderiv(u.den), points))
