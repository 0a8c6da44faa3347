"""Arithmetic in binary extension fields GF(2^m).

Elements are stored as integers whose bits are the polynomial-basis
coordinates (bit i is the coefficient of x^i).  All heavy operations accept
numpy integer arrays and are vectorized through exp/log tables.

The moduli are the Conway polynomials for characteristic 2, which makes the
embedding GF(2^d) -> GF(2^m) canonical whenever d | m.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

# Conway polynomials over GF(2), bit i = coefficient of x^i.
CONWAY_MODULI: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10001101111,
    11: 0b100000000101,
    12: 0b1000011101011,
    13: 0b10000000011011,
    14: 0b100000010101001,
    15: 0b1000000000000011,
    16: 0b10000000000101101,
}

MAX_DEGREE = 16


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _polymod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division of a GF(2)[x] polynomial by every polynomial of degree <= deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _polymod(poly, cand) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Description of GF(2^degree) by its defining modulus."""

    degree: int
    modulus: int

    @property
    def characteristic(self) -> int:
        return 2

    @property
    def order(self) -> int:
        return 1 << self.degree

    def to_json(self) -> dict:
        return {"m": self.degree, "modulus": format(self.modulus, "x")}

    @classmethod
    def from_json(cls, data: dict) -> FieldSpec:
        return cls(int(data["m"]), int(data["modulus"], 16))


def make_field(m: int) -> FieldSpec:
    """Return the documented field description for GF(2^m), 1 <= m <= 16."""
    if not 1 <= m <= MAX_DEGREE:
        raise ValueError(f"unsupported field degree m={m}; need 1 <= m <= {MAX_DEGREE}")
    return FieldSpec(m, CONWAY_MODULI[m])


class GF:
    """Vectorized arithmetic core for one binary field.

    Use :func:`gf` to obtain cached instances.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.degree = spec.degree
        self.order = spec.order
        q = self.order
        mod = spec.modulus
        gen = self._find_generator()
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = _polymod(_clmul(x, gen), mod)
        exp[q - 1 : 2 * (q - 1)] = exp[: q - 1]
        exp[2 * (q - 1)] = exp[0]
        self.generator = gen
        self._exp = exp
        self._log = log
        self._exp.setflags(write=False)
        self._log.setflags(write=False)

    def _find_generator(self) -> int:
        q, mod = self.order, self.spec.modulus
        if q == 2:
            return 1
        n = q - 1
        primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % d for d in range(2, int(p**0.5) + 1))]
        for g in range(2, q):
            if all(self._slow_pow(g, n // p, mod) != 1 for p in primes):
                return g
        raise AssertionError("no primitive element found")  # pragma: no cover

    @staticmethod
    def _slow_pow(a: int, e: int, mod: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = _polymod(_clmul(out, a), mod)
            a = _polymod(_clmul(a, a), mod)
            e >>= 1
        return out

    def __repr__(self) -> str:
        return f"GF(2^{self.degree})"

    def __call__(self, value) -> FieldElem:
        return FieldElem(self, int(value))

    # -- elementwise arithmetic on ints / arrays ------------------------------

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @staticmethod
    def add(a, b):
        return np.bitwise_xor(a, b)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        """a**e elementwise for an integer exponent (0**0 == 1)."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        n = self.order - 1
        if e < 0:
            a = self.inv(a)
            e = -e
        out = self._exp[(self._log[a] * (e % n)) % n]
        return np.where(a == 0, 0, out)

    def frobenius(self, a, k: int = 1):
        """a**(2**k)."""
        return self.power(a, 1 << (k % self.degree) if self.degree else 1)

    def sum(self, a, axis=None):
        return np.bitwise_xor.reduce(np.asarray(a, dtype=np.int64), axis=axis)

    def poly_eval(self, coeffs, points):
        """Evaluate sum_i coeffs[i] * points**i at every point (vectorized)."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        points = np.asarray(points, dtype=np.int64)
        out = np.zeros(points.shape, dtype=np.int64)
        # Horner keeps memory linear in len(points)
        for c in coeffs[::-1]:
            out = self.mul(out, points) ^ int(c)
        return out

    @functools.cached_property
    def absolute_trace_table(self) -> np.ndarray:
        """Tr_{GF(2^m)/GF(2)} of every element, as a 0/1 array."""
        x = self.elements()
        acc = x.copy()
        y = x
        for _ in range(self.degree - 1):
            y = self.mul(y, y)
            acc ^= y
        assert np.all((acc == 0) | (acc == 1))
        return acc

    def absolute_trace(self, a):
        return self.absolute_trace_table[np.asarray(a, dtype=np.int64)]

    def relative_trace(self, a, sub_degree: int):
        """Tr_{GF(2^m)/GF(2^d)}(a) as elements of this (big) field."""
        if self.degree % sub_degree:
            raise ValueError(f"subfield degree {sub_degree} does not divide {self.degree}")
        a = np.asarray(a, dtype=np.int64)
        acc = a.copy()
        y = a
        for _ in range(self.degree // sub_degree - 1):
            y = self.power(y, 1 << sub_degree)
            acc = acc ^ y
        return acc


@functools.lru_cache(maxsize=None)
def gf(m: int) -> GF:
    """Cached arithmetic core for GF(2^m)."""
    return GF(make_field(m))


@dataclass(frozen=True)
class FieldElem:
    """A single field element with operator overloading.

    Bulk code works directly with integer arrays; this wrapper is for scalar
    bookkeeping and serialization.
    """

    field: GF
    value: int

    @property
    def spec(self) -> FieldSpec:
        return self.field.spec

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.field.degree))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise TypeError("elements of different fields")
            return other.value
        if other in (0, 1):
            return int(other)
        raise TypeError(f"cannot combine {other!r} with {self.field!r} element")

    def __add__(self, other):
        return FieldElem(self.field, self.value ^ self._coerce(other))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        return FieldElem(self.field, int(self.field.mul(self.value, self._coerce(other))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, int(self.field.div(self.value, self._coerce(other))))

    def __pow__(self, e: int):
        return FieldElem(self.field, int(self.field.power(self.value, e)))

    def __neg__(self):
        return self

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.degree, self.value))

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, int(self.field.inv(self.value)))

    def hex(self) -> str:
        return format(self.value, "x")

    def __repr__(self) -> str:
        return f"{self.field!r}(0x{self.hex()})"


def elem_from_hex(field: GF, text: str) -> FieldElem:
    value = int(text, 16)
    if value >= field.order:
        raise ValueError(f"{text!r} is not an element of {field!r}")
    return FieldElem(field, value)


class Subfield:
    """The copy of GF(2^d) inside GF(2^m), d | m.

    ``embed`` maps subfield coordinates to big-field integers; ``restrict``
    is its inverse on the image (and -1 elsewhere).
    """

    def __init__(self, big: GF, small: GF):
        if big.degree % small.degree:
            raise ValueError(f"GF(2^{small.degree}) is not a subfield of GF(2^{big.degree})")
        self.big = big
        self.small = small
        self.root = self._find_root()
        basis = [int(big.power(self.root, i)) for i in range(small.degree)]
        table = np.zeros(small.order, dtype=np.int64)
        for s in range(small.order):
            acc = 0
            for i, b in enumerate(basis):
                if (s >> i) & 1:
                    acc ^= b
            table[s] = acc
        back = np.full(big.order, -1, dtype=np.int64)
        back[table] = np.arange(small.order)
        self._embed = table
        self._restrict = back

    def _find_root(self) -> int:
        big, small = self.big, self.small
        mod_coeffs = [(small.spec.modulus >> i) & 1 for i in range(small.degree + 1)]
        # Conway compatibility: the norm of the big generator is a root of the small modulus.
        cand = int(big.power(big.generator, (big.order - 1) // (small.order - 1))) if small.order > 2 else 1
        if int(big.poly_eval(mod_coeffs, cand)) == 0:
            return cand
        roots = np.nonzero(big.poly_eval(mod_coeffs, big.elements()) == 0)[0]
        return int(roots[0])  # pragma: no cover

    def embed(self, s):
        return self._embed[np.asarray(s, dtype=np.int64)]

    def restrict(self, a):
        out = self._restrict[np.asarray(a, dtype=np.int64)]
        if np.any(out < 0):
            raise ValueError("element does not lie in the subfield")
        return out

    def contains(self, a):
        return self._restrict[np.asarray(a, dtype=np.int64)] >= 0

    def elements(self) -> np.ndarray:
        """Subfield elements as big-field integers, in subfield order."""
        return self._embed.copy()


@functools.lru_cache(maxsize=None)
def subfield(m: int, d: int) -> Subfield:
    return Subfield(gf(m), gf(d))


def field_trace(x: FieldElem, target_degree: int) -> FieldElem:
    """Relative trace of ``x`` onto GF(2^target_degree), in subfield coordinates."""
    big = x.field
    if target_degree < 1 or big.degree % target_degree:
        raise ValueError(f"GF(2^{target_degree}) is not a subfield of {big!r}")
    t = int(big.relative_trace(x.value, target_degree))
    sub = subfield(big.degree, target_degree)
    return FieldElem(sub.small, int(sub.restrict(t)))


@dataclass(frozen=True)
class NormalBasisPair:
    """Normal basis {theta, theta^r} of GF(r^2)/GF(r) with theta + theta^r = 1."""

    theta: FieldElem
    theta_conj: FieldElem
    r: int

    @property
    def eta(self) -> FieldElem:
        return self.theta * self.theta_conj

    @property
    def gamma(self) -> FieldElem:
        return self.eta + 1


def _log2(r: int) -> int:
    m = r.bit_length() - 1
    if r < 2 or r != 1 << m:
        raise ValueError(f"r={r} is not a power of two >= 2")
    return m


def normal_basis_candidates(r: int) -> list[NormalBasisPair]:
    """All theta in GF(r^2) outside GF(r) with theta + theta^r = 1, ascending."""
    m = _log2(r)
    big = gf(2 * m)
    x = big.elements()
    conj = big.power(x, r)
    ok = ((x ^ conj) == 1) & (conj != x)
    return [NormalBasisPair(big(t), big(int(conj[t])), r) for t in np.nonzero(ok)[0]]


def find_normal_basis(r: int, require_invertible_gamma: bool = False) -> NormalBasisPair:
    """Smallest theta (integer order) with theta + theta^r = 1, theta not in GF(r).

    With ``require_invertible_gamma`` the search skips thetas whose
    gamma = 1 + theta^(r+1) vanishes; a ValueError is raised if every
    candidate has gamma = 0 (this happens for r = 2).
    """
    cands = normal_basis_candidates(r)
    assert cands, "a normalized normal basis always exists"
    if not require_invertible_gamma:
        return cands[0]
    for c in cands:
        if c.gamma.value != 0:
            return c
    raise ValueError(f"every normalized normal basis of GF({r}^2) has gamma = 0")


def decompose(x, basis: NormalBasisPair):
    """Write x = x0*theta + x1*theta^r; returns (x0, x1) in GF(r) coordinates.

    Accepts a FieldElem (returns FieldElems) or an integer array (returns arrays).
    """
    big = basis.theta.field
    m = big.degree // 2
    sub = subfield(big.degree, m)
    scalar = isinstance(x, FieldElem)
    v = np.asarray(x.value if scalar else x, dtype=np.int64)
    # x^r = x0*theta^r + x1*theta; eliminating with (theta + theta^r)^2 = 1 gives
    # x0 = x*theta + x^r*theta^r and x1 = x*theta^r + x^r*theta.
    th, thc = basis.theta.value, basis.theta_conj.value
    vr = big.power(v, basis.r)
    x0 = big.mul(v, th) ^ big.mul(vr, thc)
    x1 = big.mul(v, thc) ^ big.mul(vr, th)
    s0, s1 = sub.restrict(x0), sub.restrict(x1)
    if scalar:
        return sub.small(int(s0)), sub.small(int(s1))
    return s0, s1


def compose(x0, x1, basis: NormalBasisPair):
    """Inverse of :func:`decompose`."""
    big = basis.theta.field
    sub = subfield(big.degree, big.degree // 2)
    scalar = isinstance(x0, FieldElem)
    a = sub.embed(x0.value if scalar else x0)
    b = sub.embed(x1.value if scalar else x1)
    out = big.mul(a, basis.theta.value) ^ big.mul(b, basis.theta_conj.value)
    return big(int(out)) if scalar else out
