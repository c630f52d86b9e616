"""Exact arithmetic in Z[zeta] for zeta a primitive p^n-th root of unity.

Elements live in the power basis 1, zeta, ..., zeta^(phi(p^n)-1) modulo the
p^n-th cyclotomic polynomial, with arbitrary-precision integer coordinates.
The valuation at the uniformizer pi = 1 - zeta (normalised so v(pi) = 1,
v(p) = p^(n-1)(p-1)), Galois conjugation, norms down to Z, and Newton
polygons over exact rationals all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INFINITY = math.inf


class CycInt:
    """Element of Z[zeta_{p^n}] in the power basis."""

    __slots__ = ("p", "n", "coords")

    def __init__(self, p: int, n: int, coords):
        if n < 1:
            raise ValueError("level must be >= 1")
        dim = p ** (n - 1) * (p - 1)
        coords = tuple(int(c) for c in coords)
        if len(coords) != dim:
            raise ValueError(f"need {dim} coordinates, got {len(coords)}")
        self.p = p
        self.n = n
        self.coords = coords

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, p: int, n: int, value: int) -> "CycInt":
        dim = p ** (n - 1) * (p - 1)
        return cls(p, n, (value,) + (0,) * (dim - 1))

    @classmethod
    def zeta_power(cls, p: int, n: int, e: int) -> "CycInt":
        """zeta^e for any integer e (reduced mod p^n, then into the basis)."""
        vec = [0] * p**n
        vec[e % p**n] = 1
        return cls(p, n, _fold_cyclic(vec, p, n))

    @property
    def dim(self) -> int:
        return p_power_phi(self.p, self.n)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.p != other.p or self.n != other.n:
            raise ValueError("mixed cyclotomic levels")

    def __add__(self, other):
        self._check(other)
        return CycInt(self.p, self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return CycInt(self.p, self.n, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CycInt(self.p, self.n, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.p, self.n, tuple(other * a for a in self.coords))
        self._check(other)
        d = len(self.coords)
        pn = self.p**self.n
        vec = [0] * pn
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        k = i + j
                        if k >= pn:
                            k -= pn
                        vec[k] += a * b
        return CycInt(self.p, self.n, _fold_cyclic(vec, self.p, self.n))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, CycInt)
            and self.p == other.p
            and self.n == other.n
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.p, self.n, self.coords))

    def __repr__(self):
        return f"CycInt(p={self.p}, n={self.n}, {self.coords})"

    # -- maps --------------------------------------------------------------

    def coefficient_sum(self) -> int:
        """Image under zeta -> 1 (a ring map to Z)."""
        return sum(self.coords)

    def as_integer(self) -> int:
        """The value as a rational integer; error if not rational."""
        if any(c != 0 for c in self.coords[1:]):
            raise ArithmeticError("element is not a rational integer")
        return self.coords[0]

    def divide_exact(self, m: int) -> "CycInt":
        """Exact division by a rational integer; error if any coordinate resists."""
        if any(c % m for c in self.coords):
            raise ArithmeticError(f"coordinates not divisible by {m}")
        return CycInt(self.p, self.n, tuple(c // m for c in self.coords))


def p_power_phi(p: int, n: int) -> int:
    return p ** (n - 1) * (p - 1)


def _fold_cyclic(vec, p, n):
    """Reduce a coefficient vector mod X^(p^n) - 1 into the power basis.

    Uses X^D = -(1 + X^e + ... + X^((p-2)e)) with e = p^(n-1), D = (p-1)e;
    every fold target lands below D, so one pass suffices.
    """
    e = p ** (n - 1)
    d = (p - 1) * e
    for idx in range(p**n - 1, d - 1, -1):
        c = vec[idx]
        if c:
            vec[idx] = 0
            base = idx - d
            for j in range(p - 1):
                vec[base + j * e] -= c
    return vec[:d]


def cyclotomic_modulus(p: int, n: int):
    """Coefficients of the p^n-th cyclotomic polynomial (degree phi(p^n))."""
    e = p ** (n - 1)
    d = (p - 1) * e
    coeffs = [0] * (d + 1)
    for j in range(p):
        coeffs[j * e] = 1
    return coeffs


def cyc_mul(x: CycInt, y: CycInt) -> CycInt:
    return x * y


def exact_div_by_uniformizer(x: CycInt) -> CycInt:
    """The exact quotient x / (1 - zeta); requires valuation >= 1.

    With A the coordinate polynomial, A(1) = 0 mod p; subtracting
    (A(1)/p) * Phi makes the value at 1 vanish exactly, after which
    division by (1 - X) in Z[X] is a prefix sum.
    """
    p, n = x.p, x.n
    s = x.coefficient_sum()
    if s % p:
        raise ArithmeticError("element is a unit at the uniformizer")
    phi = cyclotomic_modulus(p, n)
    mult = s // p
    a = list(x.coords) + [0]
    for i, c in enumerate(phi):
        if c:
            a[i] -= mult * c
    # divide by (1 - X): quotient coefficients are prefix sums
    q = []
    acc = 0
    for i in range(len(a) - 1):
        acc += a[i]
        q.append(acc)
    if acc != -a[-1]:
        raise ArithmeticError("division by (1 - zeta) not exact")
    return CycInt(p, n, q)


def pi_valuation(x: CycInt):
    """Order of vanishing at pi = 1 - zeta; INFINITY for zero."""
    if x.is_zero():
        return INFINITY
    v = 0
    while x.coefficient_sum() % x.p == 0:
        x = exact_div_by_uniformizer(x)
        v += 1
    return v


def galois_conjugate(x: CycInt, e: int) -> CycInt:
    """The automorphism zeta -> zeta^e, for e prime to p."""
    if e % x.p == 0:
        raise ValueError("conjugation exponent must be prime to p")
    pn = x.p**x.n
    vec = [0] * pn
    for j, c in enumerate(x.coords):
        if c:
            vec[(j * e) % pn] += c
    return CycInt(x.p, x.n, _fold_cyclic(vec, x.p, x.n))


def norm_to_Z(x: CycInt) -> int:
    """Product of all phi(p^n) Galois conjugates, as a rational integer."""
    pn = x.p**x.n
    acc = CycInt.from_int(x.p, x.n, 1)
    for e in range(1, pn):
        if e % x.p:
            acc = acc * galois_conjugate(x, e)
    return acc.as_integer()


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple  # (index, valuation) pairs as given
    hull: tuple  # (slope: Fraction, length: int), slopes strictly increasing

    @property
    def degree(self) -> int:
        return sum(length for _, length in self.hull)

    def slopes_with_multiplicity(self):
        return list(self.hull)


def newton_polygon(points) -> NewtonPolygon:
    """Lower convex hull of (index, valuation) points, exact rationals.

    Points with infinite valuation are skipped; the first index must have
    valuation 0 and the last must be finite.
    """
    pts = sorted((int(i), v) for i, v in points)
    if not pts or pts[0][0] != 0 or pts[0][1] != 0:
        raise ValueError("polygon must start at (0, 0)")
    if pts[-1][1] == INFINITY:
        raise ValueError("leading coefficient has infinite valuation")
    finite = [(i, v) for i, v in pts if v != INFINITY]
    hull = [finite[0]]
    for pt in finite[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep hull turning left: drop (x2, y2) if it sits on or above
            # the chord from (x1, y1) to pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    for (s1, _), (s2, _) in zip(segs, segs[1:]):
        if s1 >= s2:
            raise AssertionError("hull slopes not strictly increasing")
    return NewtonPolygon(points=tuple(pts), hull=tuple(segs))
