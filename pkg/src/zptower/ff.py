"""Exact arithmetic in finite fields F_{q^k} and their p-power lifts.

The working field F_{q^k} (q = p^a) is realised as F_p[X]/(h) for a
deterministically chosen irreducible h of degree a*k, so every run picks the
same model.  The lift used for character exponents is the Galois ring
(Z/p^n)[X]/(h), h read as an integer polynomial; Teichmuller representatives
and the trace down to Z/p^n are the only structure the sum pipeline needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import EnumerationBudgetError, PrecisionError

#: Hard cap on brute-force field enumerations (number of elements).
DEFAULT_BUDGET = 200_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for small in _MR_BASES:
        if n % small == 0:
            return n == small
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# dense polynomial arithmetic on coordinate vectors
# ---------------------------------------------------------------------------

def _poly_mulmod(a, b, modulus, pe):
    """Product of coordinate vectors, reduced by the monic modulus, mod pe."""
    m = len(modulus) - 1
    if m == 1:
        return (a[0] * b[0] % pe,)
    tmp = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                tmp[i + j] += ai * bj
    for e in range(2 * m - 2, m - 1, -1):
        c = tmp[e] % pe
        if c:
            base = e - m
            for t in range(m):
                tmp[base + t] -= c * modulus[t]
    return tuple(x % pe for x in tmp[:m])


def _poly_powmod(a, e, modulus, pe):
    m = len(modulus) - 1
    result = tuple([1] + [0] * (m - 1))
    base = a
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, pe)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, modulus, pe)
    return result


def _trim(poly):
    d = len(poly) - 1
    while d >= 0 and poly[d] == 0:
        d -= 1
    return poly[: d + 1]


def _poly_rem(a, b, p):
    """Remainder of a by b over F_p (b nonzero)."""
    a = [c % p for c in a]
    db = len(b) - 1
    inv = pow(b[db], -1, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            f = c * inv % p
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - f * b[j]) % p
    return _trim(a[:db])


def _poly_gcd_degree(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_rem(a, b, p)
    return len(a) - 1


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(coeffs, p):
    """Irreducibility of a monic polynomial over F_p."""
    m = len(coeffs) - 1
    if m == 1:
        return True
    if coeffs[0] == 0:  # divisible by X
        return False
    x = tuple([0, 1] + [0] * (m - 2))
    if _poly_powmod(x, p**m, coeffs, p) != x:
        return False
    for r in _prime_factors(m):
        g = list(_poly_powmod(x, p ** (m // r), coeffs, p))
        g[1] = (g[1] - 1) % p
        if _poly_gcd_degree(coeffs, g, p) > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# field descriptors and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDesc:
    """Fixed model of F_{q^k}, q = p^a, as F_p[X]/(modulus)."""

    p: int
    a: int
    k: int
    modulus: tuple  # monic, length a*k + 1, coefficients in [0, p)

    @property
    def degree(self) -> int:
        return self.a * self.k

    @property
    def q(self) -> int:
        return self.p**self.a

    @property
    def order(self) -> int:
        return self.p ** (self.a * self.k)

    def __repr__(self):
        return f"FieldDesc(p={self.p}, a={self.a}, k={self.k})"


@lru_cache(maxsize=None)
def make_field(p: int, a: int = 1, k: int = 1) -> FieldDesc:
    """Field descriptor with the first monic irreducible of degree a*k.

    Candidates X^m + c_{m-1}X^{m-1} + ... + c_0 are scanned in base-p
    counting order of (c_0, ..., c_{m-1}), so the modulus (and everything
    derived from it) is reproducible across runs and machines.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if a < 1 or k < 1:
        raise ValueError("extension degrees must be >= 1")
    m = a * k
    for t in range(p**m):
        digits = []
        tt = t
        for _ in range(m):
            digits.append(tt % p)
            tt //= p
        cand = tuple(digits) + (1,)
        if _is_irreducible(cand, p):
            return FieldDesc(p, a, k, cand)
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


class FFElt:
    """Element of F_{q^k} in the power basis of the field modulus."""

    __slots__ = ("desc", "coords")

    def __init__(self, desc: FieldDesc, coords):
        p = desc.p
        self.desc = desc
        self.coords = tuple(c % p for c in coords)

    @classmethod
    def of(cls, desc: FieldDesc, value: int) -> "FFElt":
        return cls(desc, (value,) + (0,) * (desc.degree - 1))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        return FFElt(self.desc, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return FFElt(self.desc, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return FFElt(self.desc, tuple(-x for x in self.coords))

    def __mul__(self, other):
        return FFElt(
            self.desc,
            _poly_mulmod(self.coords, other.coords, self.desc.modulus, self.desc.p),
        )

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        return FFElt(self.desc, _poly_powmod(self.coords, e, self.desc.modulus, self.desc.p))

    def frobenius(self):
        return self**self.desc.p

    def __eq__(self, other):
        return (
            isinstance(other, FFElt)
            and self.desc == other.desc
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.desc, self.coords))

    def __repr__(self):
        return f"FFElt{self.coords}"


class GRElt:
    """Element of (Z/p^n)[X]/(modulus), the precision-n lift of the field."""

    __slots__ = ("desc", "precision", "coords")

    def __init__(self, desc: FieldDesc, precision: int, coords):
        if precision < 1:
            raise PrecisionError("ring precision must be >= 1")
        pe = desc.p**precision
        self.desc = desc
        self.precision = precision
        self.coords = tuple(c % pe for c in coords)

    @classmethod
    def of(cls, desc: FieldDesc, precision: int, value: int) -> "GRElt":
        return cls(desc, precision, (value,) + (0,) * (desc.degree - 1))

    @property
    def pe(self) -> int:
        return self.desc.p**self.precision

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check(self, other):
        if self.desc != other.desc or self.precision != other.precision:
            raise ValueError("mixed ring operands")

    def __add__(self, other):
        self._check(other)
        return GRElt(self.desc, self.precision, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return GRElt(self.desc, self.precision, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return GRElt(self.desc, self.precision, tuple(-x for x in self.coords))

    def __mul__(self, other):
        self._check(other)
        return GRElt(
            self.desc,
            self.precision,
            _poly_mulmod(self.coords, other.coords, self.desc.modulus, self.pe),
        )

    def scale(self, c: int) -> "GRElt":
        return GRElt(self.desc, self.precision, tuple(c * x for x in self.coords))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        return GRElt(self.desc, self.precision, _poly_powmod(self.coords, e, self.desc.modulus, self.pe))

    def reduce_mod_p(self) -> FFElt:
        return FFElt(self.desc, self.coords)

    def reduce_precision(self, n: int) -> "GRElt":
        if n > self.precision:
            raise PrecisionError("cannot raise precision by reduction")
        return GRElt(self.desc, n, self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, GRElt)
            and self.desc == other.desc
            and self.precision == other.precision
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.desc, self.precision, self.coords))

    def __repr__(self):
        return f"GRElt(prec={self.precision}, {self.coords})"


# ---------------------------------------------------------------------------
# Teichmuller lifts and traces
# ---------------------------------------------------------------------------

def teichmuller_lift(x: FFElt, n: int) -> GRElt:
    """The unique z mod p^n with z = x mod p and z^(q^k) = z.

    Iterating the (q^k)-power map from any lift gains one digit per step,
    so at most n passes are needed.
    """
    if n < 1:
        raise PrecisionError("precision must be >= 1")
    order = x.desc.order
    z = GRElt(x.desc, n, x.coords)
    for _ in range(n):
        znew = z**order
        if znew == z:
            return z
        z = znew
    if z**order != z:
        raise ArithmeticError("Teichmuller iteration failed to stabilise")
    return z


@lru_cache(maxsize=None)
def _trace_vector(desc: FieldDesc, precision: int):
    """Traces of the power-basis monomials, via Newton's identities.

    The conjugates of the basis generator are the roots of the modulus, so
    Tr(X^i) is the i-th power sum of those roots, computable from the
    modulus coefficients without materialising the ring Frobenius.
    """
    p, m = desc.p, desc.degree
    pe = p**precision
    e = [0] * (m + 1)
    for j in range(1, m + 1):
        sign = -1 if j % 2 else 1
        e[j] = sign * desc.modulus[m - j] % pe
    ps = [0] * m
    ps[0] = m % pe
    for i in range(1, m):
        acc = 0
        for j in range(1, i):
            term = e[j] * ps[i - j]
            acc += term if j % 2 == 1 else -term
        tail = i * e[i]
        acc += tail if i % 2 == 1 else -tail
        ps[i] = acc % pe
    return tuple(ps)


def gr_trace(z: GRElt) -> int:
    """Trace of z down to Z/p^n (sum of the a*k Frobenius conjugates)."""
    tvec = _trace_vector(z.desc, z.precision)
    return sum(c * t for c, t in zip(z.coords, tvec)) % z.pe


def ff_trace(x: FFElt) -> int:
    """Absolute trace F_{q^k} -> F_p as an integer in [0, p)."""
    return gr_trace(GRElt(x.desc, 1, x.coords))


# ---------------------------------------------------------------------------
# enumeration and multiplicative structure
# ---------------------------------------------------------------------------

def check_budget(desc: FieldDesc, budget: int = DEFAULT_BUDGET):
    if desc.order > budget:
        raise EnumerationBudgetError(
            f"field with {desc.order} elements exceeds the enumeration budget {budget}"
        )


def element_from_index(desc: FieldDesc, t: int) -> FFElt:
    digits = []
    for _ in range(desc.degree):
        digits.append(t % desc.p)
        t //= desc.p
    return FFElt(desc, tuple(digits))


def enumerate_field(desc: FieldDesc, budget: int = DEFAULT_BUDGET):
    """All q^k elements exactly once, coords in base-p counting order."""
    check_budget(desc, budget)
    p, m = desc.p, desc.degree
    coords = [0] * m
    for _ in range(desc.order):
        yield FFElt(desc, tuple(coords))
        for t in range(m):
            coords[t] += 1
            if coords[t] < p:
                break
            coords[t] = 0


@lru_cache(maxsize=None)
def multiplicative_generator(desc: FieldDesc) -> FFElt:
    """First element (in enumeration order) generating the unit group."""
    order = desc.order
    n = order - 1
    if n == 1:
        return FFElt.of(desc, 1)
    primes = _prime_factors(n)
    one = FFElt.of(desc, 1)
    for t in range(1, order):
        cand = element_from_index(desc, t)
        if all(cand ** (n // r) != one for r in primes):
            return cand
    raise ArithmeticError("no generator found")  # unreachable


def _eval_int_poly_ff(coeffs, x: FFElt) -> FFElt:
    acc = FFElt.of(x.desc, 0)
    for c in reversed(coeffs):
        acc = acc * x + FFElt.of(x.desc, c)
    return acc


@lru_cache(maxsize=None)
def subfield_generator(desc: FieldDesc) -> FFElt:
    """The fixed root in F_{q^k} of the reference degree-a modulus.

    Its powers embed F_q consistently; it is fixed by x -> x^q.
    """
    if desc.a == 1:
        return FFElt.of(desc, 1)
    if desc.k == 1:
        return element_from_index(desc, desc.p)  # the class of X
    base = make_field(desc.p, desc.a, 1)
    g = multiplicative_generator(desc)
    eta = g ** ((desc.order - 1) // (desc.q - 1))
    cand = eta
    for _ in range(desc.q - 1):
        if _eval_int_poly_ff(base.modulus, cand).is_zero():
            return cand
        cand = cand * eta
    raise ArithmeticError("reference modulus has no root in the extension")


def embed_field(x: FFElt, target: FieldDesc) -> FFElt:
    """Embed an element of F_q = F_p[Y]/(g_a) into F_{q^k}."""
    if x.desc.p != target.p or x.desc.degree != target.a:
        raise ValueError("element is not in the coefficient field")
    if x.desc.degree == 1:
        return FFElt.of(target, x.coords[0])
    eta = subfield_generator(target)
    acc = FFElt.of(target, 0)
    for c in reversed(x.coords):
        acc = acc * eta + FFElt.of(target, c)
    return acc


def _gr_exact_div_p(z: GRElt) -> GRElt:
    if any(c % z.desc.p for c in z.coords):
        raise ArithmeticError("element not divisible by p")
    return GRElt(z.desc, z.precision - 1, tuple(c // z.desc.p for c in z.coords))


def gr_embed(c: GRElt, target: FieldDesc, precision: int) -> GRElt:
    """Embed a lift of F_q into the precision-n lift of F_{q^k}.

    Works through the Teichmuller digit expansion c = sum p^j [u_j], which
    the unique ring embedding maps digit by digit.
    """
    if c.precision < precision:
        raise PrecisionError(
            f"coefficient known mod p^{c.precision}, needed mod p^{precision}"
        )
    digits = []
    cur = c
    for j in range(precision):
        u = cur.reduce_mod_p()
        digits.append(u)
        if j < precision - 1:
            cur = _gr_exact_div_p(cur - teichmuller_lift(u, cur.precision))
    acc = GRElt.of(target, precision, 0)
    pj = 1
    for u in digits:
        if not u.is_zero():
            acc = acc + teichmuller_lift(embed_field(u, target), precision).scale(pj)
        pj *= target.p
    return acc
