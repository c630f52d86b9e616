"""L-polynomials by character sums and Newton's identities; zeta assembly.

The level-n L-polynomial is recovered from the exact power sums
S_k = sum over F_{q^k} of zeta^(exponent of x), k up to the closed-form
degree, via the recurrence m*b_m = sum S_k b_(m-k) with division asserted
exact.  Products of Galois conjugates give the primitive integer factor of
the zeta function at each level; class numbers come out of norms at s = 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import (
    CycInt,
    _fold_cyclic,
    galois_conjugate,
    newton_polygon,
    norm_to_Z,
    p_power_phi,
    pi_valuation,
)
from .ff import DEFAULT_BUDGET, FFElt, check_budget, enumerate_field, gr_trace, make_field, teichmuller_lift
from .kernels import exponent_counts, ring_coefficients
from .slopes import SlopeSeq
from .tower import TowerSpec, genus, l_degree


def frobenius_exponent(t: TowerSpec, x: FFElt, n: int) -> int:
    """Character exponent of one element: Tr(sum_i c_i tau(x)^i) mod p^n."""
    desc = x.desc
    coeffs = ring_coefficients(t, desc, n)
    z = teichmuller_lift(x, n)
    acc = None
    for i, c in coeffs:
        term = c * z**i
        acc = term if acc is None else acc + term
    return gr_trace(acc)


def power_sum(t: TowerSpec, n: int, k: int, *, budget=DEFAULT_BUDGET, jobs=1, cache=None):
    """S_k = sum over F_{q^k} of zeta^(exponent), an exact cyclotomic integer.

    Level 0 is the trivial character: returns the plain integer q^k.
    """
    if n == 0:
        return t.q**k
    if cache is not None:
        counts = cache.counts(t, k, n)
    else:
        counts = exponent_counts(t, k, n, budget=budget, jobs=jobs)
    return _counts_to_cyc(counts, t.p, n)


def _counts_to_cyc(counts: dict, p: int, n: int) -> CycInt:
    vec = [0] * p**n
    for e, c in counts.items():
        vec[e] += c
    return CycInt(p, n, _fold_cyclic(vec, p, n))


# ---------------------------------------------------------------------------
# closed-point oracle (independent route to the same sums)
# ---------------------------------------------------------------------------

def _divisors(k: int):
    return [m for m in range(1, k + 1) if k % m == 0]


def closed_point_exponent_counts(t: TowerSpec, prec: int, k: int, *, budget=DEFAULT_BUDGET) -> dict:
    """Exponent histogram of S_k assembled over Frobenius orbits.

    A degree-m orbit contributes weight m at (k/m) times its exponent; this
    is the logarithm of the product over closed points of the affine line,
    and never touches the multiplicative-walk kernel.
    """
    pe = t.p**prec
    counts = Counter()
    q = t.q
    for m in _divisors(k):
        desc = make_field(t.p, t.a, m)
        check_budget(desc, budget)
        for x in enumerate_field(desc, budget):
            orbit = [x]
            y = x**q
            while y != x:
                orbit.append(y)
                y = y**q
            if len(orbit) != m:
                continue  # element of smaller exact degree
            if min(o.coords for o in orbit) != x.coords:
                continue  # count each orbit once, at its least member
            e = frobenius_exponent(t, x, prec)
            counts[e * (k // m) % pe] += m
    return dict(counts)


def power_sum_closed_points(t: TowerSpec, n: int, k: int, *, budget=DEFAULT_BUDGET) -> CycInt:
    return _counts_to_cyc(closed_point_exponent_counts(t, n, k, budget=budget), t.p, n)


# ---------------------------------------------------------------------------
# the L-polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPoly:
    tower: TowerSpec
    n: int
    coeffs: tuple  # CycInt, b_0 = 1, length degree + 1
    power_sums: tuple  # CycInt, S_1..S_degree

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def value_at_one(self) -> CycInt:
        acc = self.coeffs[0]
        for b in self.coeffs[1:]:
            acc = acc + b
        return acc


def l_polynomial(t: TowerSpec, n: int, *, budget=DEFAULT_BUDGET, jobs=1, cache=None) -> LPoly:
    """Exact level-n L-polynomial; degree and purity are asserted."""
    ell = l_degree(t, n)
    sums = [power_sum(t, n, k, budget=budget, jobs=jobs, cache=cache) for k in range(1, ell + 1)]
    b = [CycInt.from_int(t.p, n, 1)]
    for m in range(1, ell + 1):
        acc = sums[0] * b[m - 1]
        for j in range(2, m + 1):
            acc = acc + sums[j - 1] * b[m - j]
        try:
            b.append(acc.divide_exact(m))
        except ArithmeticError as exc:
            raise ArithmeticError(
                f"power-sum recurrence not divisible by {m} at level {n}"
            ) from exc
    if ell > 0 and b[ell].is_zero():
        raise ArithmeticError(f"leading coefficient vanished; degree {ell} expected")
    lead_norm = abs(norm_to_Z(b[ell]))
    expected = Fraction(t.q) ** Fraction(ell * p_power_phi(t.p, n), 2)
    assert expected.denominator == 1 and lead_norm == expected, "leading coefficient fails weight purity"
    return LPoly(t, n, tuple(b), tuple(sums))


def q_slopes(lp: LPoly) -> SlopeSeq:
    """Slopes of the Newton polygon, normalised so v_q(q) = 1."""
    t, n = lp.tower, lp.n
    points = [(j, pi_valuation(c)) for j, c in enumerate(lp.coeffs)]
    hull = newton_polygon(points).hull
    scale = p_power_phi(t.p, n) * t.a
    entries = [(s / scale, length) for s, length in hull]
    seq = SlopeSeq.from_multiset(t.p, n, entries)
    assert seq.total() == lp.degree
    return seq


def extended_power_sum(lp: LPoly, k: int) -> CycInt:
    """S_k for k beyond the degree, from the recurrence run in reverse.

    Past the degree the recurrence reads 0 = sum_{j=1}^{k} S_j b_{k-j}
    (with b_m = 0 for m > degree), so S_k is determined by lower sums.
    """
    if k <= lp.degree:
        raise ValueError("extension index must exceed the degree")
    sums = list(lp.power_sums)
    for m in range(lp.degree + 1, k + 1):
        acc = CycInt.from_int(lp.tower.p, lp.n, 0)
        for j in range(1, m):
            if m - j <= lp.degree:
                acc = acc + sums[j - 1] * lp.coeffs[m - j]
        sums.append(-acc)
    return sums[k - 1]


# ---------------------------------------------------------------------------
# Galois orbits, zeta assembly, class numbers
# ---------------------------------------------------------------------------

def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def galois_orbit_product(lp: LPoly):
    """Coefficients of the product of all Galois conjugates of the L-polynomial.

    The result is the primitive integer factor of the level-n zeta
    numerator; integrality of every coefficient is asserted.
    """
    t, n = lp.tower, lp.n
    pn = t.p**n
    prod = [CycInt.from_int(t.p, n, 1)]
    for e in range(1, pn):
        if e % t.p == 0:
            continue
        conj = [galois_conjugate(c, e) for c in lp.coeffs]
        new = [CycInt.from_int(t.p, n, 0) for _ in range(len(prod) + len(conj) - 1)]
        for i, ci in enumerate(prod):
            for j, cj in enumerate(conj):
                new[i + j] = new[i + j] + ci * cj
        prod = new
    out = []
    for c in prod:
        try:
            out.append(c.as_integer())
        except ArithmeticError as exc:
            raise ArithmeticError("conjugate product has a non-integer coefficient") from exc
    assert len(out) - 1 == p_power_phi(t.p, n) * lp.degree
    return tuple(out)


def zeta_numerator(t: TowerSpec, n: int, *, budget=DEFAULT_BUDGET, jobs=1, cache=None):
    """Integer coefficients of the degree-2g_n zeta numerator at level n."""
    out = [1]
    for j in range(1, n + 1):
        lp = l_polynomial(t, j, budget=budget, jobs=jobs, cache=cache)
        out = _poly_mul_int(out, list(galois_orbit_product(lp)))
    assert len(out) - 1 == 2 * genus(t, n)
    return tuple(out)


@dataclass(frozen=True)
class ZetaSlopes:
    n: int
    slopes: SlopeSeq
    genus: int


def zeta_slopes(t: TowerSpec, n: int, *, budget=DEFAULT_BUDGET, jobs=1, cache=None) -> ZetaSlopes:
    """Slope multiset of the level-n zeta numerator.

    Union over levels j <= n of the L-slopes, each with multiplicity
    (p-1)p^(j-1); the level-0 part contributes nothing (genus 0 base).
    """
    counter = Counter()
    for j in range(1, n + 1):
        lp = l_polynomial(t, j, budget=budget, jobs=jobs, cache=cache)
        mult = (t.p - 1) * t.p ** (j - 1)
        for s, m in q_slopes(lp).entries:
            counter[s] += m * mult
    seq = SlopeSeq(t.p, n, tuple(sorted(counter.items())))
    g = genus(t, n)
    assert seq.total() == 2 * g
    return ZetaSlopes(n, seq, g)


def class_number(t: TowerSpec, n: int, *, budget=DEFAULT_BUDGET, jobs=1, cache=None) -> int:
    """Order of the level-n degree-zero divisor class group, by norms at s=1."""
    h = 1
    for j in range(1, n + 1):
        lp = l_polynomial(t, j, budget=budget, jobs=jobs, cache=cache)
        factor = norm_to_Z(lp.value_at_one())
        assert factor > 0, "norm at s = 1 must be positive"
        h *= factor
    return h
