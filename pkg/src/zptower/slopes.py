"""Slope multisets, multiplicity counting, stability detection, statistics.

Slopes are exact rationals in [0, 1] kept as sorted (value, multiplicity)
pairs.  The stable-slope rule generates the level-n multiset from a base
level by arithmetic progressions; detection scans for the least base level
whose prediction matches every computed level above it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .ff import DEFAULT_BUDGET
from .tower import TowerSpec, l_degree, slope_scale_d


@dataclass(frozen=True)
class SlopeSeq:
    """Sorted multiset of q-slopes at one tower level."""

    p: int
    level: int
    entries: tuple  # ((Fraction, int), ...) strictly increasing, mult > 0

    @classmethod
    def from_multiset(cls, p: int, level: int, slopes) -> "SlopeSeq":
        counter = Counter()
        for item in slopes:
            if isinstance(item, tuple):
                value, mult = item
                counter[Fraction(value)] += mult
            else:
                counter[Fraction(item)] += 1
        for s in counter:
            if not 0 <= s <= 1:
                raise ValueError(f"slope {s} outside [0, 1]")
        entries = tuple(sorted(counter.items()))
        return cls(p, level, entries)

    @property
    def scale(self) -> int:
        return self.p**self.level

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, value) -> int:
        value = Fraction(value)
        for s, m in self.entries:
            if s == value:
                return m
        return 0

    def expand(self):
        out = []
        for s, m in self.entries:
            out.extend([s] * m)
        return out

    def rescaled(self):
        """Entries as (p^level * slope, multiplicity)."""
        return tuple((s * self.scale, m) for s, m in self.entries)

    def slope_sum(self) -> Fraction:
        return sum((s * m for s, m in self.entries), Fraction(0))

    def is_symmetric(self) -> bool:
        """Invariance of the multiset under s -> 1 - s."""
        forward = dict(self.entries)
        return all(forward.get(1 - s) == m for s, m in self.entries)


def ell_alpha(seq: SlopeSeq, alpha) -> int:
    """Multiplicity of alpha / p^level in the sequence (0 when absent)."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return seq.multiplicity(alpha / seq.scale)


def d_alpha(t: TowerSpec, n: int, alpha, *, budget=DEFAULT_BUDGET, jobs=1, cache=None) -> int:
    """Multiplicity of alpha / p^n in the level-n zeta slope multiset.

    Aggregates the per-level L-slope multiplicities of the same slope value
    with weights (p-1)p^(j-1) and cross-checks against the assembled zeta
    multiset.
    """
    from . import lfun  # local import: lfun builds on SlopeSeq

    alpha = Fraction(alpha)
    value = alpha / t.p**n
    acc = 0
    per_level = []
    for j in range(1, n + 1):
        lp = lfun.l_polynomial(t, j, budget=budget, jobs=jobs, cache=cache)
        seq = lfun.q_slopes(lp)
        per_level.append(seq)
        acc += (t.p - 1) * t.p ** (j - 1) * seq.multiplicity(value)
    direct = lfun.zeta_slopes(t, n, budget=budget, jobs=jobs, cache=cache)
    assert acc == direct.slopes.multiplicity(value), "level aggregation disagrees with zeta multiset"
    return acc


def predict_stable_slopes(base: SlopeSeq, n: int, d, p: int) -> SlopeSeq:
    """Level-n slope multiset generated from a base level by progressions.

    For base level k the prediction is the union over i < p^(n-k) of
    {i/p^(n-k)} and {(alpha + i)/p^(n-k) : alpha in base}, minus one copy
    of 0 (the i = 0 block contributes the single removed zero).
    """
    d = Fraction(d)
    k = base.level
    if n < k:
        raise ValueError("target level below base level")
    expected_base = d * p ** (k - 1) - 1
    if base.total() != expected_base:
        raise ValueError(
            f"base has {base.total()} slopes, stable degree needs {expected_base}"
        )
    span = p ** (n - k)
    counter = Counter()
    for i in range(span):
        counter[Fraction(i, span)] += 1
        for s, m in base.entries:
            counter[(s + i) / span] += m
    counter[Fraction(0)] -= 1
    if counter[Fraction(0)] == 0:
        del counter[Fraction(0)]
    out = SlopeSeq(p, n, tuple(sorted(counter.items())))
    assert out.total() == d * p ** (n - 1) - 1
    return out


@dataclass(frozen=True)
class StabilityReport:
    n0: int | None  # None: not found up to the scanned level
    base_slopes: SlopeSeq | None
    verified_levels: tuple
    dwx_bound: int | None  # unit-root towers only
    levels_computed: int


def ceil_log_p(x: Fraction, p: int) -> int:
    """Least c with p^c >= x, for rational x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("argument must be positive")
    c = 0
    v = Fraction(1)
    while v < x:
        v *= p
        c += 1
    while v / p >= x:
        v /= p
        c -= 1
    return c


def dwx_n0_bound(t: TowerSpec) -> int | None:
    """Explicit stability-level bound for unit-root towers (else None).

    1 + ceil(log_p(d/8 * log_p q)), clamped to the trivial lower bound 1.
    """
    if not t.is_unit_root:
        return None
    d = slope_scale_d(t)
    return max(1, 1 + ceil_log_p(Fraction(d) * t.a / 8, t.p))


def detect_n0(
    t: TowerSpec,
    n_max: int,
    *,
    budget=DEFAULT_BUDGET,
    jobs=1,
    cache=None,
) -> StabilityReport:
    """Least base level whose prediction matches all computed levels above.

    Matching is required at every level up to n_max, not just one step.
    """
    from . import lfun

    d = slope_scale_d(t)
    computed = {}
    for n in range(1, n_max + 1):
        lp = lfun.l_polynomial(t, n, budget=budget, jobs=jobs, cache=cache)
        computed[n] = lfun.q_slopes(lp)
    bound = dwx_n0_bound(t)
    for k in range(1, n_max + 1):
        if l_degree(t, k) != d * t.p ** (k - 1) - 1:
            continue
        ok = True
        for n in range(k + 1, n_max + 1):
            if predict_stable_slopes(computed[k], n, d, t.p) != computed[n]:
                ok = False
                break
        if ok:
            return StabilityReport(
                n0=k,
                base_slopes=computed[k],
                verified_levels=tuple(range(k + 1, n_max + 1)),
                dwx_bound=bound,
                levels_computed=n_max,
            )
    return StabilityReport(None, None, (), bound, n_max)


def equidistribution_stats(seq: SlopeSeq, bins: int = 10):
    """Exact Kolmogorov-Smirnov distance to uniform on [0,1], plus a histogram."""
    atoms = seq.expand()
    if not atoms:
        raise ValueError("empty slope sequence")
    m = len(atoms)
    ks = Fraction(0)
    for idx, s in enumerate(atoms):
        ks = max(ks, abs(Fraction(idx + 1, m) - s), abs(Fraction(idx, m) - s))
    hist = [0] * bins
    for s in atoms:
        hist[min(int(s * bins), bins - 1)] += 1
    return ks, hist


def ramification_lower_bound(seq: SlopeSeq, a: int = 1) -> int:
    """lcm of the reduced denominators of the p-adic root valuations a*slope.

    A root of valuation with reduced denominator m forces ramification
    index divisible by m in the splitting field.
    """
    out = 1
    for s, _ in seq.entries:
        den = (s * a).denominator
        out = out * den // gcd(out, den)
    return out


# --- closed-form slope predictions used by the example towers -------------

def uniform_grid_slopes(d: int, p: int, n: int) -> SlopeSeq:
    """{i / (d p^(n-1))}: the level-n slopes of degree-d unit-root towers
    with p = 1 mod d."""
    den = d * p ** (n - 1)
    return SlopeSeq.from_multiset(p, n, (Fraction(i, den) for i in range(1, den)))


def power_plus_linear_level1_slopes(d: int, p: int) -> SlopeSeq:
    """Level-1 slopes of the tower of x^d + a*x for large p.

    alpha_i = i/d + (d-1)/(d(p-1)) * (i*p - floor(i*p/d)*d - i), i < d.
    """
    out = []
    for i in range(1, d):
        corr = i * p - (i * p // d) * d - i
        out.append(Fraction(i, d) + Fraction(d - 1, d * (p - 1)) * corr)
    return SlopeSeq.from_multiset(p, 1, out)
