"""Character-exponent histograms over F_{q^k}, the hot path of every sum.

For each field element x the exponent is Tr(sum_i c_i tau(x)^i) mod p^prec.
The kernel never sees Teichmuller lifts per element: nonzero elements are
walked as powers of a fixed generator g, each support term keeps the running
ring element (w^i)^j with w = tau(g), and the trace is a per-term linear
functional.  A compiled extension does the walking when importable; the
pure-Python backend is selected otherwise (ZPTOWER_PURE=1 forces it).
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from . import _kernel_py
from .errors import PrecisionError
from .ff import (
    DEFAULT_BUDGET,
    FieldDesc,
    _poly_mulmod,
    _poly_powmod,
    _trace_vector,
    check_budget,
    embed_field,
    gr_embed,
    make_field,
    multiplicative_generator,
    teichmuller_lift,
)
from .tower import TowerSpec

if os.environ.get("ZPTOWER_PURE") == "1":
    _kernel_c = None
else:
    try:
        from . import _kernel as _kernel_c
    except ImportError:
        _kernel_c = None

#: largest modulus for which a dense count array is used
DENSE_LIMIT = 1 << 22
#: per-call cap on the exponent buffer in sparse mode
STREAM_CHUNK = 1 << 20
#: compiled kernel works on int64; beyond this modulus fall back to Python
C_PE_LIMIT = 3_000_000_000


def backend_name() -> str:
    return "compiled" if _kernel_c is not None else "pure"


@lru_cache(maxsize=None)
def ring_coefficients(t: TowerSpec, desc: FieldDesc, prec: int):
    """The tower coefficients embedded into the precision-prec lift of F_{q^k}."""
    out = []
    for c in t.coeffs:
        if c.kind == "teichmuller":
            elt = teichmuller_lift(embed_field(t.coeff_field_elt(c), desc), prec)
        else:
            if c.precision < prec:
                raise PrecisionError(
                    f"coefficient of x^{c.i} known mod p^{c.precision}, "
                    f"request needs p^{prec}"
                )
            elt = gr_embed(t.coeff_ring_elt(c), desc, prec)
        out.append((c.i, elt))
    return tuple(out)


@dataclass(frozen=True)
class SumPlan:
    desc: FieldDesc
    prec: int
    pe: int
    mod: tuple  # full monic modulus lift
    steps: tuple  # per support term: coords of w^i
    tracevecs: tuple  # per support term: t -> Tr(c_i * X^t)


def build_plan(t: TowerSpec, k: int, prec: int) -> SumPlan:
    desc = make_field(t.p, t.a, k)
    pe = t.p**prec
    m = desc.degree
    coeffs = ring_coefficients(t, desc, prec)
    tvec = _trace_vector(desc, prec)
    mod = tuple(desc.modulus)
    tracevecs = []
    for _, c in coeffs:
        cur = c.coords
        row = []
        for _ in range(m):
            row.append(sum(a * b for a, b in zip(cur, tvec)) % pe)
            # multiply by the basis generator X: shift then reduce
            lead = cur[m - 1]
            shifted = [0] + list(cur[: m - 1])
            if lead:
                for j in range(m):
                    shifted[j] -= lead * mod[j]
            cur = tuple(x % pe for x in shifted)
        tracevecs.append(tuple(row))
    g = multiplicative_generator(desc)
    w = teichmuller_lift(g, prec)
    steps = tuple(
        _poly_powmod(w.coords, i, mod, pe) for i, _ in coeffs
    )
    return SumPlan(desc, prec, pe, mod, steps, tuple(tracevecs))


def _select_backend(pe: int):
    if _kernel_c is not None and pe <= C_PE_LIMIT:
        return _kernel_c
    return _kernel_py


def _run_chunk(plan: SumPlan, start: int, length: int, dense: bool):
    backend = _select_backend(plan.pe)
    inits = [
        _poly_powmod(s, start, plan.mod, plan.pe) if start else
        tuple([1] + [0] * (plan.desc.degree - 1))
        for s in plan.steps
    ]
    if dense:
        counts = [0] * plan.pe
        backend.hist_dense(plan.mod, plan.pe, plan.steps, inits, plan.tracevecs, length, counts)
        return counts
    out = Counter()
    done = 0
    while done < length:
        step = min(STREAM_CHUNK, length - done)
        if done:
            inits = [
                _poly_powmod(s, start + done, plan.mod, plan.pe) for s in plan.steps
            ]
        exps = backend.exponent_stream(plan.mod, plan.pe, plan.steps, inits, plan.tracevecs, step)
        out.update(exps)
        done += step
    return out


def exponent_counts(
    t: TowerSpec,
    k: int,
    prec: int,
    *,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> dict:
    """Histogram {exponent mod p^prec: count} over all of F_{q^k}."""
    desc = make_field(t.p, t.a, k)
    check_budget(desc, budget)
    plan = build_plan(t, k, prec)
    total = desc.order - 1  # nonzero elements; x = 0 contributes exponent 0
    dense = plan.pe <= DENSE_LIMIT
    jobs = max(1, jobs)
    if jobs == 1 or total < 4 * jobs:
        parts = [_run_chunk(plan, 0, total, dense)]
    else:
        bounds = [total * i // (jobs * 4) for i in range(jobs * 4 + 1)]
        tasks = [
            (lo, hi - lo) for lo, hi in zip(bounds, bounds[1:]) if hi > lo
        ]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(lambda args: _run_chunk(plan, args[0], args[1], dense), tasks)
            )
    counts = Counter()
    for part in parts:
        if dense:
            counts.update({e: c for e, c in enumerate(part) if c})
        else:
            counts.update(part)
    counts[0] += 1  # the zero element: f(0) = 0
    assert sum(counts.values()) == desc.order
    return dict(counts)


def reduce_counts(counts: dict, p: int, from_prec: int, to_prec: int) -> dict:
    """Push a histogram down to a smaller p-power modulus."""
    if to_prec > from_prec:
        raise PrecisionError("cannot raise histogram precision")
    pe = p**to_prec
    out = Counter()
    for e, c in counts.items():
        out[e % pe] += c
    return dict(out)


class HistogramCache:
    """Per-run cache of exponent histograms, keyed by (tower, k).

    Stores the highest precision computed so far for each k and answers
    lower-precision requests by reduction.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET, jobs: int = 1):
        self.budget = budget
        self.jobs = jobs
        self._store = {}

    def counts(self, t: TowerSpec, k: int, prec: int) -> dict:
        key = (t, k)
        hit = self._store.get(key)
        if hit is not None and hit[0] >= prec:
            stored_prec, stored = hit
            if stored_prec == prec:
                return stored
            return reduce_counts(stored, t.p, stored_prec, prec)
        fresh = exponent_counts(t, k, prec, budget=self.budget, jobs=self.jobs)
        self._store[key] = (prec, fresh)
        return fresh
