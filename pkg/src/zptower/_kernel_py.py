"""Pure-Python character-sum kernel, the fallback for the compiled core.

Walks the nonzero field elements multiplicatively: each state vector holds
(w^i)^j for one support exponent i, where w is the Teichmuller lift of a
fixed generator, and the character exponent of the j-th element is the sum
of trace functionals applied to the states.  Arbitrary-precision integers,
so there is no modulus-size limit here.
"""

from __future__ import annotations

from .ff import _poly_mulmod

BACKEND = "pure"


def hist_dense(mod, pe, steps, inits, tracevecs, length, counts):
    """Tally `length` exponents into the dense `counts` list (len pe)."""
    ys = [tuple(y) for y in inits]
    last = length - 1
    for j in range(length):
        f = 0
        for y, tv in zip(ys, tracevecs):
            f += sum(a * b for a, b in zip(y, tv))
        counts[f % pe] += 1
        if j != last:
            ys = [_poly_mulmod(y, s, mod, pe) for y, s in zip(ys, steps)]


def exponent_stream(mod, pe, steps, inits, tracevecs, length):
    """Return the `length` exponents as a list (sparse-histogram mode)."""
    ys = [tuple(y) for y in inits]
    out = []
    last = length - 1
    for j in range(length):
        f = 0
        for y, tv in zip(ys, tracevecs):
            f += sum(a * b for a, b in zip(y, tv))
        out.append(f % pe)
        if j != last:
            ys = [_poly_mulmod(y, s, mod, pe) for y, s in zip(ys, steps)]
    return out
