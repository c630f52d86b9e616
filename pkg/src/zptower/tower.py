"""Tower descriptions and their closed-form numerology.

A tower over the affine line is cut out by a primitive polynomial
f(x) = sum c_i x^i with exponents prime to p and coefficients in the Witt
ring of F_q, each either an exact Teichmuller lift of a field element or a
ring element at stated p-power precision.  Conductor, L-degree, the slope
scale d, genus, and the quadratic genus fit are all evaluated here without
touching any character sum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionError, TowerSpecError
from .ff import FFElt, FieldDesc, GRElt, is_prime, make_field


@dataclass(frozen=True)
class TowerCoeff:
    i: int
    kind: str  # "teichmuller" | "ring"
    value: tuple  # length-a coordinate vector
    precision: int | None = None  # ring kind only


@dataclass(frozen=True)
class TowerSpec:
    p: int
    a: int
    base_modulus: tuple  # modulus of the coefficient field F_q
    coeffs: tuple  # TowerCoeff, sorted by exponent
    label: str

    @property
    def q(self) -> int:
        return self.p**self.a

    @property
    def base_field(self) -> FieldDesc:
        return make_field(self.p, self.a, 1)

    @property
    def degree_of_f(self) -> int:
        return self.coeffs[-1].i

    @property
    def is_unit_root(self) -> bool:
        return all(c.kind == "teichmuller" for c in self.coeffs)

    def coeff_field_elt(self, c: TowerCoeff) -> FFElt:
        return FFElt(self.base_field, c.value)

    def coeff_ring_elt(self, c: TowerCoeff) -> GRElt:
        return GRElt(self.base_field, c.precision, c.value)

    def __repr__(self):
        return f"TowerSpec({self.label!r}, p={self.p}, a={self.a})"


def _int_vp(x: int, p: int, cap: int) -> int:
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def coeff_vp(t: TowerSpec, c: TowerCoeff) -> int:
    """Exact p-adic valuation of a coefficient (< precision by construction)."""
    if c.kind == "teichmuller":
        return 0
    return min(_int_vp(x, t.p, c.precision) if x else c.precision for x in c.value)


def make_tower(p: int, coeffs, a: int = 1, label: str = "", modulus=None) -> TowerSpec:
    """Validated tower from {exponent: coefficient} data.

    Coefficient values: an int or length-a list means a Teichmuller-tagged
    element of F_q; a tuple ("ring", value, precision) means a ring lift
    known mod p^precision.
    """
    if not is_prime(p):
        raise TowerSpecError(f"p = {p} is not prime")
    if p == 2:
        raise TowerSpecError("towers require p > 2")
    if a < 1:
        raise TowerSpecError("a must be >= 1")
    base = make_field(p, a, 1)
    if modulus is not None and tuple(modulus) != base.modulus:
        raise TowerSpecError(
            f"modulus {list(modulus)} is not the canonical modulus {list(base.modulus)}"
        )
    if not coeffs:
        raise TowerSpecError("f must have at least one term")
    out = []
    for i in sorted(coeffs):
        val = coeffs[i]
        if i < 1:
            raise TowerSpecError(f"exponent {i} must be positive")
        if i % p == 0:
            raise TowerSpecError(f"exponent {i} is divisible by p")
        if isinstance(val, tuple) and len(val) == 3 and val[0] == "ring":
            _, raw, prec = val
            raw = (raw,) if isinstance(raw, int) else tuple(raw)
            if len(raw) != a:
                raise TowerSpecError(f"coefficient of x^{i} needs {a} coordinates")
            if prec < 1:
                raise TowerSpecError("ring coefficient precision must be >= 1")
            pe = p**prec
            vec = tuple(x % pe for x in raw)
            if all(x == 0 for x in vec):
                raise TowerSpecError(
                    f"coefficient of x^{i} vanishes at stated precision; drop it or raise precision"
                )
            out.append(TowerCoeff(i, "ring", vec, prec))
        else:
            raw = (val,) + (0,) * (a - 1) if isinstance(val, int) else tuple(val)
            if len(raw) != a:
                raise TowerSpecError(f"coefficient of x^{i} needs {a} coordinates")
            vec = tuple(x % p for x in raw)
            if all(x == 0 for x in vec):
                raise TowerSpecError(f"Teichmuller coefficient of x^{i} is zero")
            out.append(TowerCoeff(i, "teichmuller", vec))
    t = TowerSpec(p, a, base.modulus, tuple(out), label or _default_label(p, out))
    if all(coeff_vp(t, c) > 0 for c in t.coeffs):
        raise TowerSpecError("f is divisible by p (not primitive)")
    return t


def _default_label(p, coeffs):
    return "f_" + "_".join(f"{c.i}" for c in coeffs) + f"_p{p}"


def require_level(t: TowerSpec, n: int):
    """Operations at level n need every ring coefficient mod p^n."""
    if n < 1:
        raise ValueError("level must be >= 1")
    for c in t.coeffs:
        if c.kind == "ring" and c.precision < n:
            raise PrecisionError(
                f"coefficient of x^{c.i} known mod p^{c.precision}, level {n} needs p^{n}"
            )


# ---------------------------------------------------------------------------
# closed-form numerology
# ---------------------------------------------------------------------------

def conductor(t: TowerSpec, n: int) -> int:
    """Conductor at the ramified point: 1 + max over v_p(c_i) < n of i*p^(n-1-v_p(c_i))."""
    require_level(t, n)
    cands = [
        c.i * t.p ** (n - 1 - v)
        for c in t.coeffs
        if (v := coeff_vp(t, c)) < n
    ]
    if not cands:
        raise TowerSpecError("no coefficient is a unit below level precision")
    return 1 + max(cands)


def l_degree(t: TowerSpec, n: int) -> int:
    """Degree of the level-n L-polynomial; always conductor - 2."""
    require_level(t, n)
    best = max(
        Fraction(c.i, t.p**v)
        for c in t.coeffs
        if (v := coeff_vp(t, c)) < n
    )
    val = t.p ** (n - 1) * best - 1
    assert val.denominator == 1
    deg = int(val)
    assert deg == conductor(t, n) - 2, "conductor and degree formulas disagree"
    return deg


def slope_scale_d(t: TowerSpec) -> Fraction:
    """d = max_i i / p^(v_p(c_i)); finite for every polynomial tower."""
    return max(Fraction(c.i, t.p ** coeff_vp(t, c)) for c in t.coeffs)


def stable_degree_level(t: TowerSpec) -> int:
    """Least n with l_degree(n) = d*p^(n-1) - 1 (one past the maximizing valuation)."""
    d = slope_scale_d(t)
    n = 1
    while True:
        if t.p ** (n - 1) * d - 1 == l_degree(t, n):
            return n
        n += 1


def genus(t: TowerSpec, n: int) -> int:
    """Genus of the level-n curve from the degree sum; integrality asserted."""
    if n < 0:
        raise ValueError("level must be >= 0")
    total = sum(t.p ** (i - 1) * l_degree(t, i) for i in range(1, n + 1))
    g = Fraction(t.p - 1, 2) * total
    assert g.denominator == 1, "genus formula returned a non-integer"
    return int(g)


@dataclass(frozen=True)
class TowerNumerology:
    n: int
    conductor: int
    degree: int
    d: Fraction
    strongly_genus_stable: bool
    genus: int


def numerology(t: TowerSpec, n: int) -> TowerNumerology:
    return TowerNumerology(
        n=n,
        conductor=conductor(t, n),
        degree=l_degree(t, n),
        d=slope_scale_d(t),
        strongly_genus_stable=True,  # polynomial towers always are
        genus=genus(t, n),
    )


def genus_stable_fit(t: TowerSpec, n_lo: int, n_hi: int):
    """Fit g_n = a*p^(2n) + b*p^n + c through three consecutive levels.

    Solves on n_lo..n_lo+2 and verifies on the rest of the range; returns
    (a, b, c) as exact rationals, or None when some level disagrees.
    """
    if n_hi < n_lo + 2:
        raise ValueError("need at least three levels to fit")
    gs = {n: genus(t, n) for n in range(n_lo, n_hi + 1)}
    p = t.p
    mat = [[p ** (2 * n), p**n, 1] for n in (n_lo, n_lo + 1, n_lo + 2)]
    rhs = [gs[n] for n in (n_lo, n_lo + 1, n_lo + 2)]

    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    d0 = det3(mat)
    sol = []
    for col in range(3):
        m = [row[:] for row in mat]
        for r in range(3):
            m[r][col] = rhs[r]
        sol.append(Fraction(det3(m), d0))
    a, b, c = sol
    for n in range(n_lo, n_hi + 1):
        if a * p ** (2 * n) + b * p**n + c != gs[n]:
            return None
    return (a, b, c)


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------

_TOP_FIELDS = {"label", "p", "a", "modulus", "coeffs"}
_COEFF_FIELDS = {"i", "kind", "value", "precision"}


def tower_from_json(obj) -> TowerSpec:
    """Parse the tower spec-file object; unknown fields are rejected."""
    if not isinstance(obj, dict):
        raise TowerSpecError("tower spec must be a JSON object")
    unknown = set(obj) - _TOP_FIELDS
    if unknown:
        raise TowerSpecError(f"unknown fields {sorted(unknown)} in tower spec")
    for field in ("label", "p", "coeffs"):
        if field not in obj:
            raise TowerSpecError(f"missing field '{field}' in tower spec")
    p = obj["p"]
    a = obj.get("a", 1)
    if not isinstance(p, int) or not isinstance(a, int):
        raise TowerSpecError("'p' and 'a' must be integers")
    coeffs = {}
    if not isinstance(obj["coeffs"], list) or not obj["coeffs"]:
        raise TowerSpecError("'coeffs' must be a non-empty list")
    for entry in obj["coeffs"]:
        if not isinstance(entry, dict):
            raise TowerSpecError("coefficient entries must be objects")
        unknown = set(entry) - _COEFF_FIELDS
        if unknown:
            raise TowerSpecError(f"unknown fields {sorted(unknown)} in coefficient")
        for field in ("i", "kind", "value"):
            if field not in entry:
                raise TowerSpecError(f"coefficient missing field '{field}'")
        i, kind, value = entry["i"], entry["kind"], entry["value"]
        if not isinstance(value, list) or not all(isinstance(x, int) for x in value):
            raise TowerSpecError("coefficient 'value' must be a list of integers")
        if i in coeffs:
            raise TowerSpecError(f"duplicate exponent {i}")
        if kind == "teichmuller":
            if "precision" in entry:
                raise TowerSpecError("'precision' is only for ring coefficients")
            coeffs[i] = list(value)
        elif kind == "ring":
            if "precision" not in entry or not isinstance(entry["precision"], int):
                raise TowerSpecError("ring coefficient needs integer 'precision'")
            coeffs[i] = ("ring", list(value), entry["precision"])
        else:
            raise TowerSpecError(f"unknown coefficient kind {kind!r}")
    return make_tower(
        p, coeffs, a=a, label=obj["label"], modulus=obj.get("modulus")
    )


def tower_from_file(path) -> TowerSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TowerSpecError(f"invalid JSON in {path}: {exc}") from exc
    return tower_from_json(obj)


def tower_to_json(t: TowerSpec) -> dict:
    coeffs = []
    for c in t.coeffs:
        entry = {"i": c.i, "kind": c.kind, "value": list(c.value)}
        if c.kind == "ring":
            entry["precision"] = c.precision
        coeffs.append(entry)
    return {
        "label": t.label,
        "p": t.p,
        "a": t.a,
        "modulus": list(t.base_modulus),
        "coeffs": coeffs,
    }
