"""Exact truncated-series arithmetic over unbounded rationals.

Three carriers are provided:

* QSeries: a Laurent series in q with exponents on a fractional lattice
  n/d (d the "exponent denominator").  A series is *trusted below* its
  truncation T, meaning every coefficient of q^{n/d} with n < T is known
  exactly and absent keys are exact zeros; nothing is claimed at or
  above T.
* ZetaSeries: a bivariate series, finite Laurent support in zeta with
  QSeries coefficients, plus a global unit flag i^u so that objects like
  the odd theta series keep rational stored coefficients.
* XSeries: a Laurent series in x (the scaled elliptic variable 2*pi*i*z)
  whose coefficients are QSeries.

PiPolynomial holds exact polynomials in 1/pi.

All objects are immutable by convention: no operation mutates its
arguments, and callers must not modify returned objects (constructors
are cached upstream).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Tuple

import mpmath


class NonInvertibleError(ValueError):
    """Raised when a series has no leading invertible coefficient."""


# ---------------------------------------------------------------------------
# QSeries


class QSeries:
    """Truncated series sum_{n < trunc} c_n q^{n/exp_denom}, c_n rational.

    Keys of ``coeffs`` are the integers n; values are nonzero Fractions.
    ``trunc`` is exclusive: exponents n/d with n >= trunc are unknown.
    """

    __slots__ = ("exp_denom", "coeffs", "trunc")

    def __init__(self, exp_denom: int, coeffs: Dict[int, Fraction], trunc: int):
        if exp_denom <= 0:
            raise ValueError("exp_denom must be positive")
        self.exp_denom = exp_denom
        # keep only nonzero coefficients strictly below the truncation
        self.coeffs = {
            n: Fraction(c) for n, c in coeffs.items() if n < trunc and c != 0
        }
        self.trunc = trunc

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(exp_denom: int = 1, trunc: int = 0) -> QSeries:
        return QSeries(exp_denom, {}, trunc)

    @staticmethod
    def one(exp_denom: int = 1, trunc: int = 1) -> QSeries:
        return QSeries(exp_denom, {0: Fraction(1)}, trunc)

    @staticmethod
    def monomial(coeff, num: int, exp_denom: int = 1, trunc: Optional[int] = None) -> QSeries:
        """coeff * q^{num/exp_denom}, trusted below trunc (default num+1)."""
        if trunc is None:
            trunc = num + 1
        return QSeries(exp_denom, {num: Fraction(coeff)}, trunc)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation_key(self) -> int:
        """Lowest stored exponent key; trunc for an (identically) zero series."""
        return min(self.coeffs) if self.coeffs else self.trunc

    def coefficient(self, exponent) -> Fraction:
        """Exact coefficient of q^exponent; exponent below truncation required."""
        ex = Fraction(exponent)
        num = ex * self.exp_denom
        if num.denominator != 1:
            return Fraction(0)
        n = int(num)
        if n >= self.trunc:
            raise ValueError("exponent %s at or beyond truncation" % ex)
        return self.coeffs.get(n, Fraction(0))

    def q_order(self) -> Fraction:
        """Truncation as a q-exponent."""
        return Fraction(self.trunc, self.exp_denom)

    def items_sorted(self) -> List[Tuple[int, Fraction]]:
        return sorted(self.coeffs.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = _common_lattice(self, other)
        return a.trunc == b.trunc and a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.exp_denom, self.trunc, tuple(self.items_sorted())))

    def __repr__(self) -> str:
        head = ", ".join(
            "%s q^%s" % (c, Fraction(n, self.exp_denom))
            for n, c in self.items_sorted()[:6]
        )
        if len(self.coeffs) > 6:
            head += ", ..."
        return "QSeries(%s + O(q^%s))" % (head or "0", self.q_order())

    # -- arithmetic (operator sugar; the qs_* functions are the contract) ---

    def __add__(self, other: QSeries) -> QSeries:
        return qs_add(self, other)

    def __sub__(self, other: QSeries) -> QSeries:
        return qs_add(self, qs_scale(other, -1))

    def __mul__(self, other: QSeries) -> QSeries:
        return qs_mul(self, other)

    def __neg__(self) -> QSeries:
        return qs_scale(self, -1)

    def truncated(self, trunc: int) -> QSeries:
        """Forget coefficients at or above the (not larger) truncation."""
        if trunc > self.trunc:
            raise ValueError("cannot extend truncation from %d to %d" % (self.trunc, trunc))
        return QSeries(self.exp_denom, self.coeffs, trunc)

    def on_lattice(self, exp_denom: int) -> QSeries:
        """Re-express on a finer lattice; exp_denom must be a multiple."""
        if exp_denom == self.exp_denom:
            return self
        if exp_denom % self.exp_denom:
            raise ValueError("lattice %d does not refine %d" % (exp_denom, self.exp_denom))
        f = exp_denom // self.exp_denom
        return QSeries(exp_denom, {n * f: c for n, c in self.coeffs.items()}, self.trunc * f)


def _common_lattice(a: QSeries, b: QSeries) -> Tuple[QSeries, QSeries]:
    d = lcm(a.exp_denom, b.exp_denom)
    return a.on_lattice(d), b.on_lattice(d)


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    """Coefficientwise sum; truncation is the intersection of trust."""
    a, b = _common_lattice(a, b)
    trunc = min(a.trunc, b.trunc)
    out = dict(a.coeffs)
    for n, c in b.coeffs.items():
        s = out.get(n, Fraction(0)) + c
        if s:
            out[n] = s
        else:
            out.pop(n, None)
    return QSeries(a.exp_denom, out, trunc)


def qs_scale(a: QSeries, c) -> QSeries:
    """Multiply every coefficient by the rational scalar c."""
    c = Fraction(c)
    if c == 0:
        return QSeries(a.exp_denom, {}, a.trunc)
    return QSeries(a.exp_denom, {n: v * c for n, v in a.coeffs.items()}, a.trunc)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product.

    The product is trusted below min(Ta + val(b), Tb + val(a)): an unknown
    tail of one factor first pollutes the product at its truncation plus
    the other factor's lowest exponent.
    """
    a, b = _common_lattice(a, b)
    trunc = min(a.trunc + b.valuation_key(), b.trunc + a.valuation_key())
    if not a.coeffs or not b.coeffs:
        return QSeries(a.exp_denom, {}, trunc)
    if len(a.coeffs) < len(b.coeffs):
        a, b = b, a
    bitems = sorted(b.coeffs.items())
    out: Dict[int, Fraction] = {}
    for n1, c1 in a.coeffs.items():
        for n2, c2 in bitems:
            n = n1 + n2
            if n >= trunc:
                break
            s = out.get(n, 0) + c1 * c2
            if s:
                out[n] = s
            else:
                out.pop(n, None)
    return QSeries(a.exp_denom, out, trunc)


def qs_shift(a: QSeries, num: int) -> QSeries:
    """Multiply by q^{num/exp_denom} (num may be negative)."""
    return QSeries(a.exp_denom, {n + num: c for n, c in a.coeffs.items()}, a.trunc + num)


def qs_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse by long division.

    Result is trusted below Ta - 2*val(a): exactly Ta - val(a) coefficients
    of a are known, hence as many of the inverse, starting at -val(a).
    """
    if a.is_zero():
        raise NonInvertibleError("non-invertible series")
    val = a.valuation_key()
    lead = a.coeffs[val]
    n_known = a.trunc - val
    # unit part u_k := coefficient of q^{(val+k)/d}
    u = [Fraction(0)] * n_known
    for n, c in a.coeffs.items():
        u[n - val] = c
    inv_lead = 1 / lead
    b = [inv_lead]
    for k in range(1, n_known):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if u[j]:
                acc += u[j] * b[k - j]
        b.append(-inv_lead * acc)
    coeffs = {-val + k: c for k, c in enumerate(b) if c}
    return QSeries(a.exp_denom, coeffs, a.trunc - 2 * val)


def qs_pow(a: QSeries, m: int) -> QSeries:
    """a**m for integer m (negative via qs_inv)."""
    if m < 0:
        return qs_pow(qs_inv(a), -m)
    result = None
    base = a
    e = m
    while e:
        if e & 1:
            result = base if result is None else qs_mul(result, base)
        e >>= 1
        if e:
            base = qs_mul(base, base)
    if result is None:
        return QSeries(a.exp_denom, {0: Fraction(1)}, a.trunc)
    return result


def qs_scale_exponent(a: QSeries, c: int) -> QSeries:
    """Substitute q -> q^c (all exponents multiplied by the positive integer c)."""
    if c <= 0:
        raise ValueError("exponent scale must be a positive integer")
    return QSeries(a.exp_denom, {n * c: v for n, v in a.coeffs.items()}, a.trunc * c)


def qs_reduce_lattice(a: QSeries) -> QSeries:
    """Coarsest equivalent lattice (divide out the gcd of keys and denominator).

    The truncation is floored to the new lattice, which can only shrink the
    trusted range, never extend it.
    """
    g = a.exp_denom
    for n in a.coeffs:
        g = gcd(g, n)
        if g == 1:
            return a
    if g == 1:
        return a
    return QSeries(a.exp_denom // g, {n // g: c for n, c in a.coeffs.items()},
                   a.trunc // g)


def qs_first_mismatch(a: QSeries, b: QSeries) -> Optional[Fraction]:
    """Lowest exponent where a and b differ on the common trusted range.

    Returns None when they agree everywhere both are trusted.
    """
    a, b = _common_lattice(a, b)
    bound = min(a.trunc, b.trunc)
    keys = sorted(set(a.coeffs) | set(b.coeffs))
    for n in keys:
        if n >= bound:
            break
        if a.coeffs.get(n, 0) != b.coeffs.get(n, 0):
            return Fraction(n, a.exp_denom)
    return None


# ---------------------------------------------------------------------------
# JSON wire format


def _fraction_to_str(c: Fraction) -> str:
    return str(c)


def qs_to_json_obj(a: QSeries) -> dict:
    return {
        "exp_denom": a.exp_denom,
        "trunc": a.trunc,
        "terms": [[n, _fraction_to_str(c)] for n, c in a.items_sorted()],
    }


def qs_from_json_obj(obj: dict) -> QSeries:
    coeffs = {int(n): Fraction(s) for n, s in obj["terms"]}
    return QSeries(int(obj["exp_denom"]), coeffs, int(obj["trunc"]))


def qs_to_json(a: QSeries) -> str:
    return json.dumps(qs_to_json_obj(a))


def qs_from_json(text: str) -> QSeries:
    return qs_from_json_obj(json.loads(text))


# ---------------------------------------------------------------------------
# ZetaSeries


class ZetaSeries:
    """Finite zeta-Laurent series with QSeries coefficients.

    Value: i^unit_ipow * sum_r terms[r](q) * zeta^{r/zeta_denom}.  All
    component QSeries share one q-lattice and one truncation (q_trunc, in
    key units of that lattice).  The unit flag keeps stored coefficients
    rational for objects whose natural normalization carries a factor of
    +-i (the odd theta series).
    """

    __slots__ = ("zeta_denom", "exp_denom", "q_trunc", "terms", "unit_ipow")

    def __init__(self, zeta_denom: int, exp_denom: int, q_trunc: int,
                 terms: Dict[int, QSeries], unit_ipow: int = 0):
        if zeta_denom <= 0:
            raise ValueError("zeta_denom must be positive")
        self.zeta_denom = zeta_denom
        self.exp_denom = exp_denom
        self.q_trunc = q_trunc
        clean: Dict[int, QSeries] = {}
        for r, s in terms.items():
            s = s.on_lattice(exp_denom)
            if s.trunc != q_trunc:
                s = s.truncated(q_trunc) if s.trunc > q_trunc else _pad_error(s, q_trunc)
            if not s.is_zero():
                clean[r] = s
        self.terms = clean
        self.unit_ipow = unit_ipow % 4

    @staticmethod
    def one(zeta_denom: int = 1, exp_denom: int = 1, q_trunc: int = 1) -> ZetaSeries:
        return ZetaSeries(zeta_denom, exp_denom, q_trunc,
                          {0: QSeries.one(exp_denom, q_trunc)})

    def zeta_support(self) -> List[int]:
        return sorted(self.terms)

    def term(self, r: int) -> QSeries:
        """Raw stored coefficient of zeta^{r/zeta_denom} (unit flag not folded)."""
        return self.terms.get(r, QSeries.zero(self.exp_denom, self.q_trunc))

    def canonical(self) -> Tuple[int, Dict[int, QSeries]]:
        """(parity, folded terms): value = i^parity * sum folded[r] zeta^{r/e}."""
        sign = 1 if self.unit_ipow in (0, 1) else -1
        if sign == 1:
            return self.unit_ipow % 2, dict(self.terms)
        return self.unit_ipow % 2, {r: qs_scale(s, -1) for r, s in self.terms.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZetaSeries):
            return NotImplemented
        if self.zeta_denom != other.zeta_denom:
            return False
        pa, ta = self.canonical()
        pb, tb = other.canonical()
        return pa == pb and ta == tb

    def __repr__(self) -> str:
        return "ZetaSeries(e=%d, support=%s, q_trunc=%s, i^%d)" % (
            self.zeta_denom, self.zeta_support(), Fraction(self.q_trunc, self.exp_denom),
            self.unit_ipow)


def _pad_error(s: QSeries, q_trunc: int):
    raise ValueError(
        "component series trusted only below %d, need %d" % (s.trunc, q_trunc))


def zs_add(a: ZetaSeries, b: ZetaSeries) -> ZetaSeries:
    if a.zeta_denom != b.zeta_denom:
        raise ValueError("zeta lattices differ")
    pa, ta = a.canonical()
    pb, tb = b.canonical()
    if pa != pb:
        raise ValueError("cannot add series with different unit parity")
    d = lcm(a.exp_denom, b.exp_denom)
    q_trunc = min(a.q_trunc * (d // a.exp_denom), b.q_trunc * (d // b.exp_denom))
    out: Dict[int, QSeries] = {}
    for r in set(ta) | set(tb):
        s = qs_add(ta.get(r, QSeries.zero(d, q_trunc)), tb.get(r, QSeries.zero(d, q_trunc)))
        out[r] = s.truncated(q_trunc) if s.trunc > q_trunc else s
    return ZetaSeries(a.zeta_denom, d, q_trunc, out, pa)


def zs_scale(a: ZetaSeries, c) -> ZetaSeries:
    return ZetaSeries(a.zeta_denom, a.exp_denom, a.q_trunc,
                      {r: qs_scale(s, c) for r, s in a.terms.items()}, a.unit_ipow)


def zs_mul(a: ZetaSeries, b: ZetaSeries) -> ZetaSeries:
    """Bivariate product; q-truncations combine per component qs_mul rules."""
    if a.zeta_denom != b.zeta_denom:
        raise ValueError("zeta lattices differ")
    d = lcm(a.exp_denom, b.exp_denom)
    fa, fb = d // a.exp_denom, d // b.exp_denom
    val_a = min((s.on_lattice(d).valuation_key() for s in a.terms.values()),
                default=a.q_trunc * fa)
    val_b = min((s.on_lattice(d).valuation_key() for s in b.terms.values()),
                default=b.q_trunc * fb)
    q_trunc = min(a.q_trunc * fa + val_b, b.q_trunc * fb + val_a)
    acc: Dict[int, QSeries] = {}
    for r1, s1 in a.terms.items():
        for r2, s2 in b.terms.items():
            r = r1 + r2
            prod = qs_mul(s1, s2)
            prod = prod.truncated(min(prod.trunc, q_trunc))
            if r in acc:
                acc[r] = qs_add(acc[r], prod)
            else:
                acc[r] = prod
    out = {r: QSeries(d, s.on_lattice(d).coeffs, q_trunc) for r, s in acc.items()}
    return ZetaSeries(a.zeta_denom, d, q_trunc, out, a.unit_ipow + b.unit_ipow)


def zs_extract(a: ZetaSeries, r) -> QSeries:
    """QSeries coefficient of zeta^r, with the unit flag folded in.

    ``r`` is the actual zeta-exponent (integer or Fraction on the lattice).
    Only defined when the unit is +-1; an odd unit would make the folded
    coefficient imaginary.
    """
    rr = Fraction(r) * a.zeta_denom
    if rr.denominator != 1:
        raise ValueError("zeta exponent %s off the 1/%d lattice" % (r, a.zeta_denom))
    parity, terms = a.canonical()
    if parity:
        raise ValueError("unit flag i^%d is not rational" % a.unit_ipow)
    return terms.get(int(rr), QSeries.zero(a.exp_denom, a.q_trunc))


def zs_sub_zeta_shift(a: ZetaSeries, lam: int, sign: int) -> ZetaSeries:
    """Substitute zeta -> sign * zeta * q^lam.

    Each monomial zeta^s with s = r/zeta_denom picks up sign^s * q^{lam*s}.
    For sign = -1 and half-integral s the factor is i^r; that is only a
    global unit when every r in the support has the same parity, which is
    checked.  The common q-truncation is re-tightened so the result stays
    sound (negative s with lam > 0 lowers q-orders).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    e = a.zeta_denom
    d = a.exp_denom
    if any((lam * r * d) % e for r in a.terms):
        d = lcm(d, e)
    scale = d // a.exp_denom
    q_trunc = a.q_trunc * scale
    shifts = {r: (lam * r * d) // e for r in a.terms}
    if a.terms:
        q_trunc = min(a.q_trunc * scale + k for k in shifts.values())
    unit = a.unit_ipow
    signs: Dict[int, int] = {}
    if sign == 1:
        for r in a.terms:
            signs[r] = 1
    else:
        parities = {r % 2 for r in a.terms}
        if len(parities) > 1:
            raise ValueError("mixed zeta parity: sign shift is not a global unit")
        if parities == {0}:
            for r in a.terms:
                signs[r] = -1 if (r // e) % 2 else 1
                if (r % e) != 0:
                    raise ValueError("zeta exponent %d/%d not integral under sign shift" % (r, e))
        else:
            # all r odd: (-1)^{r/e} with e = 2 is i^r = i * (-1)^{(r-1)/2}
            if e != 2:
                raise ValueError("half-integral sign shift requires zeta_denom 2")
            unit += 1
            for r in a.terms:
                signs[r] = -1 if ((r - 1) // 2) % 2 else 1
    out: Dict[int, QSeries] = {}
    for r, s in a.terms.items():
        s = s.on_lattice(d)
        s = qs_shift(s, shifts[r])
        s = qs_scale(s, signs[r])
        out[r] = QSeries(d, s.coeffs, q_trunc) if s.trunc >= q_trunc else _pad_error(s, q_trunc)
    return ZetaSeries(e, d, q_trunc, out, unit)


def zs_first_mismatch(a: ZetaSeries, b: ZetaSeries) -> Optional[Tuple[Fraction, Fraction]]:
    """(zeta_exp, q_exp) of the first disagreement, or None.

    Comparison runs over the union support, on the common trusted q-range,
    after folding unit flags to canonical form.
    """
    if a.zeta_denom != b.zeta_denom:
        raise ValueError("zeta lattices differ")
    pa, ta = a.canonical()
    pb, tb = b.canonical()
    if pa != pb:
        return (Fraction(0), Fraction(0))
    d = lcm(a.exp_denom, b.exp_denom)
    bound = min(a.q_trunc * (d // a.exp_denom), b.q_trunc * (d // b.exp_denom))
    for r in sorted(set(ta) | set(tb)):
        x = ta.get(r, QSeries.zero(d, bound)).on_lattice(d).truncated(bound)
        y = tb.get(r, QSeries.zero(d, bound)).on_lattice(d).truncated(bound)
        mis = qs_first_mismatch(x, y)
        if mis is not None:
            return (Fraction(r, a.zeta_denom), mis)
    return None


def zs_to_json_obj(a: ZetaSeries) -> dict:
    parity, terms = a.canonical()
    if parity:
        raise ValueError("cannot serialize a series with unit flag i^%d" % a.unit_ipow)
    return {
        "exp_denom": a.exp_denom,
        "zeta_denom": a.zeta_denom,
        "trunc": a.q_trunc,
        "terms": [[r, qs_to_json_obj(terms[r])] for r in sorted(terms)],
    }


def zs_from_json_obj(obj: dict) -> ZetaSeries:
    terms = {int(r): qs_from_json_obj(t) for r, t in obj["terms"]}
    return ZetaSeries(int(obj["zeta_denom"]), int(obj["exp_denom"]),
                      int(obj["trunc"]), terms)


# ---------------------------------------------------------------------------
# XSeries


class XSeries:
    """Laurent series sum_{n=lo}^{x_trunc-1} coeffs[n-lo](q) x^n.

    All coefficients share one q-lattice and q-truncation.  x_trunc is
    exclusive; powers at or above it are unknown.
    """

    __slots__ = ("lo", "coeffs", "x_trunc", "exp_denom", "q_trunc")

    def __init__(self, lo: int, coeffs: List[QSeries], x_trunc: int):
        if x_trunc - lo != len(coeffs):
            raise ValueError("coefficient count %d does not span [%d, %d)"
                             % (len(coeffs), lo, x_trunc))
        if not coeffs:
            raise ValueError("XSeries needs at least one tracked power")
        d = 1
        for s in coeffs:
            d = lcm(d, s.exp_denom)
        qt = min(s.trunc * (d // s.exp_denom) for s in coeffs)
        self.lo = lo
        self.x_trunc = x_trunc
        self.exp_denom = d
        self.q_trunc = qt
        self.coeffs = [s.on_lattice(d).truncated(qt) for s in coeffs]

    def coefficient(self, n: int) -> QSeries:
        """QSeries coefficient of x^n; n must be below x_trunc."""
        if n >= self.x_trunc:
            raise ValueError("x power %d at or beyond truncation %d" % (n, self.x_trunc))
        if n < self.lo:
            return QSeries.zero(self.exp_denom, self.q_trunc)
        return self.coeffs[n - self.lo]

    def normalized(self) -> XSeries:
        """Strip leading identically-zero coefficients (raise lo)."""
        lo = self.lo
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[0].is_zero():
            coeffs.pop(0)
            lo += 1
        return XSeries(lo, coeffs, self.x_trunc)

    def __repr__(self) -> str:
        return "XSeries(x^%d .. x^%d, q_trunc=%s)" % (
            self.lo, self.x_trunc - 1, Fraction(self.q_trunc, self.exp_denom))


def xs_add(a: XSeries, b: XSeries) -> XSeries:
    lo = min(a.lo, b.lo)
    hi = min(a.x_trunc, b.x_trunc)
    if hi <= lo:
        raise ValueError("sum has empty tracked range")
    coeffs = [qs_add(a.coefficient(n), b.coefficient(n)) for n in range(lo, hi)]
    return XSeries(lo, coeffs, hi)


def xs_scale(a: XSeries, c) -> XSeries:
    return XSeries(a.lo, [qs_scale(s, c) for s in a.coeffs], a.x_trunc)


def xs_scale_qs(a: XSeries, s: QSeries) -> XSeries:
    return XSeries(a.lo, [qs_mul(t, s) for t in a.coeffs], a.x_trunc)


def xs_shift_pole(a: XSeries, k: int) -> XSeries:
    """Multiply by x^k (k may be negative)."""
    return XSeries(a.lo + k, list(a.coeffs), a.x_trunc + k)


def xs_mul(a: XSeries, b: XSeries) -> XSeries:
    # stored lo is taken at face value for truncation bookkeeping; a
    # stored-zero leading coefficient only makes the result conservative
    lo = a.lo + b.lo
    hi = min(a.x_trunc + b.lo, b.x_trunc + a.lo)
    if hi <= lo:
        raise ValueError("product has empty tracked range")
    coeffs = [QSeries.zero(lcm(a.exp_denom, b.exp_denom),
                           min(a.q_trunc, b.q_trunc)) for _ in range(lo, hi)]
    for i, sa in enumerate(a.coeffs):
        if sa.is_zero():
            continue
        for j, sb in enumerate(b.coeffs):
            n = a.lo + i + b.lo + j
            if n >= hi:
                break
            if sb.is_zero():
                continue
            coeffs[n - lo] = qs_add(coeffs[n - lo], qs_mul(sa, sb))
    return XSeries(lo, coeffs, hi)


def xs_inv(a: XSeries) -> XSeries:
    """Inverse of a Laurent series whose leading q-coefficient is invertible.

    With N = x_trunc - lo known coefficients, the inverse has N known
    coefficients starting at x^{-lo}.  q-truncations degrade per the
    underlying qs_mul and qs_inv rules.  Stored-zero leading coefficients
    are treated as exact zeros (constructors set lo at the true valuation).
    """
    a = a.normalized()
    if a.coeffs[0].is_zero():
        raise NonInvertibleError("non-invertible series")
    n_known = a.x_trunc - a.lo
    lead_inv = qs_inv(a.coeffs[0])
    out = [lead_inv]
    for k in range(1, n_known):
        acc = None
        for j in range(1, k + 1):
            if a.coeffs[j].is_zero():
                continue
            t = qs_mul(a.coeffs[j], out[k - j])
            acc = t if acc is None else qs_add(acc, t)
        if acc is None:
            term = QSeries.zero(lead_inv.exp_denom, lead_inv.trunc)
        else:
            term = qs_scale(qs_mul(lead_inv, acc), -1)
        out.append(term)
    return XSeries(-a.lo, out, -a.lo + n_known)


def xs_pow(a: XSeries, m: int) -> XSeries:
    if m <= 0:
        raise ValueError("xs_pow expects a positive exponent")
    result = None
    base = a
    e = m
    while e:
        if e & 1:
            result = base if result is None else xs_mul(result, base)
        e >>= 1
        if e:
            base = xs_mul(base, base)
    return result


# ---------------------------------------------------------------------------
# PiPolynomial


class PiPolynomial:
    """Exact finite sum  sum_{j>=0} c_j pi^{-j}  with rational c_j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[int, Fraction]] = None):
        clean: Dict[int, Fraction] = {}
        for j, c in (coeffs or {}).items():
            if j < 0:
                raise ValueError("only nonpositive powers of pi are representable")
            c = Fraction(c)
            if c:
                clean[j] = c
        self.coeffs = clean

    @staticmethod
    def constant(c) -> PiPolynomial:
        return PiPolynomial({0: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self) -> str:
        return "PiPolynomial(%s)" % pi_to_string(self)


def pi_add(a: PiPolynomial, b: PiPolynomial) -> PiPolynomial:
    out = dict(a.coeffs)
    for j, c in b.coeffs.items():
        out[j] = out.get(j, Fraction(0)) + c
    return PiPolynomial(out)


def pi_scale(a: PiPolynomial, c) -> PiPolynomial:
    c = Fraction(c)
    return PiPolynomial({j: v * c for j, v in a.coeffs.items()})


def pi_shift(a: PiPolynomial, k: int) -> PiPolynomial:
    """Multiply by pi^{-k} (k >= 0)."""
    if k < 0:
        raise ValueError("pi_shift exponent must be nonnegative")
    return PiPolynomial({j + k: v for j, v in a.coeffs.items()})


def pi_mul(a: PiPolynomial, b: PiPolynomial) -> PiPolynomial:
    out: Dict[int, Fraction] = {}
    for j1, c1 in a.coeffs.items():
        for j2, c2 in b.coeffs.items():
            out[j1 + j2] = out.get(j1 + j2, Fraction(0)) + c1 * c2
    return PiPolynomial(out)


def pi_eval(a: PiPolynomial, prec: int = 50):
    """Numerical value at the given decimal precision (mpmath real)."""
    with mpmath.workdps(prec + 10):
        pi_inv = 1 / mpmath.pi
        total = mpmath.mpf(0)
        for j, c in sorted(a.coeffs.items()):
            total += mpmath.mpf(c.numerator) / c.denominator * pi_inv ** j
        return +total


def pi_to_string(a: PiPolynomial) -> str:
    if not a.coeffs:
        return "0"
    parts = []
    for j, c in sorted(a.coeffs.items()):
        if j == 0:
            parts.append(str(c))
        elif j == 1:
            parts.append("%s/pi" % c)
        else:
            parts.append("%s/pi^%d" % (c, j))
    return " + ".join(parts).replace("+ -", "- ")


def pi_from_string(text: str) -> PiPolynomial:
    """Parse the pi_to_string rendering back to an exact polynomial."""
    text = text.strip()
    if text == "0":
        return PiPolynomial()
    out: Dict[int, Fraction] = {}
    for chunk in text.replace("- ", "+ -").split("+ "):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "/pi^" in chunk:
            c, j = chunk.split("/pi^")
            out[int(j)] = out.get(int(j), Fraction(0)) + Fraction(c)
        elif chunk.endswith("/pi"):
            out[1] = out.get(1, Fraction(0)) + Fraction(chunk[:-3])
        else:
            out[0] = out.get(0, Fraction(0)) + Fraction(chunk)
    return PiPolynomial(out)
