"""Laurent decomposition of the theta quotient and the character series.

phi(z;tau) = (theta(z+1/2)/theta(z))^m has a pole of order m at z = 0.
Writing x = 2*pi*i*z, its Laurent coefficients D_{2j} := [x^{-2j}] phi are
exact q-series.  From them come the zeta-Fourier slices chi_r, the
specialized characters chF_r = (-1)^{m/2} q^{r/2} chi_r, and the graded
traces trace_r = chF_r * prod(1 - q^k).

The independent cross-check is the product generating function

  prod_{k>=1} [ (1+zeta q^{k-1/2})(1+zeta^{-1}q^{k-1/2})
              / ((1-zeta q^{k-1/2})(1-zeta^{-1}q^{k-1/2})) ]^m

whose zeta^r coefficient must equal chF_r termwise.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional

from . import modular
from .series import (
    QSeries,
    XSeries,
    ZetaSeries,
    qs_add,
    qs_inv,
    qs_mul,
    qs_pow,
    qs_reduce_lattice,
    qs_scale,
    qs_scale_exponent,
    qs_shift,
    xs_inv,
    xs_mul,
    xs_pow,
    xs_scale,
    zs_mul,
)


class PhiExpansion:
    """Laurent data of phi: D[j] is the x^{-2j} coefficient, j = 0..m/2."""

    __slots__ = ("m", "D", "higher_x")

    def __init__(self, m: int, D: Dict[int, QSeries],
                 higher_x: Optional[Dict[int, QSeries]] = None):
        if sorted(D) != list(range(m // 2 + 1)):
            raise ValueError("need D_{2j} for every j in 0..m/2")
        self.m = m
        self.D = D
        self.higher_x = higher_x or {}

    def __repr__(self) -> str:
        return "PhiExpansion(m=%d, D0..D%d)" % (self.m, self.m)


class CharacterSeries:
    """A character-type q-series tagged with its parameters."""

    __slots__ = ("m", "r", "series", "kind")

    def __init__(self, m: int, r: int, series: QSeries, kind: str):
        if kind not in ("chF", "trace"):
            raise ValueError("kind must be chF or trace")
        self.m = m
        self.r = r
        self.series = series
        self.kind = kind

    def __repr__(self) -> str:
        return "CharacterSeries(m=%d, r=%d, kind=%s, %r)" % (
            self.m, self.r, self.kind, self.series)


def _require_even_m(m: int) -> None:
    if m <= 0 or m % 2:
        raise ValueError("m must be even positive")


@lru_cache(maxsize=None)
def phi_x(m: int, K: int, order: int) -> XSeries:
    """phi as an x-Laurent series, powers x^{-m} .. x^K, trusted below q^order.

    phi = (-1)^{m/2} * (ThetaHalf / Theta0)^m.  The theta inputs are taken
    at a higher x-order and q-order so that the quotient and m-th power
    still meet the requested truncations; the margins are grown until the
    result provably covers them.
    """
    _require_even_m(m)
    x_need = max(K, 0) + m + 1
    margin = 4
    while True:
        th0 = modular.theta_x_at_0(x_need, order + margin)
        thh = modular.theta_x_at_half(x_need, order + margin)
        ratio = xs_mul(thh, xs_inv(th0))
        phi = xs_pow(ratio, m)
        if m % 4:
            phi = xs_scale(phi, -1)
        if phi.x_trunc >= K + 1 and phi.q_trunc >= order * phi.exp_denom:
            break
        margin *= 2
        if margin > 512:
            raise RuntimeError("phi_x margins failed to converge")
    trimmed = [s.truncated(order * phi.exp_denom) for s in phi.coeffs[: K + 1 - phi.lo]]
    return XSeries(phi.lo, trimmed, K + 1)


@lru_cache(maxsize=None)
def extract_D(m: int, order: int) -> PhiExpansion:
    """All Laurent coefficients D_{2j}, j = 0..m/2, each on its reduced lattice."""
    phi = phi_x(m, 0, order)
    D = {j: qs_reduce_lattice(phi.coefficient(-2 * j)) for j in range(m // 2 + 1)}
    return PhiExpansion(m, D)


@lru_cache(maxsize=None)
def phi_finite(m: int, order: int) -> QSeries:
    """Finite part: D_0 + sum_{j=1}^{m/2} (B_{2j}/(2j)!) D_{2j} E_{2j}."""
    exp = extract_D(m, order)
    acc = exp.D[0]
    for j in range(1, m // 2 + 1):
        c = modular.bernoulli_number(2 * j) / _factorial(2 * j)
        acc = qs_add(acc, qs_scale(qs_mul(exp.D[j], modular.eisenstein(j, order)), c))
    return acc


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


@lru_cache(maxsize=None)
def chi(m: int, r: int, order: int) -> QSeries:
    """zeta^r Fourier slice for r != 0:  (1/(1-q^r)) sum_j r^{2j-1}/(2j-1)! D_{2j}.

    For r < 0 the prefactor is rewritten -q^{|r|}/(1-q^{|r|}) so the result
    stays a power series; this gives chi_{-s} = q^s chi_s exactly.
    """
    if r == 0:
        raise ValueError("r = 0 has no pole sum; use phi_finite")
    exp = extract_D(m, order)
    acc = None
    for j in range(1, m // 2 + 1):
        c = Fraction(r ** (2 * j - 1), _factorial(2 * j - 1))
        t = qs_scale(exp.D[j], c)
        acc = t if acc is None else qs_add(acc, t)
    s = abs(r)
    geom = qs_inv(QSeries(1, {0: Fraction(1), s: Fraction(-1)}, order))
    if r > 0:
        return qs_mul(acc, geom)
    # 1/(1-q^{-s}) = -q^s/(1-q^s): shift by q^s and flip the sign
    return qs_scale(qs_shift(qs_mul(acc, geom), s), -1)


@lru_cache(maxsize=None)
def chF(m: int, r: int, order: int) -> CharacterSeries:
    """Specialized character chF_r = (-1)^{m/2} q^{r/2} chi_r (chi_0 := phi_finite)."""
    _require_even_m(m)
    sign = -1 if m % 4 else 1
    body = phi_finite(m, order) if r == 0 else chi(m, r, order)
    shifted = qs_shift(body.on_lattice(2), r)
    return CharacterSeries(m, r, qs_scale(shifted, sign), "chF")


@lru_cache(maxsize=None)
def character(m: int, r: int, order: int) -> CharacterSeries:
    """Graded trace: chF_r times prod_{k>=1}(1-q^k)."""
    base = chF(m, r, order)
    series = qs_mul(base.series, modular.euler_product(order))
    return CharacterSeries(m, r, series, "trace")


@lru_cache(maxsize=None)
def kw_product_oracle(m: int, order: int) -> ZetaSeries:
    """Brute-force expansion of the character generating product.

    Each factor pair collapses to (1+X)/(1-X) = 1 + 2X + 2X^2 + ... with
    X = zeta^{+-1} q^{k-1/2}, expanded on the half-integer q-lattice; the
    zeta-support is bounded automatically because every zeta power carries
    at least q^{1/2}.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    q_trunc = 2 * order
    acc = ZetaSeries.one(1, 2, q_trunc)
    for k in range(1, order + 1):
        h = 2 * k - 1  # q-key of q^{k-1/2}
        if h >= q_trunc:
            break
        for zdir in (1, -1):
            terms: Dict[int, QSeries] = {0: QSeries.one(2, q_trunc)}
            j = 1
            while j * h < q_trunc:
                terms[zdir * j] = QSeries(2, {j * h: Fraction(2)}, q_trunc)
                j += 1
            factor = ZetaSeries(1, 2, q_trunc, terms)
            for _ in range(m):
                acc = zs_mul(acc, factor)
    return acc


@lru_cache(maxsize=None)
def example_D(m: int, order: int) -> PhiExpansion:
    """Closed eta-quotient and Eisenstein forms of the D_{2j} for m = 2, 4.

    The fractional eta powers cancel, so everything is built from the bare
    products prod(1-q^k) and prod(1-q^{2k}) on the integer lattice:

      m=2:  D2 = -4 Q,          D0 = (2/3) Q (E2 - 2 E2(2tau)),
            with Q = eta(2tau)^4/eta^8.
      m=4:  D4 = 16 Q4,         D2 = -(16/3) Q4 (E2 - 2 E2(2tau)),
            D0 = (4/3) Q4 ((1/10) E4 + (1/3)(E2 - 2 E2(2tau))^2),
            with Q4 = eta(2tau)^8/eta^16.
    """
    if m not in (2, 4):
        raise ValueError("no closed form tabulated")
    work = 2 * order + 2
    ep = modular.euler_product(work)
    ep2 = qs_scale_exponent(modular.euler_product(order + 1), 2)
    e2 = modular.eisenstein(1, work)
    e2_2 = qs_scale_exponent(modular.eisenstein(1, order + 1), 2)
    comb = qs_add(e2, qs_scale(e2_2, -2))
    if m == 2:
        quot = qs_mul(qs_pow(ep2, 4), qs_inv(qs_pow(ep, 8)))
        D = {
            1: qs_scale(quot, -4),
            0: qs_scale(qs_mul(quot, comb), Fraction(2, 3)),
        }
    else:
        quot = qs_mul(qs_pow(ep2, 8), qs_inv(qs_pow(ep, 16)))
        inner = qs_add(qs_scale(modular.eisenstein(2, work), Fraction(1, 10)),
                       qs_scale(qs_mul(comb, comb), Fraction(1, 3)))
        D = {
            2: qs_scale(quot, 16),
            1: qs_scale(qs_mul(quot, comb), Fraction(-16, 3)),
            0: qs_scale(qs_mul(quot, inner), Fraction(4, 3)),
        }
    D = {j: qs_reduce_lattice(s.truncated(order)) for j, s in D.items()}
    return PhiExpansion(m, D)


@lru_cache(maxsize=None)
def phi_polar_zeta(m: int, order: int, R: int) -> ZetaSeries:
    """Polar part as a bivariate series with zeta-support 0 < |r| <= R."""
    _require_even_m(m)
    if R < 1:
        raise ValueError("zeta-support bound must be positive")
    terms = {r: chi(m, r, order).on_lattice(1)
             for r in range(-R, R + 1) if r != 0}
    trunc = min(s.trunc for s in terms.values())
    return ZetaSeries(1, 1, trunc, {r: s.truncated(trunc) for r, s in terms.items()})


@lru_cache(maxsize=None)
def character_deep(m: int, r: int, order: int) -> CharacterSeries:
    """Integer-lattice fast route to the trace for m = 2, for deep truncations.

    Uses the closed forms of example_D, which coincide with the extracted
    D_{2j} (that equality is itself under test), so that the whole pipeline
    stays on the coarse lattice:

      r != 0:  trace = 4|r| q^{|r|/2} prod(1-q^{2k})^4 / (prod(1-q^k)^7 (1-q^{|r|}))
               (the same series for r and -r, by reflection)
      r  = 0:  trace = -(1/3) prod(1-q^{2k})^4 / prod(1-q^k)^7 (E2 - 4 E2(2tau))
    """
    if m != 2:
        return character(m, r, order)
    work = order + abs(r) + 4
    ep = modular.euler_product(work)
    ep2 = qs_scale_exponent(modular.euler_product(work // 2 + 1), 2)
    core = qs_mul(qs_pow(ep2, 4), qs_inv(qs_pow(ep, 7)))
    if r == 0:
        e2 = modular.eisenstein(1, work)
        e2_2 = qs_scale_exponent(modular.eisenstein(1, work // 2 + 1), 2)
        series = qs_scale(qs_mul(core, qs_add(e2, qs_scale(e2_2, -4))),
                          Fraction(-1, 3))
        series = series.truncated(min(series.trunc, order * series.exp_denom))
        return CharacterSeries(m, 0, series, "trace")
    s = abs(r)
    geom = qs_inv(QSeries(1, {0: Fraction(1), s: Fraction(-1)}, work))
    body = qs_scale(qs_mul(core, geom), 4 * s)
    series = qs_shift(body.on_lattice(2), s)  # the q^{s/2} prefactor
    series = series.truncated(min(series.trunc, order * series.exp_denom))
    return CharacterSeries(m, r, series, "trace")
