"""Exact q-expansions of the classical modular building blocks.

Everything here is a pure function of integer parameters returning exact
series objects: Bernoulli and Euler machinery, Eisenstein series E_{2j},
the eta function, and the odd Jacobi theta series in three forms (lacunary
bivariate sum, triple product, and Laurent expansions in x = 2*pi*i*z
around z = 0 and z = 1/2).

Truncation convention: an ``order`` argument guarantees the returned
series is trusted at least below q^order.

Phase normalization: the theta series carries a global factor of i which
ZetaSeries tracks as a unit flag.  The x-expansions instead use the
rescaled objects

    Theta0   := -i * theta(z; tau)          (odd in x)
    ThetaHalf := -theta(z + 1/2; tau)       (even in x)

so that every stored coefficient is rational.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Dict, List

from .series import (
    QSeries,
    XSeries,
    ZetaSeries,
    qs_add,
    qs_first_mismatch,
    qs_mul,
    qs_scale,
    qs_scale_exponent,
    zs_mul,
)


class RationalPolynomial:
    """Dense polynomial with Fraction coefficients, coeffs[k] on z^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: List[Fraction]):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, z) -> Fraction:
        z = Fraction(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return "RationalPolynomial(%s)" % (self.coeffs,)


@lru_cache(maxsize=None)
def bernoulli_number(r: int) -> Fraction:
    """B_r from the generating function t/(e^t - 1)."""
    if r < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if r == 0:
        return Fraction(1)
    # sum_{k=0}^{r} C(r+1, k) B_k = 0  for r >= 1
    acc = Fraction(0)
    for k in range(r):
        acc += comb(r + 1, k) * bernoulli_number(k)
    return -acc / (r + 1)


@lru_cache(maxsize=None)
def bernoulli_poly(k: int) -> RationalPolynomial:
    """B_k(z) = sum_j C(k,j) B_j z^{k-j}."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        coeffs[k - j] = comb(k, j) * bernoulli_number(j)
    return RationalPolynomial(coeffs)


@lru_cache(maxsize=None)
def euler_poly(k: int) -> RationalPolynomial:
    """E_k(z) from 2e^{xz}/(e^x + 1), via E_k(z) = z^k - (1/2) sum_{j<k} C(k,j) E_j(z)."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    coeffs = [Fraction(0)] * (k + 1)
    coeffs[k] = Fraction(1)
    for j in range(k):
        ej = euler_poly(j).coeffs
        c = Fraction(comb(k, j), 2)
        for i, v in enumerate(ej):
            coeffs[i] -= c * v
    return RationalPolynomial(coeffs)


def classical_euler_number(k: int) -> Fraction:
    """E_k from the generating function sech(x) = 2/(e^x + e^{-x})."""
    return 2 ** k * euler_poly(k).evaluate(Fraction(1, 2))


def sigma(r: int, ell: int) -> int:
    """Divisor power sum sigma_r(ell) over positive divisors."""
    if ell < 1:
        raise ValueError("divisor sum needs a positive argument")
    total = 0
    for d in range(1, isqrt(ell) + 1):
        if ell % d == 0:
            total += d ** r
            e = ell // d
            if e != d:
                total += e ** r
    return total


@lru_cache(maxsize=None)
def eisenstein(j: int, order: int) -> QSeries:
    """E_{2j} = 1 - (4j/B_{2j}) sum_{l>=1} sigma_{2j-1}(l) q^l, trusted below q^order.

    j = 1 gives the quasimodular E_2.
    """
    if j < 1:
        raise ValueError("Eisenstein index must be at least 1")
    factor = Fraction(-4 * j) / bernoulli_number(2 * j)
    coeffs: Dict[int, Fraction] = {0: Fraction(1)}
    for ell in range(1, order):
        coeffs[ell] = factor * sigma(2 * j - 1, ell)
    return QSeries(1, coeffs, order)


@lru_cache(maxsize=None)
def euler_product(order: int) -> QSeries:
    """prod_{k>=1} (1 - q^k), trusted below q^{order+1}."""
    acc = QSeries.one(1, order + 1)
    for k in range(1, order + 1):
        acc = qs_mul(acc, QSeries(1, {0: Fraction(1), k: Fraction(-1)}, order + 1))
    return acc


@lru_cache(maxsize=None)
def eta(order: int) -> QSeries:
    """q^{1/24} prod (1 - q^k) on the 1/24 lattice."""
    base = euler_product(order).on_lattice(24)
    return QSeries(24, {n + 1: c for n, c in base.coeffs.items()}, base.trunc + 1)


@lru_cache(maxsize=None)
def theta_zeta(order: int) -> ZetaSeries:
    """The odd theta series as a bivariate sum.

    theta(z;tau) = i * sum_{k in Z} (-1)^k q^{(2k+1)^2/8} zeta^{k+1/2}.
    Returned with zeta_denom 2, q-lattice 1/8, unit flag i.  The zeta-key
    r = 2k+1 runs over odd integers and the q-key is exactly r^2.
    """
    q_trunc = 8 * order
    terms: Dict[int, QSeries] = {}
    r = 1
    while r * r < q_trunc:
        sign = Fraction(-1) if ((r - 1) // 2) % 2 else Fraction(1)
        terms[r] = QSeries(8, {r * r: sign}, q_trunc)
        # k and -k-1 give zeta-keys r and -r with opposite parity signs
        terms[-r] = QSeries(8, {r * r: -sign}, q_trunc)
        r += 2
    return ZetaSeries(2, 8, q_trunc, terms, unit_ipow=1)


@lru_cache(maxsize=None)
def theta_product(order: int) -> ZetaSeries:
    """Triple-product form of the odd theta series.

    -i q^{1/8} zeta^{-1/2} prod_{r>=1} (1-q^r)(1-zeta q^{r-1})(1-zeta^{-1} q^r),
    with the unit flag -i = i^3.
    """
    q_trunc = 8 * order
    one = QSeries(8, {0: Fraction(1)}, q_trunc)
    acc = ZetaSeries(2, 8, q_trunc, {0: one})
    for r in range(1, order + 2):
        if 8 * (r - 1) >= q_trunc and 8 * r >= q_trunc:
            break
        f1 = ZetaSeries(2, 8, q_trunc, {
            0: one, 2: QSeries(8, {8 * (r - 1): Fraction(-1)}, q_trunc)})
        acc = zs_mul(acc, f1)
        if 8 * r < q_trunc:
            f0 = ZetaSeries(2, 8, q_trunc, {
                0: QSeries(8, {0: Fraction(1), 8 * r: Fraction(-1)}, q_trunc)})
            f2 = ZetaSeries(2, 8, q_trunc, {
                0: one, -2: QSeries(8, {8 * r: Fraction(-1)}, q_trunc)})
            acc = zs_mul(zs_mul(acc, f0), f2)
    # prefactor -i q^{1/8} zeta^{-1/2}
    pre = ZetaSeries(2, 8, q_trunc, {-1: QSeries(8, {1: Fraction(1)}, q_trunc)},
                     unit_ipow=3)
    return zs_mul(acc, pre)


def _theta_x_coefficient(n: int, alternating: bool, exp_denom: int, q_trunc: int) -> QSeries:
    """(2/(2^n n!)) sum_{k>=0} (+-1)^k (2k+1)^n q^{(2k+1)^2/8} on the given lattice."""
    scale = Fraction(2, 2 ** n)
    for i in range(2, n + 1):
        scale /= i
    step = exp_denom // 8
    coeffs: Dict[int, Fraction] = {}
    k = 0
    while (2 * k + 1) ** 2 * step < q_trunc:
        r = 2 * k + 1
        c = scale * r ** n
        if alternating and k % 2:
            c = -c
        coeffs[r * r * step] = c
        k += 1
    return QSeries(exp_denom, coeffs, q_trunc)


@lru_cache(maxsize=None)
def theta_x_at_0(K: int, order: int) -> XSeries:
    """Theta0 = -i*theta as a series in x = 2*pi*i*z, powers x^1 .. x^K.

    [x^n] = (2/(2^n n!)) sum_{k>=0} (-1)^k (2k+1)^n q^{(2k+1)^2/8} for odd n,
    zero for even n.  The x^1 coefficient is eta^3.
    """
    if K < 1:
        raise ValueError("need at least the x^1 coefficient")
    q_trunc = 8 * order
    coeffs = []
    for n in range(1, K + 1):
        if n % 2:
            coeffs.append(_theta_x_coefficient(n, True, 8, q_trunc))
        else:
            coeffs.append(QSeries.zero(8, q_trunc))
    return XSeries(1, coeffs, K + 1)


@lru_cache(maxsize=None)
def theta_x_at_half(K: int, order: int) -> XSeries:
    """ThetaHalf = -theta(z + 1/2) as a series in x, powers x^0 .. x^K.

    [x^n] = (2/(2^n n!)) sum_{k>=0} (2k+1)^n q^{(2k+1)^2/8} for even n, zero
    for odd n.  The x^0 coefficient is 2 eta(2tau)^2 / eta(tau).
    """
    if K < 0:
        raise ValueError("x-order must be nonnegative")
    q_trunc = 8 * order
    coeffs = []
    for n in range(0, K + 1):
        if n % 2 == 0:
            coeffs.append(_theta_x_coefficient(n, False, 8, q_trunc))
        else:
            coeffs.append(QSeries.zero(8, q_trunc))
    return XSeries(0, coeffs, K + 1)


def _check(name: str, lhs: QSeries, rhs: QSeries) -> dict:
    mis = qs_first_mismatch(lhs, rhs)
    bound = min(Fraction(lhs.trunc, lhs.exp_denom), Fraction(rhs.trunc, rhs.exp_denom))
    return {
        "name": name,
        "status": "pass" if mis is None else "fail",
        "first_mismatch": None if mis is None else str(mis),
        "verified_below": str(bound),
    }


def theta_log_derivative_checks(order: int) -> List[dict]:
    """Exact identity battery for the low x-coefficients of both theta expansions.

    All are stated cross-multiplied so only products of exact series occur:

      half-x0:   [x^0]ThetaHalf * eta         = 2 eta(2tau)^2
      zero-x1:   [x^1]Theta0                  = eta^3
      half-x2:   24 [x^2]ThetaHalf            = [x^0]ThetaHalf * (4 E2(2tau) - E2)
      zero-x3:   24 [x^3]Theta0               = [x^1]Theta0 * E2
      half-x4:   24 [x^4]ThetaHalf            = [x^0]ThetaHalf *
                   (-(7/48)E2^2 - (1/3)E2(2tau)^2 + (1/24)E4 + (1/2)E2 E2(2tau))
      zero-x5:   24 [x^5]Theta0               = [x^1]Theta0 * ((1/48)E2^2 - (1/120)E4)
    """
    th0 = theta_x_at_0(5, order)
    thh = theta_x_at_half(4, order)
    b0, b2, b4 = thh.coefficient(0), thh.coefficient(2), thh.coefficient(4)
    c1, c3, c5 = th0.coefficient(1), th0.coefficient(3), th0.coefficient(5)
    et = eta(order)
    et2 = qs_scale_exponent(et, 2)
    e2 = eisenstein(1, order)
    e2_2 = qs_scale_exponent(e2, 2)
    e4 = eisenstein(2, order)

    checks = [
        _check("theta-half-x0", qs_mul(b0, et), qs_scale(qs_mul(et2, et2), 2)),
        _check("theta-zero-x1", c1, qs_mul(qs_mul(et, et), et)),
        _check("theta-half-x2", qs_scale(b2, 24),
               qs_mul(b0, qs_add(qs_scale(e2_2, 4), qs_scale(e2, -1)))),
        _check("theta-zero-x3", qs_scale(c3, 24), qs_mul(c1, e2)),
    ]
    m4_half = qs_add(
        qs_add(qs_scale(qs_mul(e2, e2), Fraction(-7, 48)),
               qs_scale(qs_mul(e2_2, e2_2), Fraction(-1, 3))),
        qs_add(qs_scale(e4, Fraction(1, 24)),
               qs_scale(qs_mul(e2, e2_2), Fraction(1, 2))))
    m4_zero = qs_add(qs_scale(qs_mul(e2, e2), Fraction(1, 48)),
                     qs_scale(e4, Fraction(-1, 120)))
    checks.append(_check("theta-half-x4", qs_scale(b4, 24), qs_mul(b0, m4_half)))
    checks.append(_check("theta-zero-x5", qs_scale(c5, 24), qs_mul(c1, m4_zero)))
    return checks
