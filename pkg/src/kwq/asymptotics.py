"""Generalized Euler numbers and the small-t expansion of the traces.

E_{k,m} denotes the integral of u^k sech^m(pi u) over the real line, a
rational polynomial in 1/pi (exactly zero for odd k).  The two seed rows
are classical: E_{k,1} comes from the Euler numbers and E_{k,2} from the
Bernoulli polynomials at 1/2; deeper rows follow from the reduction
formula (integration by parts against sech^n tanh)

    E_{k,n+2} = n/(n+1) * E_{k,n} - k(k-1)/(pi^2 n(n+1)) * E_{k-2,n}.

An independent numerical quadrature of the defining integral serves as a
cross-check.  Note the minus sign: the same recurrence written for the
i^k-twisted normalization of these numbers carries a plus instead, an
easy trap when comparing conventions.  On top of these sit the coefficients a_k(m,r), the truncated
expansion of the normalized trace at tau = it as t -> 0+, and the defect
of that expansion against direct evaluation of the exact series.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

import mpmath

from . import decomposition, modular
from .numeric import EvalContext, PrecisionError, qs_eval
from .series import PiPolynomial, pi_add, pi_eval, pi_scale, pi_shift


def _to_mpf(t):
    if isinstance(t, Fraction):
        return mpmath.mpf(t.numerator) / t.denominator
    return mpmath.mpf(t)


class GeneralizedEuler(NamedTuple):
    k: int
    m: int
    value: PiPolynomial  # exact: sum over j of c_j / pi^j


@lru_cache(maxsize=None)
def _euler_value(k: int, m: int) -> PiPolynomial:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if m < 1:
        raise ValueError("m must be positive")
    if k % 2:
        # odd integrand
        return PiPolynomial({})
    sign = -1 if (k // 2) % 2 else 1
    if m == 1:
        c = Fraction(sign, 2 ** k) * modular.classical_euler_number(k)
        return PiPolynomial({0: c})
    if m == 2:
        c = 2 * sign * modular.bernoulli_poly(k).evaluate(Fraction(1, 2))
        return PiPolynomial({1: c})
    n = m - 2
    first = pi_scale(_euler_value(k, n), Fraction(n, n + 1))
    if k >= 2:
        inner = pi_scale(_euler_value(k - 2, n), Fraction(-k * (k - 1), n * (n + 1)))
        first = pi_add(first, pi_shift(inner, 2))
    return first


def gen_euler(k: int, m: int) -> GeneralizedEuler:
    """Exact integral of u^k sech^m(pi u) du over R."""
    return GeneralizedEuler(k, m, _euler_value(k, m))


def quadrature_oracle(k: int, m: int, prec: int = 30):
    """The same integral by direct numerical quadrature.

    The integrand is below u^k 2^m e^{-pi m u} past the origin, so the
    window [0, U] is grown until the discarded tail is provably negligible
    at the working precision.
    """
    if k < 0 or m < 1:
        raise ValueError("k must be nonnegative and m positive")
    if k % 2:
        return mpmath.mpf(0)
    with mpmath.workdps(prec + 15):
        target = mpmath.mpf(10) ** (-(prec + 5))
        U = mpmath.mpf(prec + 10) * mpmath.log(10) / (mpmath.pi * m) + 2
        def tail(u):
            # integral_U^inf u^k 2^m e^{-pi m u} du <= 2^m U^k e^{-pi m U} * (1 + k/(pi m U)) / (pi m)
            pm = mpmath.pi * m
            return 2 ** m * u ** k * mpmath.exp(-pm * u) * (1 + k / (pm * u)) / pm
        while tail(U) > target:
            U *= mpmath.mpf("1.2")
        f = lambda u: u ** k * mpmath.sech(mpmath.pi * u) ** m
        val, err = mpmath.quad(f, [0, 1, U], error=True)
        if err > target * (abs(val) + 1) * mpmath.mpf(10) ** 5:
            raise PrecisionError("quadrature error estimate %s too large"
                                 % mpmath.nstr(err, 5))
        return 2 * val


class AsymptoticCoefficient(NamedTuple):
    k: int
    m: int
    r: int
    pi_power: int        # value = pi^pi_power * poly evaluated at 1/pi
    poly: PiPolynomial

    def numeric(self, prec: int = 50):
        with mpmath.workdps(prec + 10):
            return pi_eval(self.poly, prec) * mpmath.pi ** self.pi_power


def a_coeff(k: int, m: int, r: int) -> AsymptoticCoefficient:
    """Expansion coefficient a_k(m,r) = (-2 pi i r)^k E_{k,m}, exactly.

    For even k the i-power collapses to the real sign (-1)^{k/2}; odd k
    vanishes with E_{k,m}.  The value is stored as pi^k times a rational
    polynomial in 1/pi.
    """
    val = _euler_value(k, m)
    if k % 2:
        return AsymptoticCoefficient(k, m, r, 0, PiPolynomial({}))
    sign = -1 if (k // 2) % 2 else 1
    factor = Fraction(sign) * Fraction(2 * r) ** k
    return AsymptoticCoefficient(k, m, r, k, pi_scale(val, factor))


def prefactor(m: int, t, prec: int):
    with mpmath.workdps(prec + 15):
        t = _to_mpf(t)
        if t <= 0:
            raise ValueError("t must be positive")
        expo = mpmath.pi * t / 12 + mpmath.pi * (3 * m - 1) / (12 * t)
        return mpmath.exp(expo) * mpmath.sqrt(t) / 2 ** m


def asymptotic_value(m: int, r: int, t, N: int, prec: int = 50):
    """Truncated small-t expansion of the trace at tau = it.

    prefactor * sum_{k=0}^{N} a_k(m,r) t^k / k!  with
    prefactor = e^{pi t/12 + pi (3m-1)/(12 t)} sqrt(t) / 2^m.
    """
    if m < 2 or m % 2:
        raise ValueError("m must be even and at least 2")
    if N < 0:
        raise ValueError("N must be nonnegative")
    with mpmath.workdps(prec + 15):
        tf = _to_mpf(Fraction(t)) if isinstance(t, (Fraction, str)) else _to_mpf(t)
        acc = mpmath.mpf(0)
        kfact = 1
        for k in range(N + 1):
            if k:
                kfact *= k
            ak = a_coeff(k, m, r).numeric(prec)
            acc += ak * tf ** k / kfact
        return prefactor(m, tf, prec) * acc


def _trace_order_for(t, prec: int) -> int:
    """Series order making the q-tail of a trace negligible at t.

    Coefficients grow like e^{c sqrt n} with c safely below 4.6 for the
    m = 2 traces; solve 2 pi t n - c sqrt(n) >= needed digits.
    """
    rate = 2 * mpmath.pi * float(t)
    need = (prec + 10) * 2.303 + 10
    n = 16
    while rate * n - 4.6 * (n ** 0.5) < need:
        n = int(n * 1.25) + 1
    return -(-n // 32) * 32


@lru_cache(maxsize=None)
def _trace_direct_cached(m: int, r: int, t: Fraction, prec: int):
    order = _trace_order_for(t, prec)
    ctx = EvalContext(precision=prec)
    with mpmath.workdps(prec + 15):
        tau = mpmath.mpc(0, _to_mpf(t))
        while True:
            series = decomposition.character_deep(m, r, order).series
            try:
                val = qs_eval(series, tau, ctx)
                break
            except PrecisionError as err:
                jump = err.suggested_order if err.suggested_order else 2 * order
                order = max(2 * order, -(-jump // 32) * 32)
                if order > 40000:
                    raise
        return val.real if abs(val.imag) < mpmath.mpf(10) ** (-prec) else val


def trace_direct(m: int, r: int, t, prec: int = 50):
    """Exact-series evaluation of the trace at tau = it."""
    return _trace_direct_cached(m, r, Fraction(t), prec)


def asymptotic_defect(m: int, r: int, t, N: int, prec: int = 50):
    """|direct - truncated expansion| / prefactor at tau = it.

    Normalizing by the prefactor makes this the remainder of the bracketed
    series itself, the natural scale on which successive orders in t can
    be compared.
    """
    tq = Fraction(t)
    with mpmath.workdps(prec + 15):
        direct = trace_direct(m, r, tq, prec)
        approx = asymptotic_value(m, r, tq, N, prec)
        return abs(direct - approx) / prefactor(m, tq, prec)
