"""High-precision complex evaluation and numerical transformation checks.

Series objects are evaluated at points tau in the upper half plane with a
reported tail estimate; the theta function is evaluated through its
product form.  On top of these sit numerical verifications of the modular
and elliptic transformation laws: theta under SL2(Z), phi under Gamma0(2)
and lattice shifts, the weight -2j law for the Laurent coefficients D_{2j},
and the completed finite/polar parts with their 1/v correction term.

mpmath supplies all arbitrary-precision arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import mpmath
from mpmath import mp

from . import decomposition, modular
from .series import QSeries


class PrecisionError(RuntimeError):
    """Requested accuracy cannot be certified with the given inputs.

    suggested_order, when set, is a q-order predicted to be deep enough for
    the same evaluation to pass.
    """

    def __init__(self, message: str, suggested_order: Optional[int] = None):
        super().__init__(message)
        self.suggested_order = suggested_order


class EvalContext:
    """Precision and truncation policy for numerical evaluation.

    precision: target decimal digits (>= 15).
    max_terms: cap on retained series terms per evaluation.
    growth_allowance: multiplier on the measured coefficient growth when
    bounding the dropped tail.
    """

    __slots__ = ("precision", "max_terms", "growth_allowance")

    def __init__(self, precision: int = 50, max_terms: int = 200000,
                 growth_allowance: float = 4.0):
        if precision < 15:
            raise ValueError("precision must be at least 15 digits")
        self.precision = precision
        self.max_terms = max_terms
        self.growth_allowance = growth_allowance

    def workdps(self):
        return mpmath.workdps(self.precision + 15)

    def __repr__(self) -> str:
        return "EvalContext(precision=%d, max_terms=%d)" % (self.precision, self.max_terms)


class GammaMatrix:
    """Integer matrix (a b; c d) with determinant 1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        if a * d - b * c != 1:
            raise ValueError("determinant must be 1")
        self.a, self.b, self.c, self.d = a, b, c, d

    def in_gamma0_2(self) -> bool:
        return self.c % 2 == 0

    def canonical(self) -> "GammaMatrix":
        """Sign-normalized representative: c > 0, or c = 0 and d > 0."""
        if self.c < 0 or (self.c == 0 and self.d < 0):
            return GammaMatrix(-self.a, -self.b, -self.c, -self.d)
        return self

    def act(self, tau):
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def jfactor(self, tau):
        """cτ + d."""
        return self.c * tau + self.d

    def __repr__(self) -> str:
        return "GammaMatrix(%d,%d;%d,%d)" % (self.a, self.b, self.c, self.d)


def _tail_bound(amp, growth: float, rho, start: int):
    """Bound sum_{n>=start} amp * e^{growth*sqrt(n)} * rho^n, rho < 1."""
    if rho >= 1:
        return mpmath.inf
    total = mpmath.mpf(0)
    term_log = None
    n = start
    lrho = mpmath.log(rho)
    for _ in range(4000):
        term_log = mpmath.log(amp) + growth * mpmath.sqrt(n) + n * lrho
        if term_log < -mp.dps * mpmath.log(10) - 20:
            break
        total += mpmath.exp(term_log)
        n += 1
    # geometric remainder: consecutive-term ratio is below rho*e^{g/(2 sqrt n)}
    ratio = rho * mpmath.exp(growth / (2 * mpmath.sqrt(n)))
    last = mpmath.exp(term_log) if term_log is not None else mpmath.mpf(0)
    if ratio < 1:
        total += last * ratio / (1 - ratio)
    else:
        return mpmath.inf
    return total


def qs_eval(s: QSeries, tau, ctx: Optional[EvalContext] = None):
    """Evaluate an exact series at tau (Im tau > 0) as an mpmath complex.

    The dropped tail is bounded by extrapolating the measured coefficient
    growth: |c_n| <= e^{g sqrt n} with g read off the last retained terms
    plus a fixed exponent slack, the whole bound scaled by the context's
    allowance.  The objects evaluated here all have e^{c sqrt n} coefficient
    growth, for which this is a sound cap in practice; the estimate exists
    to reject grossly insufficient truncations, not to prove bounds.  On
    failure the raised PrecisionError carries a predicted sufficient order.
    """
    ctx = ctx or EvalContext()
    if len(s.coeffs) > ctx.max_terms:
        raise PrecisionError("series has %d terms, cap is %d" % (len(s.coeffs), ctx.max_terms))
    with ctx.workdps():
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must have positive imaginary part")
        w = mpmath.exp(2j * mpmath.pi * tau / s.exp_denom)  # q^{1/d}
        total = mpmath.mpc(0)
        growth = 0.25
        items = s.items_sorted()
        for n, c in items:
            cn = mpmath.mpf(c.numerator) / c.denominator
            total += cn * w ** n
        for n, c in items[-20:]:
            if n > 0 and c != 0:
                ac = abs(mpmath.mpf(c.numerator) / c.denominator)
                g = float(mpmath.log(max(ac, mpmath.mpf("1e-30"))) / mpmath.sqrt(n))
                growth = max(growth, g + 0.25)
        tail = ctx.growth_allowance * _tail_bound(mpmath.mpf(1), growth, abs(w), s.trunc)
        target = mpmath.mpf(10) ** (-(ctx.precision + 2)) * (abs(total) + 1)
        if tail > target:
            need = float(mpmath.log(ctx.growth_allowance / target))
            rate = float(-mpmath.log(abs(w)))
            nkeys = s.trunc
            while nkeys * rate - growth * (nkeys ** 0.5) < need + 5:
                nkeys = max(nkeys + 1, int(nkeys * 1.3))
                if nkeys > 100 * ctx.max_terms:
                    break
            raise PrecisionError(
                "tail estimate %s exceeds target %s (trunc %d, |q^(1/d)| = %s)"
                % (mpmath.nstr(tail, 5), mpmath.nstr(target, 5), s.trunc,
                   mpmath.nstr(abs(w), 5)),
                suggested_order=nkeys // s.exp_denom + 2)
        return total


def eval_adaptive(builder: Callable[[int], QSeries], tau, ctx: Optional[EvalContext] = None,
                  start_order: int = 64):
    """Evaluate builder(order) at tau, deepening until the tail certifies.

    A failed probe predicts the sufficient order, which is rounded up to a
    multiple of 32 so nearby evaluation points share cached series.
    """
    ctx = ctx or EvalContext()
    order = start_order
    while True:
        try:
            return qs_eval(builder(order), tau, ctx)
        except PrecisionError as err:
            if order >= 4 * ctx.max_terms:
                raise
            jump = err.suggested_order if err.suggested_order else 2 * order
            order = max(2 * order, -(-(jump + 8) // 32) * 32)


def theta_eval(z, tau, ctx: Optional[EvalContext] = None):
    """theta(z;tau) by the triple product, factors taken until they settle at 1."""
    ctx = ctx or EvalContext()
    with ctx.workdps():
        z = mpmath.mpc(z)
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must have positive imaginary part")
        q = mpmath.exp(2j * mpmath.pi * tau)
        zeta = mpmath.exp(2j * mpmath.pi * z)
        eps = mpmath.mpf(10) ** (-(ctx.precision + 12))
        # half powers built from z and tau directly, not via sqrt branch cuts
        total = -1j * mpmath.exp(1j * mpmath.pi * tau / 4) * mpmath.exp(-1j * mpmath.pi * z)
        qr = mpmath.mpc(1)  # q^{r-1}
        for r in range(1, ctx.max_terms):
            f = (1 - q * qr) * (1 - zeta * qr) * (1 - q * qr / zeta)
            total *= f
            qr *= q
            if abs(q * qr) < eps and abs(zeta * qr) < eps and abs(q * qr / zeta) < eps:
                return total
        raise PrecisionError("triple product did not settle within max_terms")


def phi_eval(z, tau, m: int, ctx: Optional[EvalContext] = None):
    """(theta(z+1/2)/theta(z))^m with a pole guard at the z-lattice."""
    if m <= 0 or m % 2:
        raise ValueError("m must be even positive")
    ctx = ctx or EvalContext()
    with ctx.workdps():
        den = theta_eval(z, tau, ctx)
        guard = mpmath.mpf(10) ** (-(ctx.precision // 2))
        if abs(den) < guard:
            raise ValueError("near pole: |theta(z)| = %s" % mpmath.nstr(abs(den), 5))
        num = theta_eval(mpmath.mpc(z) + mpmath.mpf(1) / 2, tau, ctx)
        return (num / den) ** m


class CompletedValue(NamedTuple):
    holomorphic_part: complex
    correction: complex
    total: complex


def e2hat_eval(tau, ctx: Optional[EvalContext] = None) -> CompletedValue:
    """E2hat(tau) = E2(tau) - 3/(pi v), the weight-2 completion."""
    ctx = ctx or EvalContext()
    with ctx.workdps():
        tau = mpmath.mpc(tau)
        holo = eval_adaptive(lambda o: modular.eisenstein(1, o), tau, ctx)
        corr = -3 / (mpmath.pi * tau.imag)
        return CompletedValue(holo, corr, holo + corr)


def psi_char(gamma: GammaMatrix, m: int) -> int:
    """Nebentypus sign (-1)^{mc/4} for gamma in Gamma0(2) and even m."""
    if not gamma.in_gamma0_2():
        raise ValueError("gamma is not in Gamma0(2)")
    if m % 2:
        raise ValueError("m must be even")
    return -1 if ((m // 2) * (gamma.c // 2)) % 2 else 1


class RhoResult(NamedTuple):
    value: complex      # the snapped 24th root of unity
    index: int          # value = e^{2 pi i index/24}
    snap_distance: float


def rho_from_eta(gamma: GammaMatrix, ctx: Optional[EvalContext] = None) -> RhoResult:
    """eta multiplier rho(gamma) recovered numerically and snapped.

    rho = eta(gamma tau0) / ((c tau0 + d)^{1/2} eta(tau0)) at the base point
    tau0 = -d/c + i/|c| (so |c tau0 + d| = 1), principal square root; then
    snapped to the nearest exact 24th root of unity.  The snap distance must
    come out below 1e-10 or the computation is rejected.
    """
    ctx = ctx or EvalContext()
    gamma = gamma.canonical()
    with ctx.workdps():
        if gamma.c == 0:
            # translation: eta(tau + b) = e^{pi i b/12} eta(tau)
            idx = gamma.b % 24
            return RhoResult(mpmath.exp(2j * mpmath.pi * idx / 24), idx, 0.0)
        c = gamma.c
        tau0 = mpmath.mpc(mpmath.mpf(-gamma.d) / c, mpmath.mpf(1) / abs(c))
        num = eval_adaptive(lambda o: modular.eta(o), gamma.act(tau0), ctx)
        den = eval_adaptive(lambda o: modular.eta(o), tau0, ctx)
        raw = num / (mpmath.sqrt(gamma.jfactor(tau0)) * den)
        best, best_idx, best_dist = None, 0, mpmath.inf
        for k in range(24):
            root = mpmath.exp(2j * mpmath.pi * k / 24)
            dist = abs(raw - root)
            if dist < best_dist:
                best, best_idx, best_dist = root, k, dist
        if best_dist > mpmath.mpf("1e-10"):
            raise PrecisionError("eta multiplier snap distance %s too large"
                                 % mpmath.nstr(best_dist, 5))
        return RhoResult(best, best_idx, float(best_dist))


def check_theta_modular(gamma: GammaMatrix, z, tau, ctx: Optional[EvalContext] = None):
    """Residual of theta(z/(ctau+d); gamma tau) = rho^3 (ctau+d)^{1/2} e^{pi i c z^2/(ctau+d)} theta(z;tau)."""
    ctx = ctx or EvalContext()
    gamma = gamma.canonical()
    with ctx.workdps():
        z = mpmath.mpc(z)
        tau = mpmath.mpc(tau)
        rho = rho_from_eta(gamma, ctx).value
        j = gamma.jfactor(tau)
        lhs = theta_eval(z / j, gamma.act(tau), ctx)
        rhs = (rho ** 3 * mpmath.sqrt(j)
               * mpmath.exp(1j * mpmath.pi * gamma.c * z ** 2 / j)
               * theta_eval(z, tau, ctx))
        return abs(lhs - rhs)


def check_phi_transform(gamma: GammaMatrix, z, tau, m: int,
                        ctx: Optional[EvalContext] = None):
    """Residual of phi(z/(ctau+d); gamma tau) = psi(gamma) phi(z;tau)."""
    ctx = ctx or EvalContext()
    gamma = gamma.canonical()
    with ctx.workdps():
        z = mpmath.mpc(z)
        tau = mpmath.mpc(tau)
        j = gamma.jfactor(tau)
        lhs = phi_eval(z / j, gamma.act(tau), m, ctx)
        rhs = psi_char(gamma, m) * phi_eval(z, tau, m, ctx)
        return abs(lhs - rhs)


def check_phi_elliptic(z, tau, lam: int, mu: int, m: int,
                       ctx: Optional[EvalContext] = None):
    """Residual of phi(z + lam*tau + mu) = phi(z)."""
    ctx = ctx or EvalContext()
    with ctx.workdps():
        z = mpmath.mpc(z)
        tau = mpmath.mpc(tau)
        lhs = phi_eval(z + lam * tau + mu, tau, m, ctx)
        return abs(lhs - phi_eval(z, tau, m, ctx))


def _d_series(m: int, j: int, order: int) -> QSeries:
    return decomposition.extract_D(m, order).D[j]


def check_D_transform(j: int, gamma: GammaMatrix, tau, m: int,
                      ctx: Optional[EvalContext] = None):
    """Residual of D_{2j}(gamma tau) = psi(gamma) (ctau+d)^{-2j} D_{2j}(tau)."""
    ctx = ctx or EvalContext()
    gamma = gamma.canonical()
    with ctx.workdps():
        tau = mpmath.mpc(tau)
        builder = lambda o: _d_series(m, j, o)
        lhs = eval_adaptive(builder, gamma.act(tau), ctx)
        rhs = (psi_char(gamma, m) * gamma.jfactor(tau) ** (-2 * j)
               * eval_adaptive(builder, tau, ctx))
        return abs(lhs - rhs)


def check_completed_parts(gamma: GammaMatrix, tau, m: int, z=None,
                   ctx: Optional[EvalContext] = None) -> dict:
    """Residuals for the completed finite and polar parts.

    Returns a dict with:
      fhat: |phiFhat(gamma tau) - psi(gamma) phiFhat(tau)| where
            phiFhat = phiF - D2/(4 pi v)
      f_uncompleted: the same residual without the 1/v correction (the
            negative control; it must be large for c != 0)
      phat: residual of the weight-0 index-0 law for phiPhat = (phi - phiF)
            + D2/(4 pi v), at the supplied z (skipped when z is None)
    """
    ctx = ctx or EvalContext()
    gamma = gamma.canonical()
    with ctx.workdps():
        tau = mpmath.mpc(tau)
        tau2 = gamma.act(tau)
        psi = psi_char(gamma, m)
        phiF = lambda t: eval_adaptive(lambda o: decomposition.phi_finite(m, o), t, ctx)
        d2 = lambda t: eval_adaptive(lambda o: _d_series(m, 1, o), t, ctx)
        corr = lambda t: d2(t) / (4 * mpmath.pi * mpmath.mpc(t).imag)
        f1 = phiF(tau) - corr(tau)
        f2 = phiF(tau2) - corr(tau2)
        out = {
            "fhat": abs(f2 - psi * f1),
            "f_uncompleted": abs(phiF(tau2) - psi * phiF(tau)),
        }
        if z is not None:
            z = mpmath.mpc(z)
            jf = gamma.jfactor(tau)
            p1 = phi_eval(z, tau, m, ctx) - phiF(tau) + corr(tau)
            p2 = phi_eval(z / jf, tau2, m, ctx) - phiF(tau2) + corr(tau2)
            out["phat"] = abs(p2 - psi * p1)
        return out
