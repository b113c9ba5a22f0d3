"""End-to-end verification battery.

Each criterion function exercises one acceptance area and returns a
structured report: an id, a pass flag, and named sub-checks with a short
human detail string.  run_all collects them; the service and CLI layers
render the result and map it to an exit code.

All calls into the computational modules go through module attributes so
that an injected perturbation (tests monkeypatching, e.g., the Eisenstein
builder) propagates into the battery.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import mpmath

from . import asymptotics, decomposition, modular, numeric
from .numeric import EvalContext, GammaMatrix
from .series import (
    QSeries, qs_add, qs_first_mismatch, qs_scale, zs_first_mismatch, pi_eval,
)


def _check(name: str, passed: bool, detail: str = "") -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _finish(cid: int, title: str, checks: list, t0: float) -> dict:
    return {
        "id": cid,
        "title": title,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "elapsed": round(time.time() - t0, 3),
    }


def criterion_1(fast: bool = False) -> dict:
    """Product oracle vs the assembled characters, both m values, |r| <= 5."""
    t0 = time.time()
    order = 10 if fast else 20
    rmax = 3 if fast else 5
    checks = []
    for m in (2, 4):
        oracle = decomposition.kw_product_oracle(m, order)
        for r in range(-rmax, rmax + 1):
            got = decomposition.chF(m, r, order).series
            want = oracle.term(r)
            mism = qs_first_mismatch(got, want)
            common = min(got.trunc / got.exp_denom, want.trunc / want.exp_denom)
            ok = mism is None and common >= order
            checks.append(_check(
                "m=%d r=%d" % (m, r), ok,
                "agrees below q^%s" % common if ok else "first mismatch %s" % (mism,)))
    return _finish(1, "character generating function vs product oracle", checks, t0)


def criterion_2(fast: bool = False) -> dict:
    t0 = time.time()
    order = 24 if fast else 50
    got = decomposition.extract_D(2, order)
    want = decomposition.example_D(2, order).D
    checks = []
    for j in (0, 1):
        mism = qs_first_mismatch(got.D[j], want[j])
        checks.append(_check("D_%d" % (2 * j), mism is None,
                             "exact to q^%d" % (order - 1) if mism is None
                             else "first mismatch %s" % (mism,)))
    return _finish(2, "m=2 Laurent coefficients vs closed forms", checks, t0)


def criterion_3(fast: bool = False) -> dict:
    t0 = time.time()
    order = 16 if fast else 30
    got = decomposition.extract_D(4, order)
    want = decomposition.example_D(4, order).D
    checks = []
    for j in (0, 1, 2):
        mism = qs_first_mismatch(got.D[j], want[j])
        checks.append(_check("D_%d" % (2 * j), mism is None,
                             "exact to q^%d" % (order - 1) if mism is None
                             else "first mismatch %s" % (mism,)))
    return _finish(3, "m=4 Laurent coefficients vs closed forms", checks, t0)


def criterion_4(fast: bool = False) -> dict:
    t0 = time.time()
    order = 41 if fast else 101
    a = modular.theta_zeta(order)
    b = modular.theta_product(order)
    mism = zs_first_mismatch(a, b)
    checks = [_check("series vs product", mism is None,
                     "exact to q^%d" % (order - 1) if mism is None
                     else "first mismatch at %s" % (mism,))]
    return _finish(4, "theta series vs triple product", checks, t0)


def criterion_5(fast: bool = False) -> dict:
    t0 = time.time()
    order = 31 if fast else 51
    checks = []
    for rep in modular.theta_log_derivative_checks(order):
        checks.append(_check(rep["name"], rep["status"] == "pass",
                             rep["first_mismatch"] or rep["verified_below"]))
    return _finish(5, "theta special values and log-derivative identities", checks, t0)


def criterion_6(fast: bool = False) -> dict:
    """2 sum_{r,l>0} l^{2j-1} q^{rl} = (B_{2j}/2j)(1 - E_{2j}), brute LHS."""
    t0 = time.time()
    order = 24 if fast else 51
    checks = []
    for j in range(1, 5):
        lhs_terms = {}
        for r in range(1, order):
            for l in range(1, order // r + 1):
                n = r * l
                if n < order:
                    lhs_terms[n] = lhs_terms.get(n, Fraction(0)) + 2 * Fraction(l) ** (2 * j - 1)
        lhs = QSeries(1, lhs_terms, order)
        b = modular.bernoulli_number(2 * j) / (2 * j)
        one = QSeries(1, {0: Fraction(1)}, order)
        rhs = qs_scale(qs_add(one, qs_scale(modular.eisenstein(j, order), -1)), b)
        mism = qs_first_mismatch(lhs, rhs)
        checks.append(_check("j=%d" % j, mism is None,
                             "exact to q^%d" % (order - 1) if mism is None
                             else "first mismatch %s" % (mism,)))
    return _finish(6, "double divisor sum vs Eisenstein", checks, t0)


def criterion_7(fast: bool = False) -> dict:
    t0 = time.time()
    checks = []
    worst = mpmath.mpf(0)
    ok = True
    for k in (0, 2, 4, 6, 8):
        for m in range(1, 7):
            exact = pi_eval(asymptotics.gen_euler(k, m).value, 40)
            quad = asymptotics.quadrature_oracle(k, m, 30)
            rel = abs(exact - quad) / abs(exact)
            worst = max(worst, rel)
            if rel > mpmath.mpf("1e-10"):
                ok = False
                checks.append(_check("quadrature k=%d m=%d" % (k, m), False,
                                     "rel err %s" % mpmath.nstr(rel, 5)))
    checks.insert(0, _check("recurrence vs quadrature", ok,
                            "worst rel err %s" % mpmath.nstr(worst, 5)))
    spots = [
        ("E_{0,3} = 1/2", asymptotics.gen_euler(0, 3).value.coeffs == {0: Fraction(1, 2)}),
        ("E_{2,1} = 1/4", asymptotics.gen_euler(2, 1).value.coeffs == {0: Fraction(1, 4)}),
        ("E_{2,2} = 1/(6 pi)", asymptotics.gen_euler(2, 2).value.coeffs == {1: Fraction(1, 6)}),
    ]
    for name, okv in spots:
        checks.append(_check(name, okv))
    odd_ok = all(asymptotics.gen_euler(k, m).value.is_zero()
                 for k in (1, 3, 5, 7) for m in range(1, 7))
    checks.append(_check("odd k exactly zero", odd_ok))
    return _finish(7, "generalized Euler numbers vs quadrature", checks, t0)


def criterion_8(fast: bool = False) -> dict:
    """Order of convergence of the cusp expansion, m=2, N=4.

    For r=1 the defect shrinks by ~2^{N+1} when t halves: the ratio
    defect(0.1)/defect(0.05) must land in [16, 64].  For r=0 every t^k
    correction with k >= 1 vanishes identically (a_k carries a factor r^k),
    so no power-law ratio exists; the battery instead pins the defect to
    the exponentially small remainder scale at both t values, which is the
    convergence content the ratio would otherwise witness.
    """
    t0 = time.time()
    prec = 50
    checks = []
    t_big, t_small = Fraction(1, 10), Fraction(1, 20)
    d1 = asymptotics.asymptotic_defect(2, 1, t_big, 4, prec)
    if fast:
        checks.append(_check("r=1 defect(0.1) small", d1 < mpmath.mpf("1e-4"),
                             "defect %s" % mpmath.nstr(d1, 6)))
    else:
        d2 = asymptotics.asymptotic_defect(2, 1, t_small, 4, prec)
        ratio = d1 / d2
        checks.append(_check("r=1 halving ratio in [16, 64]",
                             16 <= ratio <= 64,
                             "defects %s / %s, ratio %s" % (
                                 mpmath.nstr(d1, 6), mpmath.nstr(d2, 6),
                                 mpmath.nstr(ratio, 6))))
        e1 = asymptotics.asymptotic_defect(2, 0, t_big, 4, prec)
        e2 = asymptotics.asymptotic_defect(2, 0, t_small, 4, prec)
        checks.append(_check("r=0 defect(0.1) at remainder scale",
                             e1 < mpmath.mpf("1e-9"), mpmath.nstr(e1, 6)))
        checks.append(_check("r=0 defect(0.05) at remainder scale",
                             e2 < mpmath.mpf("1e-18"), mpmath.nstr(e2, 6)))
    return _finish(8, "cusp expansion order of convergence", checks, t0)


def _jitter_points(seed: int, count: int = 3):
    rnd = random.Random(seed)
    pts = []
    for _ in range(count):
        tau = complex(rnd.uniform(-0.25, 0.25), rnd.uniform(0.55, 0.95))
        z = complex(rnd.uniform(0.18, 0.32), rnd.uniform(0.07, 0.13))
        pts.append((tau, z))
    return pts


def criterion_9(fast: bool = False, seed: int = 0) -> dict:
    t0 = time.time()
    prec = 35 if fast else 50
    tol = mpmath.mpf("1e-12") if fast else mpmath.mpf("1e-20")
    ctx = EvalContext(precision=prec)
    gammas = [GammaMatrix(1, 1, 0, 1), GammaMatrix(1, 0, 2, 1), GammaMatrix(3, 1, 2, 1)]
    points = _jitter_points(seed, 1 if fast else 3)
    checks = []
    m = 2
    for pi_, (tau, z) in enumerate(points):
        for g in gammas:
            label = "(%d,%d;%d,%d) pt%d" % (g.a, g.b, g.c, g.d, pi_)
            r1 = numeric.check_theta_modular(g, z, tau, ctx)
            checks.append(_check("theta law " + label, r1 < tol, mpmath.nstr(r1, 4)))
            r2 = numeric.check_phi_transform(g, z, tau, m, ctx)
            checks.append(_check("phi law " + label, r2 < tol, mpmath.nstr(r2, 4)))
            for j in (0, 1):
                r3 = numeric.check_D_transform(j, g, tau, m, ctx)
                checks.append(_check("D_%d law %s" % (2 * j, label), r3 < tol,
                                     mpmath.nstr(r3, 4)))
            out = numeric.check_completed_parts(g, tau, m, z=z, ctx=ctx)
            checks.append(_check("completed finite part " + label,
                                 out["fhat"] < tol, mpmath.nstr(out["fhat"], 4)))
            checks.append(_check("completed polar part " + label,
                                 out["phat"] < tol, mpmath.nstr(out["phat"], 4)))
            if g.c != 0:
                checks.append(_check(
                    "negative control " + label,
                    out["f_uncompleted"] > mpmath.mpf("1e-6"),
                    "uncompleted residual %s" % mpmath.nstr(out["f_uncompleted"], 4)))
        r4 = numeric.check_phi_elliptic(z, tau, 1, 1, m, ctx)
        checks.append(_check("elliptic shift pt%d" % pi_, r4 < tol, mpmath.nstr(r4, 4)))
    return _finish(9, "transformation law battery", checks, t0)


def criterion_10(fast: bool = False) -> dict:
    t0 = time.time()
    order = 15 if fast else 30
    checks = []
    for m in (2, 4):
        for r in range(1, 6):
            a = decomposition.chF(m, r, order).series
            b = decomposition.chF(m, -r, order).series
            mism = qs_first_mismatch(a, b)
            checks.append(_check("m=%d r=%d" % (m, r), mism is None,
                                 "symmetric to q^%d" % (order - 1) if mism is None
                                 else "first mismatch %s" % (mism,)))
    return _finish(10, "reflection symmetry of the characters", checks, t0)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10,
}


def run_all(fast: bool = False, seed: int = 0) -> dict:
    t0 = time.time()
    reports = []
    for cid in sorted(CRITERIA):
        fn = CRITERIA[cid]
        if cid == 9:
            reports.append(fn(fast=fast, seed=seed))
        else:
            reports.append(fn(fast=fast))
    return {
        "passed": all(r["passed"] for r in reports),
        "fast": fast,
        "seed": seed,
        "criteria": reports,
        "elapsed": round(time.time() - t0, 3),
    }
