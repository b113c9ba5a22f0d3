"""HTTP service exposing the computation and verification surface.

Every endpoint is a POST taking a pydantic request model; exact series are
returned in the rational wire format.  Domain errors (bad parameters that
pass schema validation but fail the library's own preconditions) map to
400; schema violations are FastAPI's usual 422.

Calls into the computational modules always go through the module
attribute so a monkeypatched builder propagates, which the verification
endpoints rely on.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__, asymptotics, decomposition, modular, numeric, verify
from ..numeric import EvalContext, GammaMatrix
from ..series import pi_eval, pi_to_string, qs_first_mismatch
from . import schemas as S


def _nstr(x, prec: int) -> str:
    return mpmath.nstr(x, prec, strip_zeros=False)


def _sorted_checks(checks):
    return sorted(checks, key=lambda c: c.name)


def _battery_checks(report: dict):
    out = []
    for c in report["checks"]:
        out.append(S.check_from_flag(c["name"], c["passed"], c["detail"]))
    return _sorted_checks(out)


def create_app() -> FastAPI:
    app = FastAPI(title="kwq service", version=__version__)

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/dcoeffs", response_model=S.DcoeffsResponse)
    def dcoeffs(req: S.DcoeffsRequest):
        exp = decomposition.extract_D(req.m, req.order)
        coeffs = {"D%d" % (2 * j): S.SeriesModel.from_qseries(s)
                  for j, s in sorted(exp.D.items())}
        return S.DcoeffsResponse(m=req.m, order=req.order, coefficients=coeffs)

    @app.post("/chi", response_model=S.ChiResponse)
    def chi(req: S.ChiRequest):
        if req.r == 0:
            series = decomposition.phi_finite(req.m, req.order)
        else:
            series = decomposition.chi(req.m, req.r, req.order)
        return S.ChiResponse(m=req.m, r=req.r, order=req.order,
                             series=S.SeriesModel.from_qseries(series))

    @app.post("/character", response_model=S.CharacterResponse)
    def character(req: S.CharacterRequest):
        if req.kind == "trace":
            cs = decomposition.character(req.m, req.r, req.order)
        else:
            cs = decomposition.chF(req.m, req.r, req.order)
        return S.CharacterResponse(m=req.m, r=req.r, order=req.order, kind=req.kind,
                                   series=S.SeriesModel.from_qseries(cs.series))

    @app.post("/oracle-verify", response_model=S.OracleVerifyResponse)
    def oracle_verify(req: S.OracleVerifyRequest):
        oracle = decomposition.kw_product_oracle(req.m, req.order)
        checks = []
        for r in range(-req.rmax, req.rmax + 1):
            got = decomposition.chF(req.m, r, req.order).series
            want = oracle.term(r)
            mism = qs_first_mismatch(got, want)
            checks.append(S.check_from_flag(
                "zeta^%+d" % r, mism is None,
                "agrees on common range" if mism is None
                else "first mismatch %s" % (mism,)))
        checks = _sorted_checks(checks)
        return S.OracleVerifyResponse(m=req.m, rmax=req.rmax, order=req.order,
                                      passed=all(c.status == "pass" for c in checks),
                                      checks=checks)

    @app.post("/theta-identities", response_model=S.ThetaIdentitiesResponse)
    def theta_identities(req: S.ThetaIdentitiesRequest):
        checks = []
        for rep in modular.theta_log_derivative_checks(req.order):
            checks.append(S.check_from_flag(
                rep["name"], rep["status"] == "pass",
                rep["first_mismatch"] or rep["verified_below"]))
        checks = _sorted_checks(checks)
        return S.ThetaIdentitiesResponse(order=req.order,
                                         passed=all(c.status == "pass" for c in checks),
                                         checks=checks)

    @app.post("/euler", response_model=S.EulerResponse)
    def euler(req: S.EulerRequest):
        entries = []
        passed = True
        for k in range(req.kmax + 1):
            for m in range(1, req.mmax + 1):
                val = asymptotics.gen_euler(k, m).value
                entry = S.EulerEntry(k=k, m=m, exact=pi_to_string(val),
                                     value=_nstr(pi_eval(val, req.prec), req.prec))
                if req.oracle:
                    quad = asymptotics.quadrature_oracle(k, m, req.prec)
                    delta = abs(pi_eval(val, req.prec + 10) - quad)
                    entry.oracle_delta = _nstr(delta, 5)
                    scale = abs(quad) if quad else mpmath.mpf(1)
                    if delta > mpmath.mpf(10) ** (-(req.prec - 5)) * scale:
                        passed = False
                entries.append(entry)
        return S.EulerResponse(kmax=req.kmax, mmax=req.mmax, passed=passed,
                               entries=entries)

    @app.post("/asympt", response_model=S.AsymptResponse)
    def asympt(req: S.AsymptRequest):
        t = Fraction(req.t)
        if t <= 0:
            raise ValueError("t must be positive")
        prec = req.prec
        asy = asymptotics.asymptotic_value(req.m, req.r, t, req.N, prec)
        direct = asymptotics.trace_direct(req.m, req.r, t, prec)
        pref = asymptotics.prefactor(req.m, t, prec)
        defect = abs(direct - asy) / pref
        return S.AsymptResponse(m=req.m, r=req.r, t=str(t), N=req.N, prec=prec,
                                asymptotic=_nstr(asy, prec), direct=_nstr(direct, prec),
                                prefactor=_nstr(pref, prec), defect=_nstr(defect, 8))

    @app.post("/transform-check", response_model=S.TransformCheckResponse)
    def transform_check(req: S.TransformCheckRequest):
        prec = req.prec
        tol = mpmath.mpf(10) ** (-min(20, prec - 15))
        ctx = EvalContext(precision=prec)
        checks = []
        if req.gamma or req.tau or req.z:
            gamma = GammaMatrix(*(req.gamma or (1, 0, 2, 1)))
            tau = complex(*(req.tau or (0.3, 0.8)))
            z = complex(*(req.z or (0.21, 0.09)))
            r = numeric.check_theta_modular(gamma, z, tau, ctx)
            checks.append(S.check_from_flag("theta law", r < tol, _nstr(r, 4)))
            if gamma.in_gamma0_2():
                r = numeric.check_phi_transform(gamma, z, tau, req.m, ctx)
                checks.append(S.check_from_flag("phi law", r < tol, _nstr(r, 4)))
                for j in range(req.m // 2 + 1):
                    r = numeric.check_D_transform(j, gamma, tau, req.m, ctx)
                    checks.append(S.check_from_flag("D_%d law" % (2 * j), r < tol,
                                                    _nstr(r, 4)))
                out = numeric.check_completed_parts(gamma, tau, req.m, z=z, ctx=ctx)
                checks.append(S.check_from_flag("completed finite part",
                                                out["fhat"] < tol, _nstr(out["fhat"], 4)))
                checks.append(S.check_from_flag("completed polar part",
                                                out["phat"] < tol, _nstr(out["phat"], 4)))
                if gamma.canonical().c != 0:
                    checks.append(S.check_from_flag(
                        "negative control (uncompleted must break)",
                        out["f_uncompleted"] > mpmath.mpf("1e-6"),
                        _nstr(out["f_uncompleted"], 4)))
            r = numeric.check_phi_elliptic(z, tau, 1, 1, req.m, ctx)
            checks.append(S.check_from_flag("elliptic shift", r < tol, _nstr(r, 4)))
            checks = _sorted_checks(checks)
        else:
            report = verify.criterion_9(fast=(prec < 50), seed=req.seed)
            checks = _battery_checks(report)
        return S.TransformCheckResponse(m=req.m, prec=prec,
                                        passed=all(c.status == "pass" for c in checks),
                                        checks=checks)

    @app.post("/verify-all", response_model=S.VerifyAllResponse)
    def verify_all(req: S.VerifyAllRequest):
        report = verify.run_all(fast=req.fast, seed=req.seed)
        criteria = []
        for c in report["criteria"]:
            criteria.append(S.CriterionModel(
                id=c["id"], title=c["title"], passed=c["passed"],
                elapsed=c["elapsed"], checks=_battery_checks(c)))
        return S.VerifyAllResponse(passed=report["passed"], fast=report["fast"],
                                   seed=report["seed"], elapsed=report["elapsed"],
                                   criteria=criteria)

    return app


app = create_app()
