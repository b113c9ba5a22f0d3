"""Command-line client for the service surface.

By default commands run against an in-process application instance, so no
server is needed and the process stays self-contained; --server points the
same commands at a running instance over HTTP instead.  Output is a plain
human rendering, or with --json a single RunReport document:

    {"command": ..., "parameters": ..., "results": [...], "checks": [...]}

Exit codes: 0 clean, 1 any failed check, 2 usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import DEFAULT_PRECISION, PRECISION_ENV, __version__

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return max(15, int(raw))
    except ValueError:
        return DEFAULT_PRECISION


class Transport:
    """POSTs JSON to either the in-process app or a remote server."""

    def __init__(self, server: Optional[str] = None):
        self.server = server.rstrip("/") if server else None
        self._client = None

    def post(self, path: str, payload: dict):
        if self.server:
            import httpx
            resp = httpx.post(self.server + path, json=payload, timeout=600.0)
            return resp.status_code, resp.json()
        if self._client is None:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient
            from .service import app
            self._client = TestClient(app)
        resp = self._client.post(path, json=payload)
        return resp.status_code, resp.json()


def _exp_str(n: int, d: int) -> str:
    e = Fraction(n, d)
    if e == 0:
        return ""
    if e == 1:
        return "q"
    if e.denominator == 1:
        return "q^%d" % e.numerator
    return "q^(%s)" % e


def render_series(obj: dict, max_terms: int = 12) -> str:
    terms = obj["terms"]
    d = obj["exp_denom"]
    if not terms:
        return "0  (trusted below %s)" % Fraction(obj["trunc"], d)
    parts = []
    for n, c in terms[:max_terms]:
        mono = _exp_str(n, d)
        if not mono:
            text = c
        elif c == "1":
            text = mono
        elif c == "-1":
            text = "-" + mono
        else:
            text = "%s*%s" % (c, mono)
        if parts:
            if text.startswith("-"):
                parts.append("- " + text[1:])
            else:
                parts.append("+ " + text)
        else:
            parts.append(text)
    more = len(terms) - max_terms
    if more > 0:
        parts.append("+ ... (%d more terms)" % more)
    return "%s  (trusted below q^(%s))" % (" ".join(parts), Fraction(obj["trunc"], d))


def _print_checks(checks: list) -> None:
    for c in checks:
        mark = "PASS" if c["status"] == "pass" else c["status"].upper()
        detail = (" - " + c["detail"]) if c.get("detail") else ""
        print("  [%s] %s%s" % (mark, c["name"], detail))


def _report(command: str, parameters: dict, results: list, checks: list) -> dict:
    return {"command": command, "parameters": parameters,
            "results": results, "checks": checks}


def _emit(report: dict, as_json: bool) -> int:
    failed = [c for c in report["checks"] if c["status"] != "pass"]
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        for r in report["results"]:
            if "series" in r:
                print("%s: %s" % (r["name"], render_series(r["series"])))
            else:
                print("%s: %s" % (r["name"], r.get("value", "")))
        if report["checks"]:
            _print_checks(report["checks"])
            n = len(report["checks"])
            print("%d/%d checks passed" % (n - len(failed), n))
    return EXIT_FAIL if failed else EXIT_OK


def _pair(text: str, kind=float):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated values")
    return tuple(kind(p) for p in parts)


def _quad(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected a,b,c,d")
    return tuple(int(p) for p in parts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kwq",
                                description="exact characters, Laurent data and "
                                            "cusp asymptotics of the theta quotient")
    p.add_argument("--version", action="version", version="kwq " + __version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, prec=False):
        sp.add_argument("--json", action="store_true", help="emit one JSON document")
        sp.add_argument("--server", metavar="URL", default=None,
                        help="talk to a running service instead of in-process")
        if prec:
            sp.add_argument("--prec", type=int, default=None,
                            help="working precision in digits (default %s or $%s)"
                                 % (DEFAULT_PRECISION, PRECISION_ENV))

    sp = sub.add_parser("dcoeffs", help="Laurent coefficient series D_0, D_2, ...")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    common(sp)

    sp = sub.add_parser("chi", help="pole-sum coefficient series (finite part at r=0)")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    common(sp)

    sp = sub.add_parser("character", help="character or trace q-series")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--chf", action="store_true", help="bare character (default)")
    g.add_argument("--trace", action="store_true", help="multiply in the Euler product")
    common(sp)

    sp = sub.add_parser("oracle-verify", help="compare characters against the product oracle")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--rmax", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    common(sp)

    sp = sub.add_parser("theta-identities", help="exact theta special-value identities")
    sp.add_argument("--order", type=int, required=True)
    common(sp)

    sp = sub.add_parser("euler", help="generalized Euler number table with quadrature deltas")
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--mmax", type=int, required=True)
    common(sp, prec=True)

    sp = sub.add_parser("asympt", help="cusp expansion vs direct evaluation at tau = it")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--t", type=str, required=True, help="rational like 1/10, or decimal")
    sp.add_argument("--N", type=int, required=True)
    common(sp, prec=True)

    sp = sub.add_parser("transform-check", help="numerical transformation-law residuals")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--gamma", type=_quad, default=None, metavar="a,b,c,d")
    sp.add_argument("--tau", type=_pair, default=None, metavar="re,im")
    sp.add_argument("--z", type=_pair, default=None, metavar="re,im")
    sp.add_argument("--seed", type=int, default=0)
    common(sp, prec=True)

    sp = sub.add_parser("verify-all", help="run the full verification battery")
    sp.add_argument("--fast", action="store_true", help="reduced depths, same coverage")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    return p


def _series_results(named: list) -> list:
    return [{"name": name, "series": series} for name, series in named]


def _run(args) -> int:
    tp = Transport(getattr(args, "server", None))
    cmd = args.command
    prec = getattr(args, "prec", None) or _default_precision()

    if cmd == "dcoeffs":
        payload = {"m": args.m, "order": args.order}
        status, body = tp.post("/dcoeffs", payload)
        if status != 200:
            return _client_error(status, body)
        results = _series_results(sorted(body["coefficients"].items(),
                                         key=lambda kv: int(kv[0][1:])))
        return _emit(_report(cmd, payload, results, []), args.json)

    if cmd == "chi":
        payload = {"m": args.m, "r": args.r, "order": args.order}
        status, body = tp.post("/chi", payload)
        if status != 200:
            return _client_error(status, body)
        name = "phi_finite" if args.r == 0 else "chi_%d" % args.r
        return _emit(_report(cmd, payload, _series_results([(name, body["series"])]), []),
                     args.json)

    if cmd == "character":
        kind = "trace" if args.trace else "chf"
        payload = {"m": args.m, "r": args.r, "order": args.order, "kind": kind}
        status, body = tp.post("/character", payload)
        if status != 200:
            return _client_error(status, body)
        name = "%s_%d" % (kind, args.r)
        return _emit(_report(cmd, payload, _series_results([(name, body["series"])]), []),
                     args.json)

    if cmd == "oracle-verify":
        payload = {"m": args.m, "rmax": args.rmax, "order": args.order}
        status, body = tp.post("/oracle-verify", payload)
        if status != 200:
            return _client_error(status, body)
        return _emit(_report(cmd, payload, [], [c for c in body["checks"]]), args.json)

    if cmd == "theta-identities":
        payload = {"order": args.order}
        status, body = tp.post("/theta-identities", payload)
        if status != 200:
            return _client_error(status, body)
        return _emit(_report(cmd, payload, [], body["checks"]), args.json)

    if cmd == "euler":
        payload = {"kmax": args.kmax, "mmax": args.mmax, "prec": prec, "oracle": True}
        status, body = tp.post("/euler", payload)
        if status != 200:
            return _client_error(status, body)
        results = [{"name": "E[%d,%d]" % (e["k"], e["m"]),
                    "value": "%s = %s (quadrature delta %s)"
                             % (e["exact"], e["value"], e["oracle_delta"]),
                    "exact": e["exact"], "numeric": e["value"],
                    "oracle_delta": e["oracle_delta"]}
                   for e in body["entries"]]
        checks = [{"name": "quadrature agreement", "detail": "",
                   "status": "pass" if body["passed"] else "fail"}]
        return _emit(_report(cmd, payload, results, checks), args.json)

    if cmd == "asympt":
        payload = {"m": args.m, "r": args.r, "t": args.t, "N": args.N, "prec": prec}
        status, body = tp.post("/asympt", payload)
        if status != 200:
            return _client_error(status, body)
        results = [{"name": k, "value": body[k]}
                   for k in ("asymptotic", "direct", "prefactor", "defect")]
        return _emit(_report(cmd, payload, results, []), args.json)

    if cmd == "transform-check":
        payload = {"m": args.m, "prec": prec, "seed": args.seed}
        if args.gamma:
            payload["gamma"] = list(args.gamma)
        if args.tau:
            payload["tau"] = list(args.tau)
        if args.z:
            payload["z"] = list(args.z)
        status, body = tp.post("/transform-check", payload)
        if status != 200:
            return _client_error(status, body)
        return _emit(_report(cmd, payload, [], body["checks"]), args.json)

    if cmd == "verify-all":
        payload = {"fast": bool(args.fast), "seed": args.seed}
        status, body = tp.post("/verify-all", payload)
        if status != 200:
            return _client_error(status, body)
        checks = []
        for crit in body["criteria"]:
            for c in crit["checks"]:
                checks.append({"name": "c%02d/%s" % (crit["id"], c["name"]),
                               "status": c["status"], "detail": c["detail"]})
        if not args.json:
            for crit in body["criteria"]:
                print("%s criterion %2d: %s (%.1fs, %d checks)"
                      % ("PASS" if crit["passed"] else "FAIL", crit["id"],
                         crit["title"], crit["elapsed"], len(crit["checks"])))
                if not crit["passed"]:
                    _print_checks([c for c in crit["checks"] if c["status"] != "pass"])
            print("overall: %s in %.1fs" % ("PASS" if body["passed"] else "FAIL",
                                            body["elapsed"]))
            return EXIT_OK if body["passed"] else EXIT_FAIL
        return _emit(_report(cmd, payload, [], checks), True)

    if cmd == "serve":
        import uvicorn
        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    raise AssertionError("unhandled command %r" % cmd)


def _client_error(status: int, body) -> int:
    detail = body.get("detail", body) if isinstance(body, dict) else body
    if status in (400, 422):
        print("kwq: invalid request: %s" % json.dumps(detail), file=sys.stderr)
        return EXIT_USAGE
    print("kwq: service error %d: %s" % (status, json.dumps(detail)), file=sys.stderr)
    return EXIT_INTERNAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (BrokenPipeError, KeyboardInterrupt):
        return EXIT_INTERNAL
    except SystemExit:
        raise
    except Exception as exc:  # surface anything unexpected as exit 3
        print("kwq: internal error: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
