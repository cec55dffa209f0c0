"""Command-line interface.

Negative parameters are accepted directly (``bsrinf degree 1 -2``); put
``--`` before the positionals if a shell wrapper mangles them.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .abelian import DEFAULT_AUTOMORPHISM_CAP, AbHom, element_order
from .degree import DEFAULT_C_MAX, SWEEP_C_MAX, closed_form_degree, cross_check, search_degree
from .errors import BoundExceeded, Inconsistency, InvalidInput, NotBijective, NotHomomorphism
from .gcgroup import BSParams, build_gc, lower_central_series
from .intlinalg import IntMatrix
from .twisted import default_oracle_cap, gc_has_rinf, make_automorphism, reidemeister_number, reidemeister_oracle
from .verify import SCOPES, run_scope

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


def _record(command: str, query: dict, result, started: float | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "query": query,
        "result": result,
        "timing_ms": None if started is None else round((time.perf_counter() - started) * 1000, 3),
    }


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2)


def _params(m: int, n: int) -> BSParams:
    return BSParams.of(m, n)


def _degree_payload(params: BSParams, method: str, c_max: int, aut_cap: int) -> dict:
    if method == "closed":
        res = closed_form_degree(params)
    elif method == "search":
        res = closed_form_degree(params)
        if params.n not in (params.m, -params.m):
            res.search = search_degree(params, c_max, aut_cap=aut_cap)
            res.method = "search"
    else:
        res = cross_check(params, c_max, aut_cap=aut_cap).closed_form
    return res.as_dict()


def _degree_text(d: dict) -> str:
    p = d["params"]
    head = f"BS({p['m']},{p['n']})"
    if p.get("canonicalized"):
        head += f" [from input {tuple(p['input'])}]"
    if d["kind"] == "exact":
        body = f"Exact {d['value']}"
    elif d["kind"] == "infinite":
        body = "Infinite"
    else:
        body = f"Interval [{d['lower']},{d['upper']}]"
    parts = [head, body, f"case {d['case']}"]
    if "p" in d:
        parts.append(f"p={d['p']}")
    if "search" in d:
        s = d["search"]
        parts.append(f"search {'c=' + str(s['value']) if s['kind'] == 'exact' else 'none up to ' + str(s['c_max'])}")
    return "  ".join(parts)


def cmd_degree(args) -> int:
    started = time.perf_counter() if args.timing else None
    params = _params(args.m, args.n)
    payload = _degree_payload(params, args.method, args.c_max, args.aut_cap)
    rec = _record("degree", {"m": args.m, "n": args.n, "method": args.method, "c_max": args.c_max}, payload, started)
    print(_dump(rec) if args.format == "json" else _degree_text(payload))
    return EXIT_OK


def quotient_payload(m: int, n: int, c: int) -> dict:
    params = _params(m, n)
    g = build_gc(params, c)
    gammas = lower_central_series(g)
    verdict = gc_has_rinf(g)
    return {
        "params": params.as_dict(),
        "c": c,
        "torsion_invariant_factors": list(g.torsion.invariant_factors),
        "torsion_order": g.torsion.order,
        "nu": g.nu,
        "s_order": element_order(g.s),
        "gamma_orders": {str(k + 2): sub.order for k, sub in enumerate(gammas)},
        "rinf": verdict.as_dict(),
    }


def cmd_quotient(args) -> int:
    started = time.perf_counter() if args.timing else None
    payload = quotient_payload(args.m, args.n, args.c)
    rec = _record("quotient", {"m": args.m, "n": args.n, "c": args.c}, payload, started)
    if args.format == "json":
        print(_dump(rec))
    else:
        fs = payload["torsion_invariant_factors"]
        print(f"G_{args.c}({payload['params']['m']},{payload['params']['n']})")
        print(f"  torsion   {fs if fs else 'trivial'} (order {payload['torsion_order']})")
        if payload["nu"] is not None:
            print(f"  nu        {payload['nu']}")
        for k, order in payload["gamma_orders"].items():
            print(f"  gamma_{k}   order {order}")
        print(f"  R-infinity {payload['rinf']['has_rinf']}")
    return EXIT_OK


def cmd_reidemeister(args) -> int:
    started = time.perf_counter() if args.timing else None
    params = _params(args.m, args.n)
    g = build_gc(params, args.c)
    A = g.torsion
    if args.matrix is not None:
        action = AbHom(A, A, IntMatrix.from_rows(json.loads(args.matrix)))
    else:
        action = args.mu
    beta = A.element(json.loads(args.beta_coords)) if args.beta_coords else args.beta
    query = {"m": args.m, "n": args.n, "c": args.c, "mu": args.mu, "matrix": args.matrix,
             "beta": args.beta, "beta_coords": args.beta_coords, "epsilon": args.eps}
    try:
        phi = make_automorphism(g, action, beta, args.eps)
    except (NotHomomorphism, NotBijective) as exc:
        payload = {"valid": False, "reason": type(exc).__name__, "detail": str(exc)}
        rec = _record("reidemeister", query, payload, started)
        print(_dump(rec) if args.format == "json" else f"invalid: {type(exc).__name__}: {exc}")
        return EXIT_INPUT
    fast = reidemeister_number(phi)
    payload = {"valid": True, "fast": fast.as_dict()}
    cap = args.oracle_cap if args.oracle_cap is not None else default_oracle_cap()
    if A.order <= cap:
        slow = reidemeister_oracle(phi, cap)
        payload["oracle"] = slow.as_dict()
        payload["agree"] = slow == fast
    rec = _record("reidemeister", query, payload, started)
    if args.format == "json":
        print(_dump(rec))
    else:
        line = f"{g.label} eps={args.eps:+d}: {fast}"
        if "oracle" in payload:
            line += ", oracle agrees" if payload["agree"] else ", ORACLE DISAGREES"
        print(line)
    if payload.get("agree") is False:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter() if args.timing else None
    kwargs = {"max_n": args.max_n, "max_c": args.max_c, "samples": args.samples, "seed": args.seed,
              "max_order": args.max_order, "c_max": args.c_max}
    checks = run_scope(args.scope, **kwargs)
    payload = {"checks": [c.as_dict() for c in checks], "passed": all(c.passed for c in checks)}
    rec = _record("verify", {"scope": args.scope, **{k: v for k, v in kwargs.items() if v is not None}}, payload, started)
    if args.format == "json":
        print(_dump(rec))
    else:
        for c in checks:
            print(c.line())
    return EXIT_OK if payload["passed"] else EXIT_VERIFY


SWEEP_COLUMNS = ["m", "n", "d", "case", "kind", "value", "lower", "upper", "p", "search", "gc_threshold"]


def _sweep_row(job) -> dict:
    m, n, c_max, aut_cap = job
    params = BSParams(m, n)
    rep = cross_check(params, c_max, aut_cap=aut_cap)
    d = rep.closed_form.as_dict()
    return {
        "m": m, "n": n, "d": params.d, "case": d["case"], "kind": d["kind"],
        "value": d.get("value"), "lower": d.get("lower"), "upper": d.get("upper"),
        "p": d.get("p"), "search": d["search"]["kind"] if "search" in d else None,
        "gc_threshold": d.get("gc_threshold"),
    }


def sweep_rows(m_max: int, n_max: int, c_max: int = SWEEP_C_MAX, aut_cap: int = DEFAULT_AUTOMORPHISM_CAP,
               workers: int = 1) -> list[dict]:
    """One row per canonical pair with ``m <= m_max`` and ``|n| <= n_max``,
    sorted by ``(m, n)``."""
    jobs = sorted(
        (m, n, c_max, aut_cap)
        for an in range(1, n_max + 1)
        for n in (an, -an)
        for m in range(1, min(m_max, an) + 1)
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_row, jobs))
    return [_sweep_row(j) for j in jobs]


def _fmt(v) -> str:
    return "" if v is None else str(v)


def render_sweep(rows: list[dict], fmt: str, record: dict) -> str:
    if fmt == "json":
        return _dump(record) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in SWEEP_COLUMNS])
        return buf.getvalue()
    lines = ["| " + " | ".join(SWEEP_COLUMNS) + " |", "|" + "---|" * len(SWEEP_COLUMNS)]
    for r in rows:
        lines.append("| " + " | ".join(_fmt(r[k]) for k in SWEEP_COLUMNS) + " |")
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    started = time.perf_counter() if args.timing else None
    rows = sweep_rows(args.m_max, args.n_max, args.c_max, args.aut_cap, args.workers)
    rec = _record("sweep", {"m_max": args.m_max, "n_max": args.n_max, "c_max": args.c_max}, {"rows": rows}, started)
    text = render_sweep(rows, args.format, rec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _eps(text: str) -> int:
    value = int(text)
    if value not in (1, -1):
        raise argparse.ArgumentTypeError("epsilon must be +1 or -1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsrinf", description="R-infinity nilpotency degrees of Baumslag-Solitar groups")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true", help="fill in timing_ms (makes output non-deterministic)")
    common.add_argument("--aut-cap", type=int, default=DEFAULT_AUTOMORPHISM_CAP,
                        help="candidate cap for brute-force automorphism enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degree", parents=[common], help="R-infinity nilpotency degree of BS(m,n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--method", choices=["closed", "search", "both"], default="closed")
    p.add_argument("--c-max", type=int, default=DEFAULT_C_MAX)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("quotient", parents=[common], help="structure of G_c(m,n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("c", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("reidemeister", parents=[common], help="Reidemeister number of an automorphism of G_c(m,n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("c", type=int)
    p.add_argument("--mu", type=int, default=1, help="act on the torsion by multiplication by mu")
    p.add_argument("--matrix", help="JSON matrix in invariant-factor coordinates (overrides --mu)")
    p.add_argument("--beta", type=int, default=0, help="t maps to (beta*s) t^eps")
    p.add_argument("--beta-coords", help="JSON coordinates of beta (overrides --beta)")
    p.add_argument("--eps", type=_eps, default=-1)
    p.add_argument("--oracle-cap", type=int, default=None,
                   help="largest torsion order for the brute-force oracle (env BSRINF_ORACLE_CAP)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_reidemeister)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("scope", choices=["all", *SCOPES], nargs="?", default="all")
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-c", type=int)
    p.add_argument("--max-order", type=int)
    p.add_argument("--c-max", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="degree table over a parameter range")
    p.add_argument("m_max", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("--c-max", type=int, default=SWEEP_C_MAX)
    p.add_argument("--format", choices=["json", "csv", "md"], default="md")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except Inconsistency as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InvalidInput, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
