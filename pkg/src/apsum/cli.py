"""Command-line client for the apsum service.

The CLI performs no computation itself: every subcommand builds a JSON
request and sends it to the service, by default an in-process instance
of the FastAPI app (no network, no daemon), or a remote one when
``--server URL`` is given.  Results are written as canonical JSON, so
identical invocations produce byte-identical output.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 broken
internal invariant.  Errors print a one-line JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .serialize import canonical_json

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class ServiceClient:
    """Thin HTTP client; in-process ASGI unless a server URL is given."""

    def __init__(self, server: str | None = None):
        self._server = server
        self._app = None
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            from .service.app import app

            self._app = app

    def _post_in_process(self, path: str, payload: dict):
        import asyncio

        import httpx

        async def go():
            transport = httpx.ASGITransport(app=self._app, raise_app_exceptions=False)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://apsum", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(go())

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        if self._app is not None:
            response = self._post_in_process(path, payload)
        else:
            response = self._client.post(path, json=payload)
        try:
            body = response.json()
        except ValueError:
            body = {"error": "BadResponse", "message": response.text, "exit_code": 3}
        return response.status_code, body


def _diag(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def _fail_from_response(status: int, body: dict) -> int:
    if "exit_code" in body:
        _diag({"error": body.get("error", "Error"), "message": body.get("message", "")})
        return int(body["exit_code"])
    _diag({"error": "ValidationError", "message": json.dumps(body.get("detail", body))})
    return EXIT_USAGE


def _emit(doc: dict, out: str | None) -> None:
    text = canonical_json(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_family(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _call(client: ServiceClient, path: str, payload: dict, out: str | None) -> int:
    status, body = client.post(path, payload)
    if status != 200:
        return _fail_from_response(status, body)
    _emit(body, out)
    return EXIT_OK


def cmd_construct(client: ServiceClient, args) -> int:
    if args.kind == "explicit":
        payload = {"q": args.q, "mode": args.mode}
        return _call(client, "/construct/explicit", payload, args.out)
    payload = {"n": args.n, "eps": args.eps, "seed": args.seed}
    return _call(client, "/construct/random", payload, args.out)


def cmd_verify(client: ServiceClient, args) -> int:
    if args.check == "sparse":
        payload = {"family": _read_family(args.family), "c": args.C}
        status, body = client.post("/verify/sparse", payload)
        if status != 200:
            return _fail_from_response(status, body)
        _emit(body, args.out)
        if not body["ok"]:
            _diag({"error": "SparsityViolated", "message": f"{len(body['violations'])} set(s) violate C"})
            return EXIT_VERIFICATION
        return EXIT_OK
    if args.check == "coverage":
        payload = {
            "family": _read_family(args.family),
            "exhaustive": args.exhaustive,
            "samples": args.samples,
            "seed": args.seed,
            "threads": args.threads,
        }
        status, body = client.post("/verify/coverage", payload)
        if status != 200:
            return _fail_from_response(status, body)
        _emit(body, args.report)
        if body["covered"] < body["targets_checked"]:
            _diag(
                {
                    "error": "CoverageIncomplete",
                    "message": f"{body['covered']}/{body['targets_checked']} targets covered",
                }
            )
            return EXIT_VERIFICATION
        return EXIT_OK
    payload = {
        "q": args.q,
        "x_max": args.x_max,
        "mode": "sampled" if args.samples else "exhaustive",
        "samples": args.samples,
        "seed": args.seed,
    }
    status, body = client.post("/verify/expansion", payload)
    if status != 200:
        return _fail_from_response(status, body)
    _emit(body, args.out)
    if body["violations"]:
        _diag({"error": "ExpansionViolated", "message": f"{len(body['violations'])} witness(es)"})
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_decompose(client: ServiceClient, args) -> int:
    payload = {"family": _read_family(args.family), "target": args.target}
    return _call(client, "/decompose", payload, args.out)


def cmd_sumset(client: ServiceClient, args) -> int:
    payload = {"family": _read_family(args.family), "below": args.below}
    status, body = client.post("/sumset", payload)
    if status != 200:
        return _fail_from_response(status, body)
    lines = "".join(f"{m}\n" for m in body["members"])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    return EXIT_OK


def cmd_longest_ap(client: ServiceClient, args) -> int:
    if args.file:
        with open(args.file) as fh:
            elements = [tok for tok in fh.read().split() if tok]
        payload = {"elements": elements}
    else:
        payload = {"gen": args.gen, "below": args.below}
    return _call(client, "/longest-ap", payload, args.out)


def _bound_row(client: ServiceClient, n: int, c: int) -> tuple[int, dict]:
    status, body = client.post("/bound", {"n": n, "c": c})
    return status, body


def cmd_bound(client: ServiceClient, args) -> int:
    if args.sweep:
        try:
            lo, hi = (int(part) for part in args.sweep.split(":"))
        except ValueError:
            _diag({"error": "UsageError", "message": "--sweep expects LO:HI"})
            return EXIT_USAGE
        ns = list(range(lo, hi + 1))
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                results = list(pool.map(lambda n: _bound_row(client, n, args.C), ns))
        else:
            results = [_bound_row(client, n, args.C) for n in ns]
        rows = []
        for n, (status, body) in zip(ns, results):
            if status != 200:
                return _fail_from_response(status, body)
            value = int(body["max_length"])
            ratio = (
                f"{math.log2(value) / (n * math.log2(n)):.6f}" if n >= 2 else ""
            )
            rows.append([n, args.C, body["max_length"], ratio])
        target = open(args.csv, "w", newline="") if args.csv else sys.stdout
        try:
            writer = csv.writer(target)
            writer.writerow(["n", "C", "max_length", "log_ratio"])
            writer.writerows(rows)
        finally:
            if args.csv:
                target.close()
        return EXIT_OK
    if args.n is None:
        _diag({"error": "UsageError", "message": "need --n or --sweep"})
        return EXIT_USAGE
    return _call(client, "/bound", {"n": args.n, "c": args.C}, args.out)


def cmd_union_bound(client: ServiceClient, args) -> int:
    return _call(client, "/union-bound", {"n": args.n, "eps": args.eps}, args.out)


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apsum", description=__doc__)
    parser.add_argument("--server", help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="build a set family")
    csub = construct.add_subparsers(dest="kind", required=True)
    cexp = csub.add_parser("explicit", help="quadratic-polynomial construction")
    cexp.add_argument("--q", type=int, required=True)
    cexp.add_argument("--mode", choices=["binary", "base_q"], default="binary")
    cexp.add_argument("--out")
    crand = csub.add_parser("random", help="seeded random construction")
    crand.add_argument("--n", type=int, required=True)
    crand.add_argument("--eps", required=True)
    crand.add_argument("--seed", type=int, required=True)
    crand.add_argument("--out")

    verify = sub.add_parser("verify", help="run a verification")
    vsub = verify.add_subparsers(dest="check", required=True)
    vsp = vsub.add_parser("sparse", help="per-window sparsity of a family")
    vsp.add_argument("--family", required=True)
    vsp.add_argument("--C", type=int, default=None)
    vsp.add_argument("--out")
    vcov = vsub.add_parser("coverage", help="sumset coverage of the digit range")
    vcov.add_argument("--family", required=True)
    group = vcov.add_mutually_exclusive_group(required=True)
    group.add_argument("--exhaustive", action="store_true")
    group.add_argument("--samples", type=int)
    vcov.add_argument("--seed", type=int)
    vcov.add_argument("--threads", type=int, default=1)
    vcov.add_argument("--report")
    vexp = vsub.add_parser("expansion", help="condenser vertex expansion")
    vexp.add_argument("--q", type=int, required=True)
    vexp.add_argument("--x-max", dest="x_max", type=int, default=None)
    vexp.add_argument("--samples", type=int, default=None)
    vexp.add_argument("--seed", type=int, default=None)
    vexp.add_argument("--out")

    dec = sub.add_parser("decompose", help="membership certificate for a target")
    dec.add_argument("--family", required=True)
    dec.add_argument("--target", required=True)
    dec.add_argument("--out")

    ss = sub.add_parser("sumset", help="enumerate sumset members below a bound")
    ss.add_argument("--family", required=True)
    ss.add_argument("--below", required=True)
    ss.add_argument("--out")

    lap = sub.add_parser("longest-ap", help="longest progression in a set")
    lgroup = lap.add_mutually_exclusive_group(required=True)
    lgroup.add_argument("--file")
    lgroup.add_argument("--gen", help="generator 'u^a+v^b'")
    lap.add_argument("--below", help="bound for generated sets")
    lap.add_argument("--out")

    bnd = sub.add_parser("bound", help="max progression length fixpoint")
    bnd.add_argument("--n", type=int)
    bnd.add_argument("--C", type=int, default=2)
    bnd.add_argument("--sweep", help="n range LO:HI, CSV output")
    bnd.add_argument("--csv")
    bnd.add_argument("--threads", type=int, default=1)
    bnd.add_argument("--out")

    ub = sub.add_parser("union-bound", help="failure-probability union bound")
    ub.add_argument("--n", type=int, required=True)
    ub.add_argument("--eps", default="1/2")
    ub.add_argument("--out")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    client = ServiceClient(args.server)
    try:
        if args.command == "construct":
            return cmd_construct(client, args)
        if args.command == "verify":
            return cmd_verify(client, args)
        if args.command == "decompose":
            return cmd_decompose(client, args)
        if args.command == "sumset":
            return cmd_sumset(client, args)
        if args.command == "longest-ap":
            return cmd_longest_ap(client, args)
        if args.command == "bound":
            return cmd_bound(client, args)
        if args.command == "union-bound":
            return cmd_union_bound(client, args)
        parser.error(f"unknown command {args.command}")
    except OSError as exc:
        _diag({"error": "IOError", "message": str(exc)})
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        _diag({"error": "MalformedJSON", "message": str(exc)})
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
