"""Command-line client for the service.

Every subcommand builds a JSON request and posts it to the service: by
default an in-process instance of the app (no network), or a remote server
via --server.  Exit codes: 1 usage, 2 parse/IO, 3 precondition violation,
4 non-convergence.  Output goes to standard output; errors to standard
error.  Identical flags, inputs, and seed produce byte-identical output for
any job count.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Callable, Optional

import httpx

from .formats import format_float

EXIT_USAGE = 1
EXIT_PARSE_IO = 2
EXIT_PRECONDITION = 3
EXIT_NON_CONVERGENCE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        sys.exit(EXIT_PARSE_IO)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from exc


def _post(server: Optional[str], path: str, payload: dict) -> tuple[int, dict]:
    async def go() -> tuple[int, dict]:
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=None) as client:
                response = await client.post(path, json=payload)
                return response.status_code, response.json()
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://blowup-lab", timeout=None
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    try:
        return asyncio.run(go())
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        sys.exit(EXIT_PARSE_IO)


def _call(server: Optional[str], path: str, payload: dict) -> dict:
    status, body = _post(server, path, payload)
    if status == 200:
        return body
    if status == 400 and isinstance(body, dict):
        detail = body.get("detail", {})
        code = detail.get("code") if isinstance(detail, dict) else None
        message = detail.get("message") if isinstance(detail, dict) else str(body)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE_IO if code == "parse" else EXIT_PRECONDITION)
    if status == 422:
        print(f"error: invalid request: {body}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    print(f"error: service returned status {status}: {body}", file=sys.stderr)
    sys.exit(EXIT_PARSE_IO)


def _emit(fmt: str, body: dict, text: Optional[Callable[[dict], str]] = None) -> None:
    if fmt == "json":
        print(json.dumps(body, indent=2))
    elif text is not None:
        print(text(body))
    else:
        print(json.dumps(body))


def _build_parser() -> _Parser:
    parser = _Parser(prog="blowup-lab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--server", default=None, help="remote service URL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("blowup", parents=[common], help="blow a graph up")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", required=True, type=_int_list)

    p = sub.add_parser("reduce", parents=[common], help="twin-free factorization")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("aut", parents=[common], help="automorphism group")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("density", parents=[common], help="exact pattern density")
    p.add_argument("--pattern", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--mode", choices=("strong", "induced"), default="strong")
    p.add_argument("--weights", default=None)

    p = sub.add_parser("d1", parents=[common], help="measured edit distance bound")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--weights1", default=None)
    p.add_argument("--weights2", default=None)
    p.add_argument("--grid", type=int, default=12)

    p = sub.add_parser("regular", parents=[common], help="vertex regularity report")
    p.add_argument("--graph", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--vertex", required=True, type=int)
    p.add_argument("--weights", default=None)
    p.add_argument("--epsilon", default=None)

    p = sub.add_parser("optimize", parents=[common], help="maximize blow-up density")
    p.add_argument("--core", required=True)
    p.add_argument("--k", required=True, type=_int_list)
    p.add_argument("--h", required=True, type=int)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force-search", action="store_true")

    p = sub.add_parser("balanced", parents=[common], help="balanced blow-up test")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("dichotomy", parents=[common], help="constructive dichotomy")
    p.add_argument("--core", required=True)
    p.add_argument("--k", required=True, type=_int_list)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--gamma", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--psi", type=_int_list)
    group.add_argument("--psi-seed", type=int)

    p = sub.add_parser("check-bound", parents=[common], help="Monte Carlo bound check")
    p.add_argument("kind", choices=("biclique", "star"))
    p.add_argument("--graph", required=True)
    p.add_argument("--r", required=True, type=int)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", default=None)

    p = sub.add_parser("scan", parents=[common], help="exhaustive extremal scan")
    p.add_argument("--core", required=True)
    p.add_argument("--k", required=True, type=_int_list)
    p.add_argument("--h", required=True, type=int)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--mode", choices=("strong", "induced"), default="strong")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", default=None)

    p = sub.add_parser("evidence", parents=[common], help="inducibility evidence table")
    p.add_argument("--core", required=True)
    p.add_argument("--k", required=True, type=_int_list)
    p.add_argument("--h", required=True, type=int)
    p.add_argument("--n-range", required=True, type=_int_list)

    sub.add_parser("selftest", parents=[common], help="cross-module consistency suite")

    return parser


def main(argv: Optional[list[str]] = None) -> None:
    args = _build_parser().parse_args(argv)
    fmt = args.format
    server = args.server

    if args.command == "blowup":
        body = _call(
            server, "/blowup", {"graph": _read_file(args.graph), "k": args.k}
        )
        _emit(fmt, body, lambda b: b["edge_list"].rstrip("\n"))
    elif args.command == "reduce":
        body = _call(server, "/reduce", {"graph": _read_file(args.graph)})
        _emit(fmt, body)
    elif args.command == "aut":
        body = _call(server, "/aut", {"graph": _read_file(args.graph)})
        _emit(fmt, body)
    elif args.command == "density":
        payload = {
            "pattern": _read_file(args.pattern),
            "target": _read_file(args.target),
            "mode": args.mode,
            "weights": _read_file(args.weights) if args.weights else None,
        }
        body = _call(server, "/density", payload)
        _emit(fmt, body, lambda b: b["value"])
    elif args.command == "d1":
        payload = {
            "graph1": _read_file(args.graph1),
            "graph2": _read_file(args.graph2),
            "weights1": _read_file(args.weights1) if args.weights1 else None,
            "weights2": _read_file(args.weights2) if args.weights2 else None,
            "grid": args.grid,
        }
        body = _call(server, "/d1", payload)
        _emit(fmt, body)
    elif args.command == "regular":
        payload = {
            "graph": _read_file(args.graph),
            "reference": _read_file(args.reference),
            "vertex": args.vertex,
            "weights": _read_file(args.weights) if args.weights else None,
            "epsilon": args.epsilon,
        }
        body = _call(server, "/regular", payload)
        _emit(fmt, body)
    elif args.command == "optimize":
        payload = {
            "core": _read_file(args.core),
            "k": args.k,
            "h": args.h,
            "restarts": args.restarts,
            "tol": args.tol,
            "seed": args.seed,
            "force_search": args.force_search,
        }
        body = _call(server, "/optimize", payload)
        _emit(fmt, body)
        if not body["converged"]:
            print("error: optimizer did not converge", file=sys.stderr)
            sys.exit(EXIT_NON_CONVERGENCE)
    elif args.command == "balanced":
        body = _call(server, "/balanced", {"graph": _read_file(args.graph)})
        _emit(fmt, body)
    elif args.command == "dichotomy":
        payload = {
            "core": _read_file(args.core),
            "k": args.k,
            "n": args.n,
            "gamma": args.gamma,
            "psi": args.psi,
            "psi_seed": args.psi_seed,
        }
        body = _call(server, "/dichotomy", payload)
        _emit(fmt, body)
    elif args.command == "check-bound":
        payload = {
            "kind": args.kind,
            "graph": _read_file(args.graph),
            "r": args.r,
            "ell": args.ell,
            "s": args.s,
            "samples": args.samples,
            "seed": args.seed,
            "weights": _read_file(args.weights) if args.weights else None,
        }
        body = _call(server, "/check-bound", payload)
        _emit(fmt, body)
    elif args.command == "scan":
        payload = {
            "core": _read_file(args.core),
            "k": args.k,
            "h": args.h,
            "n": args.n,
            "mode": args.mode,
            "jobs": args.jobs,
            "checkpoint": args.checkpoint,
        }
        body = _call(server, "/scan", payload)
        _emit(fmt, body)
    elif args.command == "evidence":
        payload = {
            "core": _read_file(args.core),
            "k": args.k,
            "h": args.h,
            "n_range": args.n_range,
        }
        body = _call(server, "/evidence", payload)
        _emit(fmt, body)
    elif args.command == "selftest":
        body = _call(server, "/selftest", {})
        _emit(
            fmt,
            body,
            lambda b: "\n".join(
                f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: {c['detail']}"
                for c in b["checks"]
            ),
        )
        if not body["passed"]:
            sys.exit(1)


if __name__ == "__main__":
    main()
