"""Command line entry point.

Problems are read from JSON files (or stdin with "-") and solved locally by
default; --server posts the same document to a running service instead.
Exit codes: 0 success or verdict true, 1 verdict false, 2 usage, parse or
input errors, 3 route disagreement beyond the tolerance of the contract.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx
from pydantic import TypeAdapter, ValidationError

from .errors import BjApproxError
from .problems import CheckProblem, DistProblem, ProblemOptions
from .runner import run_bench, run_check, run_dist

_DIST_ADAPTER: TypeAdapter = TypeAdapter(DistProblem)
_CHECK_ADAPTER: TypeAdapter = TypeAdapter(CheckProblem)


class _InputError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc


def _load_problem(path: str, adapter: TypeAdapter):
    text = _read_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"invalid JSON in {path}: {exc}") from exc
    try:
        return adapter.validate_python(raw)
    except ValidationError as exc:
        raise _InputError(f"invalid problem document: {exc}") from exc


def _merge_options(options: ProblemOptions, args) -> ProblemOptions:
    updates = {}
    if args.tol is not None:
        updates["tolerance"] = args.tol
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.restarts is not None:
        updates["restarts"] = args.restarts
    if getattr(args, "routes", None) is not None:
        updates["routes"] = [r.strip() for r in args.routes.split(",") if r.strip()]
    if not updates:
        return options
    try:
        return ProblemOptions(**{**options.model_dump(), **updates})
    except ValidationError as exc:
        raise _InputError(f"invalid option override: {exc}") from exc


def _emit(document: dict, json_out: str | None) -> None:
    text = json.dumps(document, indent=2, sort_keys=False)
    print(text)
    if json_out:
        Path(json_out).write_text(text + "\n")


def _post(server: str, endpoint: str, payload: dict) -> dict:
    url = server.rstrip("/") + endpoint
    try:
        response = httpx.post(url, json=payload, timeout=600.0)
    except httpx.HTTPError as exc:
        raise _InputError(f"request to {url} failed: {exc}") from exc
    if response.status_code != 200:
        raise _InputError(f"server returned {response.status_code}: {response.text}")
    return response.json()


def _run_problem(args, adapter: TypeAdapter, endpoint: str, runner) -> int:
    problem = _load_problem(args.file, adapter)
    problem = problem.model_copy(update={"options": _merge_options(problem.options, args)})
    if args.server:
        document = _post(args.server, endpoint, problem.model_dump(by_alias=True))
    else:
        document = runner(problem)
    _emit(document, args.json_out)
    return int(document["exit_code"])


def _cmd_dist(args) -> int:
    return _run_problem(args, _DIST_ADAPTER, "/v1/dist", run_dist)


def _cmd_check(args) -> int:
    return _run_problem(args, _CHECK_ADAPTER, "/v1/check", run_check)


def _cmd_bench(args) -> int:
    options = _merge_options(ProblemOptions(), args)
    if args.server:
        payload = {"schema": 1, "options": options.model_dump()}
        document = _post(args.server, "/v1/bench", payload)
    else:
        document = run_bench(options)
    _emit(document, args.json_out)
    return int(document["exit_code"])


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_common(parser: argparse.ArgumentParser, routes: bool) -> None:
    parser.add_argument("--tol", type=float, default=None, help="tolerance override")
    parser.add_argument("--seed", type=int, default=None, help="seed override")
    parser.add_argument(
        "--restarts", type=int, default=None, help="multi-start count override"
    )
    if routes:
        parser.add_argument(
            "--routes",
            default=None,
            help="comma-separated route subset (e.g. duality,oracle)",
        )
    parser.add_argument(
        "--json-out", default=None, help="also write the result document to this file"
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; solve there instead of in-process",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bjapprox",
        description="Best-approximation distances and orthogonality checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dist = sub.add_parser("dist", help="solve a distance problem from a JSON file")
    dist.add_argument("file", help="problem document path, or - for stdin")
    _add_common(dist, routes=True)
    dist.set_defaults(handler=_cmd_dist)

    check = sub.add_parser("check", help="evaluate a verification problem")
    check.add_argument("file", help="problem document path, or - for stdin")
    _add_common(check, routes=False)
    check.set_defaults(handler=_cmd_check)

    bench = sub.add_parser("bench", help="run the built-in route-agreement benchmark")
    _add_common(bench, routes=False)
    bench.set_defaults(handler=_cmd_bench)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BjApproxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
