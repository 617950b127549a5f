"""Command-line client for the engine.

Every subcommand builds the same request model the HTTP service accepts and
either dispatches in-process (default) or posts it to a running service
(--server).  Outputs are deterministic JSON; heavy results go to --out
files and a summary to stdout.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from .errors import GlobularError
from .serialize import dumps
from .service import api
from .service import schemas as s

_ENDPOINTS = {
    "enumerate-tables": ("/enumerate-tables", s.EnumerateTablesRequest,
                         api.enumerate_tables_handler),
    "hom": ("/hom", s.HomRequest, api.hom_handler),
    "realize": ("/realize", s.RealizeRequest, api.realize_handler),
    "build-coherator": ("/build-coherator", s.BuildCoheratorRequest,
                        api.build_coherator_handler),
    "derive": ("/derive", s.DeriveRequest, api.derive_handler),
    "eval": ("/eval", s.EvalRequest, api.eval_handler),
    "pi": ("/pi", s.PiRequest, api.pi_handler),
    "weq": ("/weq", s.WeqRequest, api.weq_handler),
    "check-fibrant": ("/check-fibrant", s.CheckFibrantRequest,
                      api.check_fibrant_handler),
    "relayer": ("/relayer", s.RelayerRequest, api.relayer_handler),
    "lift": ("/lift", s.LiftRequest, api.lift_handler),
}


def _read_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def dispatch(command: str, request: BaseModel, server: str | None = None) -> dict:
    """Run a request locally or against a remote service."""
    route, req_model, handler = _ENDPOINTS[command]
    if server is None:
        return handler(request).model_dump()
    import httpx

    resp = httpx.post(server.rstrip("/") + route,
                      json=request.model_dump(), timeout=600.0)
    if resp.status_code == 422 and "kind" in resp.json():
        body = resp.json()
        raise GlobularError(f"{body['kind']}: {body['error']}")
    resp.raise_for_status()
    return resp.json()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="globular",
        description="pasting schemes, coherator towers, finite models")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable errors on stderr")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized drivers")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--max-dim", type=int, default=None)
    bounds.add_argument("--max-size", type=int, default=None)
    bounds.add_argument("--max-len", type=int, default=None)
    bounds.add_argument("--levels", type=int, default=None)

    def add(name, **kwargs):
        p = sub.add_parser(name, parents=[bounds], **kwargs)
        p.add_argument("--dry-run", action="store_true",
                       help="validate inputs without computing")
        p.add_argument("--out", default=None, help="write full JSON here")
        return p

    p = add("enumerate-tables", help="list tables of dimensions within bounds")
    p.add_argument("--trees", action="store_true")

    p = add("hom", help="morphisms between realized tables")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)

    p = add("realize", help="realize a table as a globular set")
    p.add_argument("--table", required=True)
    p.add_argument("--trunc", type=int, default=None)

    p = add("build-coherator", help="build a bounded tower")
    p.add_argument("--flavor", choices=["groupoid", "category"],
                   default="groupoid")
    p.add_argument("--strategy", choices=["canonical", "bl", "reduced"],
                   default="canonical")

    p = add("derive", help="derive a named structural operation")
    p.add_argument("--tower", default=None, help="tower JSON path")
    p.add_argument("--op", required=True,
                   help="e.g. comp:l=2,i=3 | unit:i=0 | assoc2:i=2")
    p.add_argument("--print-boundary", action="store_true", default=True)

    p = add("eval", help="evaluate a term in a model")
    p.add_argument("--model", required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--args", required=True, help="JSON list of cell indices")

    p = add("pi", help="homotopy group of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--base", type=int, default=0)

    p = add("weq", help="weak-equivalence check")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--map", dest="mapping", required=True)

    p = add("check-fibrant", help="bounded fibrancy and cellularity gate")
    p.add_argument("--tower", required=True)
    p.add_argument("--pair-level", type=int, default=None)

    p = add("relayer", help="re-layer a cellular presentation by dependency")
    p.add_argument("--in", dest="src", required=True)
    p.add_argument("--out-file", dest="dst", default=None,
                   help="write the re-layered presentation here")

    p = add("lift", help="lift a tower into a model's tables")
    p.add_argument("--tower", required=True)
    p.add_argument("--model", required=True)

    return parser


def _build_request(args) -> BaseModel:
    cmd = args.command
    if cmd == "enumerate-tables":
        if args.max_dim is None or args.max_len is None:
            raise GlobularError("enumerate-tables needs --max-dim and --max-len")
        return s.EnumerateTablesRequest(max_dim=args.max_dim,
                                        max_len=args.max_len, trees=args.trees)
    if cmd == "hom":
        return s.HomRequest(src=args.src, dst=args.dst)
    if cmd == "realize":
        return s.RealizeRequest(table=args.table, trunc=args.trunc)
    if cmd == "build-coherator":
        return s.BuildCoheratorRequest(
            flavor=args.flavor, strategy=args.strategy,
            max_dim=args.max_dim if args.max_dim is not None else 1,
            max_size=args.max_size if args.max_size is not None else 6,
            max_len=args.max_len if args.max_len is not None else 2,
            levels=args.levels if args.levels is not None else 1)
    if cmd == "derive":
        tower = _read_json(args.tower) if args.tower else None
        return s.DeriveRequest(op=args.op, tower=tower,
                               print_boundary=args.print_boundary)
    if cmd == "eval":
        return s.EvalRequest(model=_read_json(args.model), term=args.term,
                             args=json.loads(args.args))
    if cmd == "pi":
        return s.PiRequest(model=_read_json(args.model), i=args.i,
                           base=args.base)
    if cmd == "weq":
        return s.WeqRequest(src_model=_read_json(args.src),
                            dst_model=_read_json(args.dst),
                            mapping=_read_json(args.mapping)["mapping"])
    if cmd == "check-fibrant":
        return s.CheckFibrantRequest(tower=_read_json(args.tower),
                                     max_dim=args.max_dim,
                                     max_size=args.max_size,
                                     max_len=args.max_len,
                                     pair_level=args.pair_level)
    if cmd == "relayer":
        return s.RelayerRequest(presentation=_read_json(args.src))
    if cmd == "lift":
        return s.LiftRequest(tower=_read_json(args.tower),
                             model=_read_json(args.model))
    raise AssertionError(cmd)


def _summary(command: str, result: dict) -> str:
    if command == "enumerate-tables":
        return "\n".join(result["tables"])
    if command == "hom":
        return f"{result['count']} morphisms"
    if command == "realize":
        counts = " ".join(str(len(c)) for c in result["cells"])
        return f"cells per dimension: {counts}"
    if command == "build-coherator":
        return "level sizes: " + " ".join(str(n) for n in result["level_sizes"])
    if command == "derive":
        lines = [result["term"]]
        if result.get("boundary"):
            lines.append("boundary: " + dumps(result["boundary"]))
        return "\n".join(lines)
    if command == "eval":
        return f"cell {result['cell']} ({result['label']}) at dim {result['dim']}"
    if command == "pi":
        lines = [f"order {result['order']}"]
        for row in result["table"]:
            lines.append(" ".join(str(x) for x in row))
        return "\n".join(lines)
    if command == "weq":
        return ("weak equivalence" if result["weak_equivalence"]
                else "not a weak equivalence: " + "; ".join(result["reasons"]))
    if command == "check-fibrant":
        return result["summary"]
    if command == "relayer":
        return "layer sizes: " + " ".join(str(n) for n in result["layer_sizes"])
    if command == "lift":
        return f"assigned {len(result['assignment'])} symbols"
    return dumps(result)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    random.seed(args.seed)
    try:
        request = _build_request(args)
    except (ValidationError, GlobularError, ValueError, OSError) as exc:
        _report_error(args, exc, usage=True)
        return 2
    if args.dry_run:
        print("ok: inputs valid")
        return 0
    try:
        result = dispatch(args.command, request, args.server)
    except GlobularError as exc:
        _report_error(args, exc, usage=False)
        return 1
    if args.command == "relayer" and getattr(args, "dst", None):
        Path(args.dst).write_text(dumps(result["presentation"], pretty=True))
    out_path = getattr(args, "out", None)
    if out_path:
        # a written tower file is directly reloadable by --tower flags
        payload = result["tower"] if args.command == "build-coherator" else result
        Path(out_path).write_text(dumps(payload, pretty=True))
    print(_summary(args.command, result))
    return 0


def _report_error(args, exc, usage: bool) -> None:
    if getattr(args, "json", False):
        payload = {"error": str(exc), "kind": type(exc).__name__,
                   "usage": usage}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
