"""Batch command line front end.

Ordinals on the command line use the textual syntax (``"w^2*3 + w + 4"``);
step functions, sequences and certificates travel as JSON files.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import embeddings as emb
from .ordinal import add, beta0, compare, ell, parse
from .seqspace import FinSeq
from .spr import adp_search, spr_ratio, verify_spr_bound
from .stepfn import FnPair, StepFn, block_indicator, fn_abs, glue, indicator, join, meet, sup_norm

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_fn(path: str) -> StepFn:
    return StepFn.from_json(_load_json(path))


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_op_spec(spec: str) -> tuple[str, dict[str, str]]:
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key:
                raise UsageError(f"bad operator parameter {item!r} in {spec!r}")
            params[key.strip()] = value.strip()
    return name.strip(), params


def _int_param(params: dict, key: str, fallback) -> int:
    raw = params.get(key, fallback)
    if raw is None:
        raise UsageError(f"operator needs {key}")
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{key} must be an integer, got {raw!r}") from exc


def build_basis(spec: str) -> tuple[list[StepFn], str]:
    """``xbasis:N``, ``blocks:alpha,N`` or a JSON file holding a list of step functions."""
    if spec.startswith("xbasis:"):
        n = int(spec.split(":", 1)[1])
        if n < 1:
            raise UsageError("xbasis needs N >= 1")
        return [emb.basis_x(i) for i in range(1, n + 1)], spec
    if spec.startswith("blocks:"):
        alpha, n = (int(v) for v in spec.split(":", 1)[1].split(","))
        if n < 1 or alpha < 1:
            raise UsageError("blocks needs alpha >= 1 and N >= 1")
        return [block_indicator((m,), alpha) for m in range(1, n + 1)], spec
    data = _load_json(spec)
    if isinstance(data, dict) and "basis" in data:
        data = data["basis"]
    if not isinstance(data, list):
        raise UsageError(f"{spec}: expected a JSON list of step functions")
    return [StepFn.from_json(item) for item in data], spec


# -- ord ---------------------------------------------------------------------


def _cmd_ord(args) -> int:
    if args.action == "add":
        print(add(parse(args.a), parse(args.b)))
    elif args.action == "cmp":
        print(compare(parse(args.a), parse(args.b)))
    elif args.action == "ell":
        print(ell(parse(args.a), _require_alpha(args)))
    elif args.action == "beta0":
        print(beta0(parse(args.a), _require_alpha(args)))
    return EXIT_OK


def _require_alpha(args) -> int:
    if args.alpha is None:
        raise UsageError("--alpha is required")
    return args.alpha


# -- fn ----------------------------------------------------------------------


def _cmd_fn(args) -> int:
    action = args.action
    if action == "eval":
        print(_load_fn(args.file).eval(parse(args.at)))
    elif action == "norm":
        print(sup_norm(_load_fn(args.file)))
    elif action in ("meet", "join"):
        op = meet if action == "meet" else join
        _emit(op(_load_fn(args.f), _load_fn(args.g)).to_json(), args.out)
    elif action == "abs":
        _emit(fn_abs(_load_fn(args.file)).to_json(), args.out)
    elif action == "glue":
        _emit(glue(_load_fn(args.g), _load_fn(args.f)).to_json(), args.out)
    elif action == "indicator":
        fn = indicator(parse(args.lo), parse(args.hi), parse(args.domain))
        _emit(fn.to_json(), args.out)
    return EXIT_OK


# -- embed -------------------------------------------------------------------


def _stepfn_op(op: emb.LinOperator) -> Callable:
    return lambda data: op(StepFn.from_json(data)).to_json()


def resolve_operator(spec: str, alpha: int | None = None, gamma: str | None = None) -> Callable:
    """Map an operator name (``S``, ``R:alpha=3``, ``urysohn:alpha=2,gamma=w^2*2``, ...)
    to a function from input JSON to output JSON."""
    name, params = _parse_op_spec(spec)
    if name == "S":
        return lambda data: emb.S(FinSeq.from_json(data)).to_json()
    if name == "R":
        a = _int_param(params, "alpha", alpha)
        return lambda data: emb.R(StepFn.from_json(data), a).to_json()
    if name == "R2":
        return lambda data: emb.R2(StepFn.from_json(data)).to_json()
    if name == "T":
        a = _int_param(params, "alpha", alpha)
        return lambda data: emb.T(StepFn.from_json(data), a).to_json()
    if name == "T-glued":
        return _stepfn_op(emb.T_glued(_int_param(params, "alpha", alpha)))
    if name == "T-glued-w2":
        return _stepfn_op(emb.T_glued_w2())
    if name == "self-w2":
        return lambda data: emb.self_embed_w2(StepFn.from_json(data)).to_json()
    if name in ("urysohn", "spr-into"):
        a = _int_param(params, "alpha", alpha)
        g = params.get("gamma", gamma)
        if g is None:
            raise UsageError(f"{name} needs gamma")
        if name == "spr-into":
            return _stepfn_op(emb.spr_embed_into(a, parse(g)))
        copies = _int_param(params, "copies", 1)
        offset = parse(params.get("offset", "0"))
        return _stepfn_op(emb.urysohn_embed(a, parse(g), copies=copies, offset=offset))
    raise UsageError(
        f"unknown operator {name!r}; expected one of S, R, R2, T, T-glued, "
        "T-glued-w2, self-w2, urysohn, spr-into"
    )


def _cmd_embed(args) -> int:
    op = resolve_operator(args.op, alpha=args.alpha, gamma=args.gamma)
    _emit(op(_load_json(args.input)), args.out)
    return EXIT_OK


# -- spr ---------------------------------------------------------------------


def _parse_grid(raw: str | None):
    if raw is None:
        return None
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad grid step {raw!r}") from exc


def _cmd_spr(args) -> int:
    if args.action == "ratio":
        value = spr_ratio(_load_element(args.f), _load_element(args.g))
        print("inf" if value == float("inf") else value)
        return EXIT_OK
    basis, name = build_basis(args.basis)
    grid = _parse_grid(args.grid)
    if args.action == "search":
        cert = adp_search(basis, budget=args.budget, seed=args.seed, grid_step=grid, basis_name=name)
        _emit(cert.to_json(), args.out)
        return EXIT_OK
    try:
        C = Fraction(args.C)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad constant {args.C!r}") from exc
    if grid is None:
        raise UsageError("spr verify needs --grid")
    passed, cert = verify_spr_bound(basis, C, grid, basis_name=name)
    _emit(cert.to_json(), args.out)
    return EXIT_OK if passed else EXIT_FAILED


def _load_element(path: str):
    data = _load_json(path)
    if isinstance(data, dict) and "left" in data:
        return FnPair.from_json(data)
    return StepFn.from_json(data)


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordspr",
        description="Exact step functions on ordinal intervals, SPR embeddings and certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ord = sub.add_parser("ord", help="ordinal arithmetic")
    p_ord.add_argument("action", choices=["add", "cmp", "ell", "beta0"])
    p_ord.add_argument("a")
    p_ord.add_argument("b", nargs="?")
    p_ord.add_argument("--alpha", type=int)
    p_ord.set_defaults(handler=_cmd_ord)

    p_fn = sub.add_parser("fn", help="step function operations")
    fn_sub = p_fn.add_subparsers(dest="action", required=True)
    q = fn_sub.add_parser("eval")
    q.add_argument("file")
    q.add_argument("--at", required=True)
    q = fn_sub.add_parser("norm")
    q.add_argument("file")
    for action in ("meet", "join"):
        q = fn_sub.add_parser(action)
        q.add_argument("f")
        q.add_argument("g")
        q.add_argument("--out")
    q = fn_sub.add_parser("abs")
    q.add_argument("file")
    q.add_argument("--out")
    q = fn_sub.add_parser("glue", help="g on [1, a] followed by f on [1, b]")
    q.add_argument("g")
    q.add_argument("f")
    q.add_argument("--out")
    q = fn_sub.add_parser("indicator", help="indicator of (lo, hi] inside [1, domain]")
    q.add_argument("--lo", required=True)
    q.add_argument("--hi", required=True)
    q.add_argument("--domain", required=True)
    q.add_argument("--out")
    p_fn.set_defaults(handler=_cmd_fn)

    p_embed = sub.add_parser("embed", help="apply an embedding operator")
    embed_sub = p_embed.add_subparsers(dest="action", required=True)
    q = embed_sub.add_parser("apply")
    q.add_argument("--op", required=True)
    q.add_argument("--alpha", type=int)
    q.add_argument("--gamma")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--out")
    p_embed.set_defaults(handler=_cmd_embed)

    p_spr = sub.add_parser("spr", help="stable phase retrieval checks")
    spr_sub = p_spr.add_subparsers(dest="action", required=True)
    for action in ("search", "verify"):
        q = spr_sub.add_parser(action)
        q.add_argument("--basis", required=True)
        q.add_argument("--grid")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--budget", type=int, default=64)
        q.add_argument("--out")
        if action == "verify":
            q.add_argument("--C", required=True)
    q = spr_sub.add_parser("ratio")
    q.add_argument("f")
    q.add_argument("g")
    p_spr.set_defaults(handler=_cmd_spr)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.handler(args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"ordspr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
