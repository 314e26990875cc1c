"""Command-line driver.

Exit codes: 0 success, 2 unreadable input, 3 violated precondition,
4 failed invariant or failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

from . import verify as _verify
from .cylinder import CertificateError, CylinderPresentation, InvariantError, action, v_iteration, zeta, zeta_tilde
from .goldman import DegreeError, GoldmanElement, PathElement, PrecisionError, bracket
from .johnson import filtration_degree_of_cylinder, tau
from .magnus import TruncationContext
from .surface import FatSurface, SurfaceError
from .words import WordSyntaxError

SCHEMA = 1


class _ParseError(Exception):
    pass


def _load_surface(path) -> FatSurface:
    try:
        return FatSurface.load(path)
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise _ParseError(f"cannot read surface {path}: {e}") from e


def _presentation(args) -> CylinderPresentation:
    """Load ``--twist``, replacing its embedding when ``--embedding`` is given."""
    try:
        path = Path(args.twist)
        data = json.loads(path.read_text(encoding="utf-8"))
        if getattr(args, "embedding", None):
            data["embedding"] = str(Path(args.embedding).resolve())
        return CylinderPresentation.from_json(data, path.parent, args.N)
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise _ParseError(f"cannot read twist file {args.twist}: {e}") from e


def _emit(args, text_lines: List[str], payload: dict):
    if args.format == "json":
        payload = {"schema": SCHEMA, "command": args.command, **payload}
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _fmt_deg(d):
    return "TOP" if d == float("inf") else str(int(d))


# commands ------------------------------------------------------------------------


def cmd_surface_check(args):
    s = _load_surface(args.surface)
    bws = [s.alphabet.format_cyclic(w) for w in s.boundary_words()]
    info = {
        "rank": s.rank,
        "genus": s.genus,
        "boundary_components": s.boundary_count,
        "euler_characteristic": s.euler_characteristic,
        "boundary_words": bws,
    }
    lines = [f"{k}: {v}" for k, v in info.items() if k != "boundary_words"]
    lines += [f"boundary: {w}" for w in bws]
    _emit(args, lines, info)
    return 0


def cmd_bracket(args):
    s = _load_surface(args.surface)
    ctx = TruncationContext(args.N, s.alphabet)
    x = GoldmanElement.parse(s, args.x, ctx)
    y = GoldmanElement.parse(s, args.y, ctx)
    z = bracket(x, y)
    _emit(args, [z.format()], {"result": z.format()})
    return 0


def cmd_zeta(args):
    c = _presentation(args)
    z = zeta(c.twist, TruncationContext(c.ctx.N, c.embedding.sigma_tilde.alphabet))
    _emit(args, [z.format()], {"N": c.ctx.N, "result": z.format()})
    return 0


def cmd_vsolve(args):
    c = _presentation(args)
    emb = c.embedding
    x = zeta(c.twist, TruncationContext(c.ctx.N, emb.sigma_tilde.alphabet))
    if x.is_zero():
        v, degs = "0", []
    else:
        rec = v_iteration(x, emb)
        v, degs = rec.v.format(), [_fmt_deg(d.degree()) for d in rec.increments]
    lines = [v] + [f"increment {i + 1}: degree {d}" for i, d in enumerate(degs)]
    _emit(args, lines, {"N": c.ctx.N, "result": v, "increment_degrees": degs})
    return 0


def cmd_zetatilde(args):
    c = _presentation(args)
    z = zeta_tilde(c)
    _emit(args, [z.format()], {"N": c.ctx.N, "result": z.format()})
    return 0


def cmd_action(args):
    c = _presentation(args)
    s = c.embedding.sigma
    ctx = TruncationContext(c.ctx.N, s.alphabet)
    paths = args.path or list(s.alphabet.names)
    lines, out = [], {}
    for text in paths:
        p = PathElement.word(s, s.parse(text), ctx)
        img = action(c, p)
        lines.append(f"{text} -> {img.format()}")
        out[text] = img.format()
    _emit(args, lines, {"N": c.ctx.N, "images": out})
    return 0


def cmd_johnson(args):
    c = _presentation(args)
    z = zeta_tilde(c)
    n = filtration_degree_of_cylinder(c, z)
    lines = [f"filtration degree: {n}"]
    payload = {"N": c.ctx.N, "filtration_degree": n}
    if args.n is not None:
        t = tau(args.n, z)
        lines.append(f"tau_{args.n}: {t.format()}")
        payload["tau"] = t.format()
    _emit(args, lines, payload)
    return 0


def cmd_uh_check(args):
    s = _load_surface(args.surface)
    results = _verify.uh_checks(s, args.N)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in results]
    _emit(args, lines, {"N": args.N, "checks": {name: ok for name, ok in results}})
    return 0 if all(ok for _, ok in results) else 4


def _run_fixture(name, N):
    return _verify.run_fixture(name, N)


def cmd_verify(args):
    names = args.fixture
    if args.jobs and args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_run_fixture, names, [args.N] * len(names)))
    else:
        reports = [_run_fixture(n, args.N) for n in names]
    lines = []
    for r in reports:
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name}")
        lines.extend(f"  {d}" for d in r.details)
    _emit(args, lines, {"results": [r.to_json() for r in reports]})
    return 0 if all(r.ok for r in reports) else 4


# parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="totaljohnson", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("surface-check", parents=[common], help="describe a fatgraph surface")
    sp.add_argument("--surface", required=True)
    sp.set_defaults(func=cmd_surface_check)

    sp = sub.add_parser("bracket", parents=[common], help="Goldman bracket of two loop combinations")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--N", type=int, default=6)
    sp.set_defaults(func=cmd_bracket)

    for name, func, helptext in (
        ("zeta", cmd_zeta, "twist word element on the doubled surface"),
        ("vsolve", cmd_vsolve, "fixed point iteration for a presented cylinder"),
        ("zetatilde", cmd_zetatilde, "total Johnson image of a presented cylinder"),
        ("action", cmd_action, "action on based paths"),
        ("johnson", cmd_johnson, "filtration degree and graded Johnson image"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--twist", required=True)
        sp.add_argument("--N", type=int, default=None)
        sp.add_argument("--embedding", help="override the embedding named in the twist file")
        if name == "action":
            sp.add_argument("--path", action="append", help="path word (repeatable; default: every generator)")
        if name == "johnson":
            sp.add_argument("--n", type=int, default=None, help="also print tau_n")
        sp.set_defaults(func=func)

    sp = sub.add_parser("uh-check", parents=[common], help="structural checks of the U_h model")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--N", type=int, default=6)
    sp.set_defaults(func=cmd_uh_check)

    sp = sub.add_parser("verify", parents=[common], help="verify shipped fixtures")
    sp.add_argument("--fixture", action="append", required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "N", None) is not None and args.N < 2:
        print("error: N must be at least 2", file=sys.stderr)
        return 3
    try:
        return args.func(args)
    except (_ParseError, WordSyntaxError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DegreeError, PrecisionError, CertificateError, SurfaceError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (InvariantError, ArithmeticError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
