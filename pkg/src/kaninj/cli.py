"""Batch front end.

Usage::

    kaninj -w shapes.txt check V -H emb
    kaninj -w shapes.txt reflect A -H emb --budget 8 --dump-trace out/

Exit status is 0 for a true verdict or a successful computation, 1 for a
false verdict and 2 for any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Mapping, Sequence

from . import constructions as cons
from .errors import BudgetExceeded, KanError, ParseError, UnknownCommand, ValidationError
from .kan import greatest_extension, least_extension, membership
from .monads import algebra_laws_check, algebra_structure, kz_check, monad_laws_check
from .oracles import verify_reflection
from .poset import FinPoset, MonotoneMap
from .reflection import DEFAULT_BUDGET, DEFAULT_MAX_STAGE_SIZE, run_reflection
from .textformat import Workspace, build, format_poset, format_trace, parse_declarations, to_dot

OK, FALSE, ERROR = 0, 1, 2


def parse_workspace(paths: Sequence[str | Path]) -> Workspace:
    """All declarations of all files as one environment; names must be unique across files."""
    env = Workspace()
    decls = []
    for p in paths:
        text = Path(p).read_text()
        try:
            decls.append((str(p), parse_declarations(text)))
        except ParseError as exc:
            raise ParseError(f"{p}: {exc}") from None
    # posets of every file first, so maps may refer across files
    for src, ds in decls:
        env.update(build([d for d in ds if d.kind == "poset"], env, src))
    for src, ds in decls:
        env.update(build([d for d in ds if d.kind == "map"], env, src))
    return env


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownCommand(message)

    def exit(self, status=0, message=None):
        raise UnknownCommand(message or "help requested")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")

    ap = _Parser(prog="kaninj", description="Kan-injectivity over finite posets")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("lan", parents=[common], add_help=False,
                       help="Kan extension of f along h")
    p.add_argument("-h", dest="h", required=True, metavar="H")
    p.add_argument("-f", dest="f", required=True, metavar="F")
    side = p.add_mutually_exclusive_group()
    side.add_argument("--right", action="store_true")
    side.add_argument("--weak", action="store_true")

    p = sub.add_parser("check", parents=[common], help="Kan-injectivity of an object or map")
    p.add_argument("subject")
    p.add_argument("-H", dest="H", required=True)
    p.add_argument("--side", choices=("left", "right", "weak-left"), default="left")

    p = sub.add_parser("reflect", parents=[common], help="run the reflection chain")
    p.add_argument("subject")
    p.add_argument("-H", dest="H", required=True)
    p.add_argument("--weak", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--max-stage-size", type=int, default=DEFAULT_MAX_STAGE_SIZE)
    p.add_argument("--dump-trace", metavar="DIR")

    p = sub.add_parser("colimit", parents=[common], help="(co)limit constructions")
    p.add_argument("kind", choices=("inserter", "coinserter", "pushout", "cocomma", "product", "coproduct"))
    p.add_argument("args", nargs="+")

    p = sub.add_parser("monad", parents=[common], help="lowerset monad checks")
    p.add_argument("what", choices=("laws", "kz", "algebra"))
    p.add_argument("subject")

    p = sub.add_parser("verify", parents=[common], help="check a reflection against targets")
    p.add_argument("subject")
    p.add_argument("-H", dest="H", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--unit", help="map X -> R to verify instead of the computed reflection")
    p.add_argument("--side", choices=("left", "weak-left"), default="left")
    return ap


def _get(env: Mapping, name: str, kind):
    try:
        obj = env[name]
    except KeyError:
        raise ValidationError(f"nothing named {name!r} in the workspace") from None
    if not isinstance(obj, kind):
        raise ValidationError(f"{name!r} is not a {'poset' if kind is FinPoset else 'map'}")
    return obj


def _names(env, csv: str, kind):
    return [_get(env, n, kind) for n in csv.split(",") if n]


def _subject(env, name):
    return _get(env, name, (FinPoset, MonotoneMap))


class _Report:
    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {"verdict": None, "counterexample": None}

    def add(self, line: str = ""):
        self.lines.append(line)


def _show(x) -> str | None:
    if x is None:
        return None
    if isinstance(x, MonotoneMap):
        return " ".join(f"{a}->{b}" for a, b in x.mapping.items())
    if isinstance(x, FinPoset):
        return format_poset("P", x)
    return str(x)


def _cmd_lan(env, a, r: _Report) -> int:
    h, f = _get(env, a.h, MonotoneMap), _get(env, a.f, MonotoneMap)
    v = greatest_extension(h, f) if a.right else least_extension(h, f)
    which = "Ran" if a.right else "Lan"
    if not v.exists:
        r.add(f"{which}: none ({v.outcome.replace('_', ' ')})")
        r.data.update(verdict=False, outcome=v.outcome)
        return FALSE
    ok = v.strict or a.weak
    r.add(f"{which}: {_show(v.extension)}")
    r.add(f"restricts back to f: {'yes' if v.strict else 'no'}")
    r.data.update(verdict=ok, extension=_show(v.extension), strict=v.strict, outcome=v.outcome)
    return OK if ok else FALSE


def _cmd_check(env, a, r: _Report) -> int:
    S = _subject(env, a.subject)
    H = _names(env, a.H, MonotoneMap)
    rep = membership(S, H, a.side)
    names = [n for n in a.H.split(",") if n]
    for n, v in zip(names, rep.verdicts):
        if a.side == "weak-left":
            ok = v.weak_ok
        else:
            ok = v.morphism_ok if isinstance(S, MonotoneMap) else v.object_ok
        line = f"{n}: {'yes' if ok else 'no'}"
        if not ok and v.counterexample is not None:
            line += f"  (f = {_show(v.counterexample)}{'; ' + v.detail if v.detail else ''})"
        r.add(line)
    r.add(f"member ({a.side}): {'yes' if rep.member else 'no'}")
    r.data.update(verdict=rep.member, counterexample=_show(rep.counterexample))
    return OK if rep.member else FALSE


def _dump(trace, where: str) -> None:
    d = Path(where)
    d.mkdir(parents=True, exist_ok=True)
    (d / "trace.txt").write_text(format_trace(trace))
    for i, X in enumerate(trace.stages):
        (d / f"X{i}.dot").write_text(to_dot(X, f"X{i}"))


def _stages(trace):
    return [{"name": f"X{i}", "size": len(X), "poset": format_poset(f"X{i}", X)}
            for i, X in enumerate(trace.stages)]


def _cmd_reflect(env, a, r: _Report) -> int:
    X = _get(env, a.subject, FinPoset)
    H = _names(env, a.H, MonotoneMap)
    mode = "weak" if a.weak else "strong"
    try:
        tr = run_reflection(X, H, budget=a.budget, mode=mode, max_stage_size=a.max_stage_size)
    except BudgetExceeded as exc:
        if a.dump_trace and exc.trace is not None:
            _dump(exc.trace, a.dump_trace)
        if exc.trace is not None:
            r.data.update(stages=_stages(exc.trace), converged_at=None)
        raise
    if a.dump_trace:
        _dump(tr, a.dump_trace)
    r.add(f"converged at stage {tr.converged_at}; stage sizes {tr.stage_sizes()}")
    r.add(format_poset("R", tr.reflection))
    r.add(f"unit: {_show(tr.unit)}")
    r.data.update(verdict=True, stages=_stages(tr), converged_at=tr.converged_at,
                  reflection=format_poset("R", tr.reflection), unit=_show(tr.unit))
    return OK


def _cmd_colimit(env, a, r: _Report) -> int:
    k, args = a.kind, a.args
    if k in ("product", "coproduct"):
        Ps = [_get(env, n, FinPoset) for n in args]
        res = cons.product(Ps) if k == "product" else cons.coproduct(Ps)
        obj, legs = (res.object, res.projections) if k == "product" else (res.object, res.injections)
        r.add(format_poset(k, obj))
        for n, m in zip(args, legs):
            r.add(f"{'pr' if k == 'product' else 'in'}_{n}: {_show(m)}")
        r.data.update(verdict=True, object=format_poset(k, obj))
        return OK
    if len(args) != 2:
        raise ValidationError(f"{k} takes exactly two maps")
    u, v = (_get(env, n, MonotoneMap) for n in args)
    if k == "inserter":
        res = cons.inserter(u, v)
        r.add(format_poset(k, res.object))
        r.add(f"arrow: {_show(res.arrow)}")
        obj = res.object
    elif k == "coinserter":
        res = cons.coinserter(u, v)
        r.add(format_poset(k, res.quotient))
        r.add(f"arrow: {_show(res.projection)}")
        obj = res.quotient
    else:
        sq = cons.pushout(u, v) if k == "pushout" else cons.cocomma(u, v)
        r.add(format_poset(k, sq.apex))
        r.add(f"left: {_show(sq.left_leg)}")
        r.add(f"right: {_show(sq.right_leg)}")
        obj = sq.apex
    r.data.update(verdict=True, object=format_poset(k, obj))
    return OK


def _cmd_monad(env, a, r: _Report) -> int:
    X = _get(env, a.subject, FinPoset)
    if a.what == "algebra":
        v = algebra_structure(X)
        if not v:
            r.add(f"no algebra structure: the downset {{{' '.join(v.witness)}}} has no join")
            r.data.update(verdict=False, counterexample=list(v.witness))
            return FALSE
        laws = algebra_laws_check(X, v.algebra)
        r.add(f"alpha: {_show(v.algebra)}")
        r.add(f"algebra laws: {'yes' if laws else 'no'}")
        r.data.update(verdict=bool(laws), alpha=_show(v.algebra))
        return OK if laws else FALSE
    v = monad_laws_check(X) if a.what == "laws" else kz_check(X)
    r.add(f"{a.what}: {'yes' if v else 'no'}" + ("" if v else f"  ({v.detail})"))
    r.data.update(verdict=v.ok, counterexample=_show(v.counterexample))
    return OK if v else FALSE


def _cmd_verify(env, a, r: _Report) -> int:
    X = _get(env, a.subject, FinPoset)
    H = _names(env, a.H, MonotoneMap)
    targets = _names(env, a.targets, FinPoset)
    if a.unit:
        unit = _get(env, a.unit, MonotoneMap)
        if unit.dom != X:
            raise ValidationError(f"unit {a.unit} does not start at {a.subject}")
    else:
        tr = run_reflection(X, H, mode="weak" if a.side == "weak-left" else "strong")
        unit = tr.unit
        r.data.update(stages=_stages(tr), converged_at=tr.converged_at)
    v = verify_reflection((unit.cod, unit), H, targets, a.side)
    r.add(f"reflection verified: {'yes' if v else 'no'}" + ("" if v else f"  ({v.detail})"))
    r.data.update(verdict=v.ok, counterexample=_show(v.counterexample))
    return OK if v else FALSE


_COMMANDS = {
    "lan": _cmd_lan,
    "check": _cmd_check,
    "reflect": _cmd_reflect,
    "colimit": _cmd_colimit,
    "monad": _cmd_monad,
    "verify": _cmd_verify,
}


def run_command(env: Mapping, argv: Sequence[str]) -> tuple[str, int]:
    """Run one subcommand against ``env``; returns the report text and exit status."""
    r = _Report()
    as_json = "--json" in argv
    try:
        a = _parser().parse_args(list(argv))
        if a.command is None:
            raise UnknownCommand(f"expected one of {', '.join(_COMMANDS)}")
        code = _COMMANDS[a.command](env, a, r)
    except Exception as exc:  # every failure must map to exit status 2
        r.add(f"error: {type(exc).__name__}: {exc}")
        r.data.update(error=type(exc).__name__, message=str(exc))
        code = ERROR
    if as_json:
        return json.dumps(r.data, indent=2), code
    return "\n".join(r.lines), code


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    paths = []
    while argv and argv[0] in ("-w", "--workspace"):
        if len(argv) < 2:
            print("error: -w needs a file", file=sys.stderr)
            return ERROR
        paths.append(argv[1])
        argv = argv[2:]
    try:
        env = parse_workspace(paths)
    except (KanError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR
    text, code = run_command(env, argv)
    if text:
        print(text, file=sys.stderr if code == ERROR and "--json" not in argv else sys.stdout)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
