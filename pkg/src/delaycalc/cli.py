"""``delaycalc`` command line.

Exit status: 0 member / success, 1 non-member (or failed verification),
2 usage, parse or parameter-consistency error.

Signal arguments are either inline interval lists (``"[0,2) [3,4)"``,
``empty``), a file path (first signal in the file), or ``path:name``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .conditions import (
    FORMS,
    CheckReport,
    bridc_disjuncts,
    cc_violation,
    cc_witness,
    check_bdc,
    check_bridc,
    check_dridc_form,
    check_fdc,
    check_ridc,
    check_sc,
    nzc_trivial,
    nzc_violation,
)
from .elements import (
    DETERMINISTIC,
    DRIDE,
    Fixed,
    FullBRIDE,
    apply_deterministic,
    chain_apply,
    fold_chain,
    membership,
    ride_composition_counterexample,
)
from .errors import ConsistencyViolated, DelayCalcError, SignalFormatError
from .render import auto_width, bridc_phases, check_step, raster, render_svg, render_text
from .sigcore import Signal, StepFunction
from .textio import (
    format_intervals,
    format_signal,
    interval_list,
    load_signals,
    element_from_literal,
    parse_chain,
    parse_literal,
    parse_signal,
    parse_signals,
    parse_time,
)

DEMOS = {"bridc-timeline": ("bridc_timeline.sig", "bridc(4,8,4,8;1,6,1,6)")}
COUNTEREXAMPLES = ("ride-composition",)


class UsageError(DelayCalcError):
    pass


# --------------------------------------------------------------------------
# helpers


def _emit(args, text: str, data: dict):
    if args.format == "data":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _time(t) -> Optional[str]:
    return None if t is None else str(t)


def _witness(report: CheckReport) -> Optional[dict]:
    if report.witness is None:
        return None
    return {"time": _time(report.witness.time), "reason": report.witness.reason}


def _is_inline(arg: str) -> bool:
    s = arg.strip()
    return s.startswith("[") or s == "empty"


def _load_file(arg: str) -> Tuple[Dict[str, Signal], Optional[str]]:
    path, name = Path(arg), None
    if not path.exists() and ":" in arg:
        head, name = arg.rsplit(":", 1)
        path = Path(head)
    try:
        sigs = load_signals(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if name is not None and name not in sigs:
        raise UsageError(f"{path} has no signal named {name!r}")
    return sigs, name


def load_signal(arg: str) -> Tuple[str, Signal]:
    """One named signal from an inline list, a file, or ``path:name``."""
    if _is_inline(arg):
        return "", parse_signal(arg)
    sigs, name = _load_file(arg)
    if name is None:
        if not sigs:
            raise UsageError(f"{arg} contains no signals")
        name = next(iter(sigs))
    return name, sigs[name]


def _load_many(arg: str) -> List[Tuple[str, Signal]]:
    if _is_inline(arg):
        return [("", parse_signal(arg))]
    sigs, name = _load_file(arg)
    return [(name, sigs[name])] if name is not None else list(sigs.items())


def _rational(text: str) -> Fraction:
    try:
        return parse_time(text)
    except SignalFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# --------------------------------------------------------------------------
# check


def _run_check(lit, u: Signal, x: Signal) -> CheckReport:
    kind, args = lit.kind, lit.args
    if kind in ("sc",):
        return check_sc(u, x)
    if kind in ("wire", "fixed", "bde", "ride", "bride", "dride"):
        return membership(element_from_literal(lit), u, x)
    if kind == "fdc":
        if args[0] < 0:
            raise ConsistencyViolated(f"fixed delay must be nonnegative, got {args[0]}")
        return check_fdc(u, args[0], x)
    if kind in ("bdc", "dridc"):
        msg = cc_violation(args[0])
        if msg:
            raise ConsistencyViolated(msg)
        if kind == "bdc":
            return check_bdc(u, args[0], x)
        return membership(DRIDE(args[0]), u, x)
    if kind == "ridc":
        msg = nzc_violation(args[0])
        if msg:
            raise ConsistencyViolated(msg)
        return check_ridc(u, args[0], x)
    if kind == "bridc":
        FullBRIDE(args[0])  # raises on inconsistent parameters
        return check_bridc(u, args[0], x)
    raise UsageError(f"cannot check {kind}")


def cmd_check(args) -> int:
    lit = parse_literal(args.literal)
    if args.x is None:
        if _is_inline(args.u):
            raise UsageError("check needs an output signal")
        sigs, _ = _load_file(args.u)
        if len(sigs) < 2:
            raise UsageError(f"{args.u} must hold input and output signals")
        (un, u), (xn, x) = list(sigs.items())[:2]
    else:
        un, u = load_signal(args.u)
        xn, x = load_signal(args.x)
    report = _run_check(lit, u, x)
    text = "member" if report else f"not member: {report.witness}"
    data = {
        "command": "check",
        "condition": args.literal.strip(),
        "verdict": report.verdict,
        "witness": _witness(report),
        "signals": {"u": interval_list(u), "x": interval_list(x)},
    }
    _emit(args, text, data)
    return 0 if report else 1


# --------------------------------------------------------------------------
# solve


def _deterministic_element(text: str):
    lit = parse_literal(text)
    if lit.kind == "fdc":
        return Fixed(lit.args[0])
    if lit.kind == "dridc":
        return DRIDE(lit.args[0])
    e = element_from_literal(lit)
    if not isinstance(e, DETERMINISTIC):
        raise UsageError(f"{e} has no unique output; use 'compose --seed' to sample one")
    return e


def _verify(e, u: Signal, x: Signal) -> Dict[str, bool]:
    checks = {"member": bool(membership(e, u, x))}
    if isinstance(e, DRIDE):
        for form in FORMS:
            checks[f"form_{form}"] = bool(check_dridc_form(u, e.params, x, form))
    return checks


def cmd_solve(args) -> int:
    e = _deterministic_element(args.element)
    _, u = load_signal(args.u)
    x = apply_deterministic(e, u)
    verified = _verify(e, u, x) if args.verify else None
    lines = [format_signal("x", x)]
    if verified is not None:
        lines += [f"# {k}: {'ok' if v else 'FAILED'}" for k, v in verified.items()]
    data = {
        "command": "solve",
        "element": str(e),
        "signals": {"u": interval_list(u), "x": interval_list(x)},
        "verified": verified,
    }
    _emit(args, "\n".join(lines), data)
    return 0 if verified is None or all(verified.values()) else 1


# --------------------------------------------------------------------------
# compose


def cmd_compose(args) -> int:
    chain = parse_chain(args.chain)
    _, u = load_signal(args.u)
    report = chain_apply(chain, u, seed=args.seed)
    folded, closed = fold_chain(chain)
    names = [f"x{i}" for i in range(1, len(chain) + 1)]
    width = max(len(format_signal(n, s.output)) for n, s in zip(names, report.stages))
    width = max(width, len(format_signal("u", u)))
    lines = [format_signal("u", u)]
    stages = []
    for i, (n, st) in enumerate(zip(names, report.stages), 1):
        verdict = "member" if st.verdict else f"NOT MEMBER ({st.verdict.witness})"
        lines.append(f"{format_signal(n, st.output):<{width}}  # stage {i}: {st.element} {verdict}")
        stages.append({
            "element": str(st.element),
            "input": interval_list(st.input),
            "output": interval_list(st.output),
            "verdict": st.verdict.verdict,
            "witness": _witness(st.verdict),
        })
    equivalent_ok = None
    if closed:
        lines.append(f"equivalent: {folded}")
        equivalent_ok = bool(membership(folded, u, report.output))
        lines.append(f"equivalent accepts output: {'yes' if equivalent_ok else 'no'}")
    else:
        lines.append("NOT CLOSED")
        lines.append(f"envelope: {folded}" if folded is not None else "envelope: none")
    data = {
        "command": "compose",
        "chain": [str(e) for e in chain],
        "seed": args.seed,
        "input": interval_list(u),
        "stages": stages,
        "closed": closed,
        "equivalent": str(folded) if closed else None,
        "equivalent_accepts_output": equivalent_ok,
        "envelope": None if closed or folded is None else str(folded),
    }
    _emit(args, "\n".join(lines), data)
    ok = report.ok and equivalent_ok is not False
    return 0 if ok else 1


# --------------------------------------------------------------------------
# cc


def cmd_cc(args) -> int:
    lit = parse_literal(args.literal)
    data = {"command": "cc", "literal": args.literal.strip(), "witness": None}
    lines = []
    if lit.kind in ("bdc", "dridc", "bde", "dride"):
        p = lit.args[0]
        msg = cc_violation(p)
        if msg:
            w = cc_witness(p)
            lines.append(f"witness: u := {format_intervals(w.u)} at t={w.t}")
            data["witness"] = {"u": interval_list(w.u), "time": str(w.t)}
    elif lit.kind in ("ridc", "ride"):
        msg = nzc_violation(lit.args[0])
        data["trivial"] = nzc_trivial(lit.args[0])
        if not msg:
            lines.append("NZC holds" + (" (trivially)" if data["trivial"] else ""))
    elif lit.kind in ("bridc", "bride"):
        disj = bridc_disjuncts(lit.args[0])
        data["disjuncts"] = disj
        held = [k for k, v in disj.items() if v]
        msg = None if held else "CC violated: no disjunct of the bounded inertial condition holds"
        if held:
            lines.append("CC holds via " + ", ".join(held))
    elif lit.kind in ("fdc", "fixed"):
        msg = None if lit.args[0] >= 0 else f"fixed delay must be nonnegative, got {lit.args[0]}"
    elif lit.kind in ("sc", "wire"):
        msg = None
    else:
        raise UsageError(f"no consistency predicate for {lit.kind}")
    if msg:
        lines.insert(0, msg)
    elif not lines:
        lines.append("CC holds")
    data["holds"] = msg is None
    data["violation"] = msg
    _emit(args, "\n".join(lines), data)
    return 0 if msg is None else 1


# --------------------------------------------------------------------------
# render


def _demo(name: str):
    if name not in DEMOS:
        raise UsageError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    resource, literal = DEMOS[name]
    text = resources.files("delaycalc").joinpath("data", resource).read_text(encoding="utf-8")
    return list(parse_signals(text).items()), literal


def cmd_render(args) -> int:
    rows: List[Tuple[str, StepFunction]] = []
    phases_lit = args.phases
    if args.demo:
        rows, literal = _demo(args.demo)
        phases_lit = phases_lit or literal
    for arg in args.signals:
        rows += _load_many(arg)
    if not rows:
        raise UsageError("nothing to render")
    rows = [(name or f"s{i}", f) for i, (name, f) in enumerate(rows, 1)]
    step, start = args.step, args.start
    if step <= 0:
        raise UsageError("--step must be positive")
    check_step([f for _, f in rows], step, start)
    width = args.width if args.width is not None else auto_width([f for _, f in rows], step, start)
    if width < 10:
        raise UsageError("--width must be at least 10")

    phases = None
    if phases_lit:
        lit = parse_literal(phases_lit)
        if lit.kind not in ("bridc", "bride"):
            raise UsageError("--phases takes a bridc(...) literal")
        FullBRIDE(lit.args[0])
        phases = bridc_phases(rows[0][1], lit.args[0])

    if args.svg:
        text = render_svg(rows, step, width, start)
    else:
        text = render_text(rows, step, width, start)
        if phases is not None:
            text += f"phases of {phases_lit.strip()} for input {rows[0][0]}:\n"
            text += "".join(f"  {i:>2} {ph.interval():<10} {ph.label()}\n" for i, ph in enumerate(phases, 1))
    data = {
        "command": "render",
        "start": str(start),
        "step": str(step),
        "width": width,
        "rows": [{"name": n, "raster": raster(f, step, width, start), "intervals": interval_list(f)}
                 for n, f in rows],
        "phases": None if phases is None else [
            {"start": _time(ph.start), "end": _time(ph.end), "forced": ph.forced,
             "rise_ok": ph.rise_ok, "fall_ok": ph.fall_ok}
            for ph in phases],
    }
    if args.svg:
        data["svg"] = text
    _emit(args, text, data)
    return 0


# --------------------------------------------------------------------------
# counterexample


def cmd_counterexample(args) -> int:
    if args.name not in COUNTEREXAMPLES:
        raise UsageError(f"unknown counterexample {args.name!r}; choose from {', '.join(COUNTEREXAMPLES)}")
    r = ride_composition_counterexample()
    yes = {True: "yes", False: "no"}
    w = max(len(format_signal(n, s)) for n, s in (("u", r.u), ("x", r.x), ("y", r.y)))
    lines = [
        f"counterexample: {args.name}",
        format_signal("u", r.u),
        f"{format_signal('x', r.x):<{w}}  # {r.first} applied to u",
        f"{format_signal('y', r.y):<{w}}  # {r.second} applied to x",
        f"rising edge of y at t=5: {yes[r.rise_at_5]}",
        f"falling edge of y at t=9: {yes[r.fall_at_9]}",
        f"no rising edge of y at t=12: {yes[r.no_rise_at_12]}",
        f"a single dride(mu,{r.delta},mu,{r.delta}) producing y from u needs:",
    ]
    lines += [f"  {b}" for b in r.bounds]
    lines.append("contradiction: " + ("no mu satisfies all bounds" if r.contradiction else "none found"))
    lines.append(f"candidates mu in {{{', '.join(map(str, r.swept_memories))}}} rejected: {yes[r.swept_rejected]}")
    lines.append("grid search dride(mu,delta,mu,delta), delta in [0,13) step 1/4: "
                 + ("no match" if not r.grid_matches else ", ".join(map(str, r.grid_matches))))
    lines.append("CONFIRMED" if r.confirmed else "NOT CONFIRMED")
    data = {
        "command": "counterexample",
        "name": args.name,
        "signals": {"u": interval_list(r.u), "x": interval_list(r.x), "y": interval_list(r.y)},
        "stages": [str(r.first), str(r.second)],
        "delta": str(r.delta),
        "edges": {"rise_at_5": r.rise_at_5, "fall_at_9": r.fall_at_9, "no_rise_at_12": r.no_rise_at_12},
        "bounds": [{"source": b.source, "relation": b.relation, "value": str(b.value)} for b in r.bounds],
        "contradiction": r.contradiction,
        "grid_matches": [str(p) for p in r.grid_matches],
        "confirmed": r.confirmed,
    }
    _emit(args, "\n".join(lines), data)
    return 0 if r.confirmed else 1


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "data"), default="text",
                        help="text report or JSON document")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled outputs (0: minimal output)")
    common.add_argument("--verify", action="store_true", help="re-check results before printing")

    parser = argparse.ArgumentParser(prog="delaycalc", description="Exact delay-model calculus for binary signals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="membership of (u, x) in a delay condition")
    p.add_argument("literal", help="e.g. 'bdc(1,3,1,3)', 'ridc(...)', 'dride(...)', 'sc'")
    p.add_argument("u", help="input signal, or a file holding input and output")
    p.add_argument("x", nargs="?", help="output signal")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", parents=[common], help="unique output of a deterministic element")
    p.add_argument("element", help="e.g. 'dride(1,2,1,2)', 'fixed(2)'")
    p.add_argument("u")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compose", parents=[common], help="run a chain of elements, report the equivalent")
    p.add_argument("chain", help="stages in signal-flow order, separated by ';'")
    p.add_argument("u")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("cc", parents=[common], help="consistency predicate of a parameter literal")
    p.add_argument("literal")
    p.set_defaults(func=cmd_cc)

    p = sub.add_parser("render", parents=[common], help="draw waveforms")
    p.add_argument("signals", nargs="*")
    p.add_argument("--step", type=_rational, default=Fraction(1))
    p.add_argument("--start", type=_rational, default=Fraction(0))
    p.add_argument("--width", type=int, default=None, help="columns (default: fit, at least 10)")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--phases", metavar="BRIDC", help="list bounded inertial phases for the first signal")
    p.add_argument("--demo", choices=sorted(DEMOS))
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("counterexample", parents=[common], help="reproduce a worked counterexample")
    p.add_argument("name", help="one of: " + ", ".join(COUNTEREXAMPLES))
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DelayCalcError as exc:
        sys.stderr.write(f"delaycalc: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
