"""Signal text format and parameter / element literals.

Signal lines look like::

    u := [0,2) [3,4) [7,9)
    x := [5/2,inf)
    z := empty

Endpoints are integers, decimals or ``p/q`` fractions; ``inf`` closes a
signal that ends high.  Blank lines and ``#`` comments are ignored.

Literals::

    bdc(mr,dr,mf,df)  ridc(ur,qr,uf,qf)  bridc(mr,dr,mf,df;ur,qr,uf,qf)
    fdc(d)  dridc(mr,dr,mf,df)  sc
    wire  fixed(d)  bde(...)  ride(...)  bride(...;...)  dride(...)

Chains join element literals with ``;`` in signal-flow order.  Since
``bride`` itself contains a ``;``, chains are split on ``;`` only outside
parentheses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Tuple, Union

from .conditions import BdcParams, BridcParams, RidcParams
from .elements import DRIDE, DelayElement, Fixed, FullBDE, FullBRIDE, FullRIDE, Wire
from .errors import DelayCalcError, SignalFormatError
from .sigcore import Signal, StepFunction, make_signal, support

_LINE = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*:=\s*(.*?)\s*$")
_INTERVAL = re.compile(r"\[\s*([^,\s\]\[)(]+)\s*,\s*([^,\s\]\[)(]+)\s*\)")


def parse_time(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SignalFormatError(f"not a rational number: {text!r}") from None


def _parse_intervals(body: str) -> List[Tuple[Fraction, object]]:
    if body == "empty":
        return []
    out = []
    pos = 0
    for m in _INTERVAL.finditer(body):
        if body[pos:m.start()].strip():
            raise SignalFormatError(f"unexpected text {body[pos:m.start()].strip()!r}")
        lo = parse_time(m.group(1))
        hi_text = m.group(2).strip()
        hi = None if hi_text in ("inf", "+inf", "∞") else parse_time(hi_text)
        out.append((lo, hi))
        pos = m.end()
    if body[pos:].strip():
        raise SignalFormatError(f"unexpected text {body[pos:].strip()!r}")
    if not out:
        raise SignalFormatError("expected intervals like [a,b) or the word empty")
    for (a, b), (c, _) in zip(out, out[1:]):
        if b is None or not b <= c:
            raise SignalFormatError(f"intervals must be disjoint and sorted: [{a},{b}) then [{c},...)")
    for a, b in out:
        if b is not None and not a < b:
            raise SignalFormatError(f"empty interval [{a},{b})")
    return out


def parse_signals(text: str) -> Dict[str, Signal]:
    """Parse every ``NAME := ...`` line; order of appearance is preserved."""
    out: Dict[str, Signal] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise SignalFormatError(f"line {lineno}: expected 'NAME := intervals'")
        name, body = m.groups()
        try:
            out[name] = make_signal(_parse_intervals(body))
        except DelayCalcError as exc:
            raise SignalFormatError(f"line {lineno}: {exc}") from None
    return out


def parse_signal(text: str) -> Signal:
    """Parse a single signal from either a full line or a bare interval list."""
    if ":=" in text:
        sigs = parse_signals(text)
        if len(sigs) != 1:
            raise SignalFormatError(f"expected one signal, found {len(sigs)}")
        return next(iter(sigs.values()))
    return make_signal(_parse_intervals(text.strip()))


def load_signals(path: Union[str, Path]) -> Dict[str, Signal]:
    return parse_signals(Path(path).read_text(encoding="utf-8"))


def format_intervals(f: StepFunction) -> str:
    return str(support(f))


def format_signal(name: str, f: StepFunction) -> str:
    return f"{name} := {format_intervals(f)}"


def interval_list(f: StepFunction) -> List[List[str]]:
    """Structured form: list of ``[start, end]`` strings, ``inf`` for unbounded ends."""
    return [["-inf" if a is None else str(a), "inf" if b is None else str(b)] for a, b in support(f)]


# --------------------------------------------------------------------------
# literals

_LITERAL = re.compile(r"^\s*([a-z]+)\s*(?:\((.*)\))?\s*$")


def _numbers(args: str, n: int, what: str) -> List[Fraction]:
    parts = [p for p in args.split(",")] if args.strip() else []
    if len(parts) != n:
        raise SignalFormatError(f"{what} expects {n} values, got {len(parts)}")
    return [parse_time(p) for p in parts]


@dataclass(frozen=True)
class Literal:
    kind: str
    args: Tuple


def parse_literal(text: str) -> Literal:
    """Split ``name(args)`` into its kind and numeric arguments.

    Bundles are validated (``0 <= m <= d``) but consistency predicates are not
    checked here.
    """
    m = _LITERAL.match(text)
    if not m:
        raise SignalFormatError(f"cannot parse literal {text!r}")
    kind, args = m.group(1), m.group(2)
    try:
        if kind in ("sc", "wire"):
            if args not in (None, ""):
                raise SignalFormatError(f"{kind} takes no arguments")
            return Literal(kind, ())
        if args is None:
            raise SignalFormatError(f"{kind} needs arguments")
        if kind in ("fdc", "fixed"):
            return Literal(kind, tuple(_numbers(args, 1, kind)))
        if kind in ("bdc", "dridc", "bde", "dride"):
            return Literal(kind, (BdcParams(*_numbers(args, 4, kind)),))
        if kind in ("ridc", "ride"):
            return Literal(kind, (RidcParams(*_numbers(args, 4, kind)),))
        if kind in ("bridc", "bride"):
            halves = args.split(";")
            if len(halves) != 2:
                raise SignalFormatError(f"{kind} expects 'mr,dr,mf,df;ur,qr,uf,qf'")
            return Literal(kind, (BridcParams(BdcParams(*_numbers(halves[0], 4, kind)),
                                              RidcParams(*_numbers(halves[1], 4, kind))),))
    except SignalFormatError:
        raise
    except DelayCalcError as exc:
        raise SignalFormatError(f"{text.strip()}: {exc}") from None
    raise SignalFormatError(f"unknown literal kind {kind!r}")


ELEMENT_KINDS = {"wire", "fixed", "bde", "ride", "bride", "dride"}


def parse_element(text: str) -> DelayElement:
    """Element literal to element; raises ConsistencyViolated for bad parameters."""
    return element_from_literal(parse_literal(text))


def element_from_literal(lit: Literal) -> DelayElement:
    if lit.kind not in ELEMENT_KINDS:
        raise SignalFormatError(f"{lit.kind!r} is not a delay element")
    if lit.kind == "wire":
        return Wire()
    if lit.kind == "fixed":
        return Fixed(lit.args[0])
    cls = {"bde": FullBDE, "ride": FullRIDE, "bride": FullBRIDE, "dride": DRIDE}[lit.kind]
    return cls(lit.args[0])


def split_chain(text: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    parts = [p.strip() for p in parts]
    if any(not p for p in parts):
        raise SignalFormatError(f"empty stage in chain {text!r}")
    return parts


def parse_chain(text: str) -> List[DelayElement]:
    return [parse_element(p) for p in split_chain(text)]
