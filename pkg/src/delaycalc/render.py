"""Waveform rendering and phase breakdown.

Rasters sample each signal at ``start + i * step``.  A column that falls on a
transition shows ``/`` (rise) or ``\\`` (fall); other columns show ``_`` for
0 and ``▔`` for 1.  Every transition must land exactly on a column, so the
drawing never rounds an edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .conditions import BridcParams
from .errors import DelayCalcError
from .sigcore import StepFunction, _merged_times, eval_at, format_time
from .windows import dilate, erode

LOW, HIGH, RISE, FALL = "_", "▔", "/", "\\"


class RenderError(DelayCalcError, ValueError):
    pass


def rational_gcd(values: Sequence[Fraction]) -> Optional[Fraction]:
    """Largest rational ``g`` with every value an integer multiple of ``g``."""
    values = [abs(Fraction(v)) for v in values if v != 0]
    if not values:
        return None
    den = math.lcm(*(v.denominator for v in values))
    num = math.gcd(*(int(v * den) for v in values))
    return Fraction(num, den)


def check_step(signals: Sequence[StepFunction], step: Fraction, start: Fraction = Fraction(0)):
    if step <= 0:
        raise RenderError("step must be positive")
    offsets = [t - start for f in signals for t in f.transitions]
    bad = [o + start for o in offsets if (o / step).denominator != 1]
    if bad:
        g = rational_gcd(offsets)
        raise RenderError(f"step {step} does not sample transition at t={bad[0]}; try --step {g}")


def auto_width(signals: Sequence[StepFunction], step: Fraction, start: Fraction = Fraction(0)) -> int:
    last = max((t for f in signals for t in f.transitions), default=start)
    return max(10, int((last - start) / step) + 3)


def raster(f: StepFunction, step: Fraction, width: int, start: Fraction = Fraction(0)) -> str:
    edges = set(f.transitions)
    chars = []
    for i in range(width):
        t = start + i * step
        v = eval_at(f, t)
        if t in edges:
            chars.append(RISE if v else FALL)
        else:
            chars.append(HIGH if v else LOW)
    return "".join(chars)


def render_text(rows: Sequence[Tuple[str, StepFunction]], step: Fraction, width: int,
                start: Fraction = Fraction(0)) -> str:
    check_step([f for _, f in rows], step, start)
    pad = max((len(n) for n, _ in rows), default=1) + 1
    lines = [f"{name:<{pad}}{raster(f, step, width, start)}" for name, f in rows]
    end = start + (width - 1) * step
    lines.append(f"{'':<{pad}}t={start}..{end} step={step}")
    return "\n".join(lines) + "\n"


def render_svg(rows: Sequence[Tuple[str, StepFunction]], step: Fraction, width: int,
               start: Fraction = Fraction(0), px: int = 20, row_h: int = 40) -> str:
    """SVG drawing; vertical edges are drawn, a filled bullet marks the value taken at each edge."""
    check_step([f for _, f in rows], step, start)
    label_w = 40
    total_w = label_w + px * (width - 1) + 20
    total_h = row_h * len(rows) + 20
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}">']
    for k, (name, f) in enumerate(rows):
        base = 10 + row_h * k + row_h - 10
        top = base - (row_h - 20)

        def x_of(t):
            return label_w + float((t - start) / step) * px

        def y_of(v):
            return top if v else base

        out.append(f'<text x="4" y="{base}" font-family="monospace" font-size="12">{name}</text>')
        end = start + (width - 1) * step
        pts = [(x_of(start), y_of(eval_at(f, start)))]
        for t in f.transitions:
            if start < t <= end:
                pts.append((x_of(t), y_of(1 - eval_at(f, t))))
                pts.append((x_of(t), y_of(eval_at(f, t))))
        pts.append((x_of(end), y_of(eval_at(f, end))))
        poly = " ".join(f"{x:g},{y:g}" for x, y in pts)
        out.append(f'<polyline points="{poly}" fill="none" stroke="black"/>')
        for t in f.transitions:
            if start <= t <= end:
                v = eval_at(f, t)
                out.append(f'<circle cx="{x_of(t):g}" cy="{y_of(v):g}" r="3" fill="black"/>')
                out.append(f'<circle cx="{x_of(t):g}" cy="{y_of(1 - v):g}" r="3" fill="white" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Phase:
    """Maximal time interval on which the bounded inertial constraints are constant.

    ``forced`` is the output value imposed by the bounds (None if free);
    ``rise_ok``/``fall_ok`` tell whether an output edge may occur there.
    """

    start: Optional[Fraction]
    end: Optional[Fraction]
    forced: Optional[int]
    rise_ok: bool
    fall_ok: bool

    def interval(self) -> str:
        lb = "(" if self.start is None else "["
        return f"{lb}{format_time(self.start, side='left')},{format_time(self.end)})"

    def label(self) -> str:
        x = "free" if self.forced is None else f"x={self.forced}"
        return f"{x} rise:{'yes' if self.rise_ok else 'no'} fall:{'yes' if self.fall_ok else 'no'}"


def bridc_phases(u: StepFunction, p: BridcParams) -> List[Phase]:
    lower = erode(u, p.bdc.rise)
    upper = dilate(u, p.bdc.fall)
    rise = erode(u, p.ridc.rise)
    fall = erode(~u, p.ridc.fall)
    fns = (lower, upper, rise, fall)
    cuts = _merged_times(*fns)

    def attrs(t):
        lo, up, r, f = (eval_at(fn, t) for fn in fns)
        forced = 1 if lo else 0 if not up else None
        return forced, bool(r), bool(f)

    if not cuts:
        return [Phase(None, None, *attrs(Fraction(0)))]
    bounds = [None] + cuts + [None]
    phases: List[Phase] = []
    for a, b in zip(bounds, bounds[1:]):
        probe = cuts[0] - 1 if a is None else a
        ph = Phase(a, b, *attrs(probe))
        if phases and (phases[-1].forced, phases[-1].rise_ok, phases[-1].fall_ok) == \
                (ph.forced, ph.rise_ok, ph.fall_ok):
            phases[-1] = Phase(phases[-1].start, b, ph.forced, ph.rise_ok, ph.fall_ok)
        else:
            phases.append(ph)
    return phases
