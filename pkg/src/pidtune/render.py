"""Trace serialization (CSV/JSON) and per-evaluation SVG animation frames.

Frames follow the animation convention: the response curve is green when the
evaluation improved on the best value found so far and red otherwise, with
the settling range marked by horizontal black dashed lines. Frames are
standalone SVG files named film_1.svg, film_2.svg, ... plus an index.json;
assembling them into a video is left to external tools.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import OutputUnwritable
from .lti import StepResponse, TransferFunction
from .objective import SettlingBand
from .search import EvaluationRecord, SearchTrace

CSV_HEADER = "index,kp,ki,kd,total,rise_time,rise_term,deviation,rose,improved,best_so_far"

_SVG_WIDTH = 640
_SVG_HEIGHT = 480
_PLOT = (62.0, 18.0, 624.0, 434.0)  # left, top, right, bottom in px


@dataclass(frozen=True)
class FrameStyle:
    improved_color: str = "green"
    rejected_color: str = "red"
    band_color: str = "black"
    band_dash: str = "6,4"
    axis_label: str = "time [s]"
    max_curve_points: int = 1200

    def __post_init__(self):
        if self.improved_color == self.rejected_color:
            raise ValueError("improved_color and rejected_color must differ")
        if self.max_curve_points < 2:
            raise ValueError("max_curve_points must be at least 2")


def _num(x: float) -> str:
    return f"{x:.17g}"


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _record_fields(rec: EvaluationRecord) -> list[str]:
    o = rec.objective
    return [
        str(rec.index),
        _num(rec.gains.kp),
        _num(rec.gains.ki),
        _num(rec.gains.kd),
        _num(o.total),
        _num(o.rise_time),
        _num(o.rise_term),
        _num(o.deviation),
        _flag(o.rose),
        _flag(rec.improved),
        _num(rec.best_so_far),
    ]


def _record_dict(rec: EvaluationRecord) -> dict:
    o = rec.objective
    return {
        "index": rec.index,
        "kp": rec.gains.kp,
        "ki": rec.gains.ki,
        "kd": rec.gains.kd,
        "total": o.total,
        "rise_time": o.rise_time,
        "rise_term": o.rise_term,
        "deviation": o.deviation,
        "rose": o.rose,
        "improved": rec.improved,
        "best_so_far": rec.best_so_far,
    }


def export_trace(trace: SearchTrace, format: str) -> bytes:
    """Serialize a trace as CSV rows or a JSON object.

    CSV columns are exactly CSV_HEADER with floats at 17 significant digits,
    which round-trips every IEEE double bit-exactly. The JSON object carries
    {config, records, incumbent, termination} with the same field names.
    """
    if not trace.records:
        raise ValueError("trace has no records")
    if format == "csv":
        lines = [CSV_HEADER]
        lines.extend(",".join(_record_fields(r)) for r in trace.records)
        return ("\n".join(lines) + "\n").encode("utf-8")
    if format == "json":
        iv = trace.incumbent_value
        obj = {
            "config": {
                "initial_step": trace.config.initial_step,
                "shrink": trace.config.shrink,
                "expand": trace.config.expand,
                "min_step": trace.config.min_step,
                "max_evals": trace.config.max_evals,
            },
            "records": [_record_dict(r) for r in trace.records],
            "incumbent": {
                "kp": trace.incumbent.kp,
                "ki": trace.incumbent.ki,
                "kd": trace.incumbent.kd,
                "total": iv.total,
                "rise_time": iv.rise_time,
                "rise_term": iv.rise_term,
                "deviation": iv.deviation,
                "rose": iv.rose,
            },
            "termination": trace.termination,
        }
        return (json.dumps(obj, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {format!r}; expected 'csv' or 'json'")


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def render_frame(
    record: EvaluationRecord,
    response: StepResponse,
    band: SettlingBand,
    style: FrameStyle | None = None,
) -> str:
    """One standalone SVG frame: the response curve over [0, t_end], colored
    by the improved flag, with dashed settling-range guides.

    The y-range auto-fits to [min(0, min z), max(1.1, max z)] plus a 5%
    margin, so the settling band is always inside the viewport. Long
    responses are decimated to at most max_curve_points polyline vertices.
    """
    style = style if style is not None else FrameStyle()
    vals = response.values
    if len(vals) < 2:
        raise ValueError("response must have at least 2 samples")
    t_end = response.t_end
    y_lo = min(0.0, float(np.min(vals)))
    y_hi = max(1.1, float(np.max(vals)))
    margin = 0.05 * (y_hi - y_lo)
    y_lo -= margin
    y_hi += margin
    x0, y0, x1, y1 = _PLOT

    def sx(t: float) -> float:
        return x0 + (x1 - x0) * t / t_end

    def sy(z: float) -> float:
        return y1 - (y1 - y0) * (z - y_lo) / (y_hi - y_lo)

    if len(vals) > style.max_curve_points:
        idx = np.linspace(0, len(vals) - 1, style.max_curve_points).round().astype(int)
    else:
        idx = np.arange(len(vals))
    points = " ".join(f"{sx(k * response.dt):.2f},{sy(vals[k]):.2f}" for k in idx)
    color = style.improved_color if record.improved else style.rejected_color

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_WIDTH}" '
        f'height="{_SVG_HEIGHT}" viewBox="0 0 {_SVG_WIDTH} {_SVG_HEIGHT}">',
        f'<rect width="{_SVG_WIDTH}" height="{_SVG_HEIGHT}" fill="white"/>',
        f'<text x="{x0:.2f}" y="{y0 - 5:.2f}" font-family="sans-serif" font-size="12">'
        f"evaluation {record.index}   f = {record.objective.total:.6g}</text>",
    ]
    # axes
    parts.append(
        f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{y1:.2f}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{x0:.2f}" y1="{y1:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" stroke="black"/>'
    )
    for t in _ticks(0.0, t_end):
        px = sx(t)
        parts.append(
            f'<line x1="{px:.2f}" y1="{y1:.2f}" x2="{px:.2f}" y2="{y1 + 5:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{y1 + 18:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{t:.4g}</text>'
        )
    for z in _ticks(y_lo, y_hi):
        py = sy(z)
        parts.append(
            f'<line x1="{x0 - 5:.2f}" y1="{py:.2f}" x2="{x0:.2f}" y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.2f}" y="{py + 4:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{z:.4g}</text>'
        )
    # settling range guides
    for level in (band.upper, band.lower):
        py = sy(level)
        parts.append(
            f'<line class="band-line" x1="{x0:.2f}" y1="{py:.2f}" x2="{x1:.2f}" '
            f'y2="{py:.2f}" stroke="{style.band_color}" '
            f'stroke-dasharray="{style.band_dash}"/>'
        )
    parts.append(
        f'<polyline class="response-curve" fill="none" stroke="{color}" '
        f'stroke-width="1.5" points="{points}"/>'
    )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.2f}" y="{_SVG_HEIGHT - 8}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle">{style.axis_label}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_animation(
    trace: SearchTrace,
    responses: list[StepResponse],
    band: SettlingBand,
    style: FrameStyle | None = None,
    out_dir: str | Path = ".",
    plant: TransferFunction | None = None,
) -> int:
    """Write film_1.svg ... film_N.svg plus index.json; returns N.

    index.json lists the frame files in order with the playback rate hint
    (12 frames per second) and is written last, after every frame exists.
    """
    if len(responses) != len(trace.records):
        raise ValueError(
            f"{len(responses)} responses for {len(trace.records)} records"
        )
    style = style if style is not None else FrameStyle()
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        names = []
        for rec, resp in zip(trace.records, responses):
            name = f"film_{rec.index}.svg"
            (out / name).write_bytes(render_frame(rec, resp, band, style).encode("utf-8"))
            names.append(name)
        index = {
            "frames": names,
            "fps": 12,
            "band": {"upper": band.upper, "lower": band.lower},
            "plant": plant.to_text() if plant is not None else None,
        }
        (out / "index.json").write_bytes((json.dumps(index, indent=2) + "\n").encode("utf-8"))
    except OSError as exc:
        raise OutputUnwritable(f"cannot write frames under {out}: {exc}") from exc
    return len(names)
