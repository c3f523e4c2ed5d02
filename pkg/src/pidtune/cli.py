"""Command-line entry point: score a single gain vector, or run a full
tuning search from Ziegler-Nichols or random starting gains."""

import argparse
import secrets
import sys
from pathlib import Path

import numpy as np

from .errors import PidTuneError, PlantParseError, ResampleExhausted
from .lti import (
    PidGains,
    SimConfig,
    StepResponse,
    TransferFunction,
    close_unity_feedback,
    pid_transfer_function,
    simulate_step,
    tf_to_state_space,
)
from .objective import SettlingBand, evaluate
from .render import FrameStyle, export_trace, render_animation
from .search import SearchConfig, optimize
from .tuning import RandomStartConfig, draw_gains, ultimate_point, zn_pid_gains

PLANT_PRESETS = {
    # classic third-order lag: relative degree 3 keeps the ideal-PID loop
    # strictly proper and the ultimate point is analytic (ku=8)
    "benchmark3": TransferFunction((1.0,), (1.0, 3.0, 3.0, 1.0)),
}

MAX_RESAMPLE_ATTEMPTS = 1000


def parse_plant(text: str) -> TransferFunction:
    """Parse a preset name or the grammar ``num: c_n ... c_0 / den: d_m ... d_0``."""
    if text in PLANT_PRESETS:
        return PLANT_PRESETS[text]
    slash = text.find("/")
    if slash < 0:
        raise PlantParseError("expected '/' between num and den parts", len(text))
    num = _parse_coeff_part(text, 0, slash, "num:")
    den = _parse_coeff_part(text, slash + 1, len(text), "den:")
    try:
        tf = TransferFunction(num, den)
    except ValueError as exc:
        raise PlantParseError(str(exc), slash + 1) from exc
    if not tf.is_proper:
        raise PlantParseError(
            f"plant is improper (num degree {tf.num_degree} > den degree {tf.den_degree})",
            0,
        )
    return tf


def _parse_coeff_part(text: str, start: int, end: int, keyword: str) -> list[float]:
    part = text[start:end]
    stripped = part.lstrip()
    offset = start + (len(part) - len(stripped))
    if not stripped.startswith(keyword):
        raise PlantParseError(f"expected {keyword!r}", offset)
    coeffs = []
    pos = offset + len(keyword)
    for token in text[pos:end].split():
        tok_pos = text.index(token, pos, end)
        try:
            coeffs.append(float(token))
        except ValueError:
            raise PlantParseError(f"invalid coefficient {token!r}", tok_pos) from None
        pos = tok_pos + len(token)
    if not coeffs:
        raise PlantParseError(f"no coefficients after {keyword!r}", pos)
    return coeffs


def _loop_response(gains: PidGains, plant: TransferFunction, cfg: SimConfig) -> StepResponse:
    loop = close_unity_feedback(pid_transfer_function(gains), plant)
    return simulate_step(tf_to_state_space(loop), cfg)


def _gain_line(label: str, gains: PidGains, value) -> str:
    return (
        f"{label}: kp={gains.kp:.6g} ki={gains.ki:.6g} kd={gains.kd:.6g} "
        f"f={value.total:.6g} rise_time={value.rise_time:.6g} deviation={value.deviation:.6g}"
    )


def cmd_simulate(args) -> int:
    plant = parse_plant(args.plant)
    cfg = SimConfig(t_max=args.tmax, dt=args.dt)
    band = SettlingBand()
    gains = PidGains(kp=args.kp, ki=args.ki, kd=args.kd)
    value = evaluate(gains, plant, cfg, band)
    print(
        f"total={value.total:.6g} rise_time={value.rise_time:.6g} "
        f"deviation={value.deviation:.6g} rose={'true' if value.rose else 'false'}"
    )
    if args.samples:
        resp = _loop_response(gains, plant, cfg)
        lines = ["t,z"]
        lines.extend(
            f"{k * resp.dt:.17g},{z:.17g}" for k, z in enumerate(resp.values)
        )
        Path(args.samples).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
        print(f"samples written to {args.samples}")
    return 0


def _starting_gains(args, plant, cfg):
    """Resolve the start flag into gains plus a printable description."""
    if args.start == "zn":
        up = ultimate_point(plant)
        gains = zn_pid_gains(up)
        return gains, f"start=zn ku={up.ku:.6g} tu={up.tu:.6g}"
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    rs = RandomStartConfig(seed=seed)
    rng = np.random.default_rng(rs.seed)
    if not args.ensure_unstable:
        return draw_gains(rng, rs.low, rs.high), f"start=random seed={seed}"
    for attempt in range(1, MAX_RESAMPLE_ATTEMPTS + 1):
        gains = draw_gains(rng, rs.low, rs.high)
        if _loop_response(gains, plant, cfg).diverged:
            return gains, f"start=random seed={seed} unstable-after={attempt} draws"
    raise ResampleExhausted(
        f"no destabilizing gains in {MAX_RESAMPLE_ATTEMPTS} draws (seed {seed})"
    )


def cmd_tune(args) -> int:
    plant = parse_plant(args.plant)
    cfg = SimConfig(t_max=args.tmax, dt=args.dt)
    band = SettlingBand()
    search = SearchConfig(
        initial_step=args.step, min_step=args.min_step, max_evals=args.max_evals
    )
    gains, start_desc = _starting_gains(args, plant, cfg)

    print(f"plant: {plant.to_text()}")
    print(
        f"dt={cfg.dt:.6g} tmax={cfg.t_max:.6g} "
        f"band=[{band.lower:.6g},{band.upper:.6g}] rise_level={band.rise_level:.6g}"
    )
    print(
        f"search: step={search.initial_step:.6g} min_step={search.min_step:.6g} "
        f"shrink={search.shrink:.6g} expand={search.expand:.6g} max_evals={search.max_evals}"
    )
    print(start_desc)

    trace = optimize(gains, lambda g: evaluate(g, plant, cfg, band), search)

    print(_gain_line("initial", trace.records[0].gains, trace.records[0].objective))
    print(_gain_line("final", trace.incumbent, trace.incumbent_value))
    print(f"evaluations={len(trace.records)} termination={trace.termination}")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "trace.csv").write_bytes(export_trace(trace, "csv"))
        (out / "trace.json").write_bytes(export_trace(trace, "json"))
        print(f"trace written to {out / 'trace.csv'} and {out / 'trace.json'}")
        if args.frames:
            responses = [_loop_response(r.gains, plant, cfg) for r in trace.records]
            n = render_animation(
                trace, responses, band, FrameStyle(), out / "frames", plant=plant
            )
            print(f"{n} frames written to {out / 'frames'}")
    elif args.frames:
        raise PidTuneError("--frames requires --out")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pidtune",
        description="PID tuning by compass search over simulated step responses",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--plant", default="benchmark3",
                       help="preset name or 'num: ... / den: ...' text")
        p.add_argument("--dt", type=float, default=0.01, help="integration step [s]")
        p.add_argument("--tmax", type=float, default=100.0, help="horizon [s]")

    sim = sub.add_parser("simulate", help="score one gain vector")
    add_common(sim)
    sim.add_argument("--kp", type=float, default=0.0)
    sim.add_argument("--ki", type=float, default=0.0)
    sim.add_argument("--kd", type=float, default=0.0)
    sim.add_argument("--samples", help="write the t,z samples as CSV to this path")
    sim.set_defaults(func=cmd_simulate)

    tune = sub.add_parser("tune", help="run the direct search")
    add_common(tune)
    tune.add_argument("--start", choices=("zn", "random"), default="zn")
    tune.add_argument("--seed", type=int, help="seed for random starts (echoed)")
    tune.add_argument("--ensure-unstable", action="store_true",
                      help="resample random starts until the initial response diverges")
    tune.add_argument("--out", help="directory for trace.csv / trace.json / frames")
    tune.add_argument("--frames", action="store_true",
                      help="also render one SVG frame per evaluation")
    tune.add_argument("--max-evals", type=int, default=5000)
    tune.add_argument("--step", type=float, default=1.0, help="initial poll step")
    tune.add_argument("--min-step", type=float, default=1e-6, help="termination step")
    tune.set_defaults(func=cmd_tune)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlantParseError as exc:
        print(f"plant parse error: {exc}", file=sys.stderr)
        return 2
    except PidTuneError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
