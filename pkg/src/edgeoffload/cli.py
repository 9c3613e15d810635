"""Command-line front end.

    edgeoffload analyze CONFIG
    edgeoffload sweep CONFIG [--figure fig3|fig4|fig5] [--seed N] [--out DIR]
                             [--trials N] [--workers N]

Exit codes: 0 success, 1 config error, 2 infeasible scenario, 3 I/O error.
The output directory may also be set with ``EDGEOFFLOAD_OUT_DIR``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from . import inference_model as im
from . import kinematics as kin
from . import link_compute as lc
from . import policy as pol
from .config import RunConfig, SweepSection, load_config
from .errors import ConfigError
from .simulator import SweepResult, SweptParameter, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3
OUT_DIR_ENV = "EDGEOFFLOAD_OUT_DIR"

FIG4_CAPACITIES = tuple(0.5e9 * k for k in range(1, 11))
FIG5_QUALITIES = tuple(round(0.05 + 0.1 * k, 2) for k in range(10))


def figure_presets(cfg: RunConfig, figure: str) -> list[RunConfig]:
    """Expand a figure preset into one fully explicit run config per CSV."""
    radio = cfg.scenario.radio
    at_2ghz = replace(cfg.scenario, radio=replace(radio, mes_capacity=2e9))

    def case(scenario, param, values, name):
        return replace(cfg, scenario=scenario, sweep=SweepSection(param, tuple(values)), csv_name=name)

    def with_m(scenario, m):
        return replace(scenario, radio=replace(scenario.radio, num_vehicles=m))

    if figure == "fig3":
        return [case(at_2ghz, SweptParameter.VEHICLE_COUNT, range(1, 21), "fig3.csv")]
    if figure == "fig4":
        return [
            case(with_m(cfg.scenario, m), SweptParameter.MES_CAPACITY, FIG4_CAPACITIES, f"fig4_M{m}.csv")
            for m in (2, 12)
        ]
    if figure == "fig5":
        return [
            case(with_m(at_2ghz, m), SweptParameter.DATA_QUALITY, FIG5_QUALITIES, f"fig5_M{m}.csv")
            for m in (2, 12)
        ]
    raise ConfigError(f"unknown figure preset {figure!r}")


def manifest(cfg: RunConfig, result: SweepResult) -> dict:
    return {
        "artifact_version": __version__,
        "seed": cfg.seed,
        "config_hash": result.config_hash,
        "csv": cfg.csv_name,
        "rows": len(result.rows),
        "config": cfg.to_dict(),
    }


def _fmt(x) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.6g}"
    return str(x)


def analyze(cfg: RunConfig) -> tuple[list[tuple[str, str]], bool]:
    sc = cfg.scenario
    geom = sc.geometry
    window = kin.time_gain(geom)
    mapping = sc.inference.mapping()
    eps_l = im.error_rate(mapping, sc.inference.quality, sc.inference.capability_vehicle)
    eps_o = im.error_rate(mapping, sc.inference.quality, sc.inference.capability_server)
    task = lc.TaskSpec(sc.tasks.mean_input_bits, sc.tasks.mean_cycles)
    env = sc.radio.environment()
    tau_l = float(lc.local_delay(task, lc.VehicleCompute(sc.tasks.vehicle_cpu_rate)))
    tau_o = float(lc.offload_delay(task, env))
    sol = pol.solve(tau_l, tau_o, window, eps_l, eps_o)

    raw = window.theta_ub_raw
    raw_note = " (negative, clamped to 0)" if raw < 0 else ""
    lines = [
        ("reachability", window.reachability.value),
        ("theta_b_s", _fmt(window.theta_b)),
        ("theta_ub_raw_s", _fmt(raw) + raw_note),
        ("theta_ub_s", _fmt(window.theta_ub)),
        ("t_delta_s", _fmt(window.t_delta)),
        ("pedestrian_reach_s", _fmt(kin.pedestrian_reach_time(geom))),
        ("pedestrian_clear_s", _fmt(kin.pedestrian_clear_time(geom))),
        ("eta", _fmt(sol.eta)),
        ("effective_deadline_s", _fmt(sol.effective_deadline)),
        ("uplink_rate_bps", _fmt(float(lc.uplink_rate(env)))),
        ("tau_local_s", _fmt(tau_l)),
        ("tau_offload_s", _fmt(tau_o)),
        ("eps_local", _fmt(eps_l)),
        ("eps_offload", _fmt(eps_o)),
        ("rho_star", _fmt(sol.rho_star)),
        ("eps_threshold", _fmt(sol.eps_threshold)),
        ("expected_delay_s", _fmt(float(sol.expected_delay))),
        ("expected_error", _fmt(float(sol.expected_error))),
        ("feasible", str(sol.feasible).lower()),
    ]
    if window.reachability is kin.Reachability.STOPS_BEFORE_ZONE:
        lines.append(("note", "braking alone stops the vehicle before the zone; no deadline pressure"))
    for braking in (False, True):
        label = "avoidance_braking" if braking else "avoidance_constant_speed"
        verdict = kin.classify_avoidance(
            geom, kin.vehicle_reach_time(geom, braking), kin.vehicle_clear_time(geom, braking)
        )
        lines.append((label, verdict.value))
    return lines, bool(sol.feasible)


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    lines, feasible = analyze(cfg)
    width = max(len(k) for k, _ in lines)
    for k, v in lines:
        print(f"{k:<{width}}  {v}")
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_sweep(args) -> int:
    cfg = load_config(args.config).with_overrides(
        seed=args.seed, trials=args.trials, workers=args.workers
    )
    out_dir = args.out or os.environ.get(OUT_DIR_ENV) or cfg.out_dir
    cfg = replace(cfg, out_dir=str(out_dir))
    cases = figure_presets(cfg, args.figure) if args.figure else [cfg]
    results = [(c, run_sweep(c.sweep_spec(), workers=c.workers)) for c in cases]

    out = Path(out_dir)
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        staged = []
        for c, res in results:
            csv_path = out / c.csv_name
            man_path = csv_path.with_suffix(".manifest.json")
            for final, content in (
                (csv_path, res.to_csv()),
                (man_path, json.dumps(manifest(c, res), indent=2, sort_keys=True) + "\n"),
            ):
                tmp = final.with_name(final.name + ".partial")
                written.append(tmp)
                tmp.write_text(content)
                staged.append((tmp, final))
        for tmp, final in staged:
            os.replace(tmp, final)
            written.append(final)
    except OSError as exc:
        for p in written:
            if p.is_file():
                p.unlink()
        raise OSError(f"cannot write outputs to {out}: {exc.strerror or exc}") from exc

    for c, res in results:
        print(f"wrote {out / c.csv_name} ({len(res.rows)} rows)")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: usage: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="edgeoffload", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="closed-form window and policy for one scenario")
    a.add_argument("config")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="Monte Carlo sweep, writes CSV + manifest")
    s.add_argument("config")
    s.add_argument("--figure", metavar="{fig3,fig4,fig5}")
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.add_argument("--trials", type=int)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
