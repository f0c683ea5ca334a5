"""Command-line front end: ``jscuav <subcommand> [options]``."""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from . import beamforming as bf
from . import comm_link as cl
from . import ofdm_radar as rad
from . import sensing_budget as sb
from . import sweep as sw
from . import validation
from .coverage import ub_acsa
from .params import ConfigError, NetworkParams, load_config

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION = 0, 2, 3
_GLOBAL_DEFAULTS = {"config": None, "seed": 0, "threads": 1, "out": None, "format": None}


def _grid(text: str | None, cast):
    """Parse ``start:stop:step`` (inclusive) or a comma-separated list."""
    if text is None:
        return None
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        vals = [round(start + i * step, 12) for i in range(n)]
    else:
        vals = [float(t) for t in text.split(",") if t.strip()]
    return [cast(v) for v in vals]


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _params(args) -> NetworkParams:
    p = load_config(args.config)
    beta = getattr(args, "beta", None)
    m = getattr(args, "m", None)
    return p.at(beta, m) if beta is not None or m is not None else p


def _print_record(rec: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rec, indent=1) + "\n")
        return
    width = max(len(k) for k in rec)
    for k, v in rec.items():
        out.write(f"{k:<{width}}  {v:.10g}\n" if isinstance(v, float) else f"{k:<{width}}  {v}\n")


def cmd_budget(args) -> int:
    p = _params(args)
    x_q = cl.max_coop_range(p)
    budget = sb.compute_budget(p, x_q)
    cov = ub_acsa(p)
    rec = {
        "beta_r": p.sensing_power_ratio,
        "m": p.num_sus,
        "x_q_m": x_q,
        "i_sen_w": budget.i_sen_w,
        "thermal_w": budget.thermal_w,
        "sinr_min": budget.sinr_min,
        "sinr_min_db": 10 * math.log10(budget.sinr_min),
        "r_max_m": budget.r_max_m,
        "r_d_m": cov.r_d_m,
        "e_s_m2": cov.e_s_m2,
        "ub_acsa_m2": cov.ub_acsa_m2,
        "branch": cov.branch.value,
    }
    with _output(args.out) as out:
        _print_record(rec, args.format or "text", out)
    return EXIT_OK


def cmd_link(args) -> int:
    p = _params(args)
    x_q = cl.max_coop_range(p)
    dists = np.linspace(args.max_distance / args.points, args.max_distance, args.points)
    rows = []
    for d in dists:
        link = cl.link_from_params(p, float(d))
        rows.append((float(d), cl.stp(link, p.snr_threshold),
                     cl.outage_capacity(link, p.max_outage, p.bandwidth_hz)))
    with _output(args.out) as out:
        if args.format == "json":
            out.write(json.dumps({"x_q_m": x_q, "curve": [
                dict(zip(("distance_m", "stp", "capacity_bps"), r)) for r in rows]}, indent=1) + "\n")
        else:
            out.write(f"# x_q_m = {x_q:.17g}\n")
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["distance_m", "stp", "capacity_bps"])
            w.writerows([[f"{v:.17g}" for v in r] for r in rows])
    return EXIT_OK


def cmd_beampattern(args) -> int:
    p = _params(args)
    if args.array == "sena":
        layout, w = bf.synthesize_senb(p)
    else:
        layout, w = bf.synthesize_comb(p)
    pat = bf.evaluate_pattern(layout, w, math.radians(args.res_deg))
    az, el = pat.az_beamwidth_rad, pat.el_beamwidth_rad
    print(f"az_beamwidth_deg={math.degrees(az):.3f} el_beamwidth_deg={math.degrees(el):.3f} "
          f"peak_sidelobe_db={pat.peak_sidelobe_db:.2f} approx_gain={bf.approx_gain(az, el):.1f} "
          f"iterations={w.iterations_used}", file=sys.stderr)
    with _output(args.out) as out:
        bf.write_pattern_csv(pat, out)
    return EXIT_OK


def cmd_radar_demo(args) -> int:
    p = load_config(args.config)
    n_c = args.n_c or p.num_subcarriers
    m_s = args.m_s or p.num_symbols
    frame = rad.make_frame(n_c, m_s, p.bandwidth_hz, seed=args.seed, carrier_hz=p.carrier_hz)
    noise = 0.0 if args.snr_db is None else 10 ** (-args.snr_db / 10)
    echo = rad.TargetEcho(args.range, args.velocity, noise_power_w=noise)
    rx = rad.simulate_echo(frame, echo, seed=args.seed)
    est = rad.estimate(frame, rx)
    rd = rad.range_doppler_map(frame, rx)
    rd_db = 10 * np.log10(np.maximum(rd / rd.max(), 1e-30))
    print(" ".join(f"{k}={v}" for k, v in asdict(est).items()), file=sys.stderr)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["range_bin", "doppler_bin", "power_db"])
        for i_d in range(rd.shape[0]):
            for i_r in range(rd.shape[1]):
                w.writerow([i_r, i_d, f"{rd_db[i_d, i_r]:.6f}"])
    return EXIT_OK


def cmd_sweep(args) -> int:
    p = load_config(args.config)
    result = sw.sweep(p, _grid(args.beta_grid, float), _grid(args.m_grid, int),
                      threads=args.threads, seed=args.seed)
    fmt = args.format or "csv"
    if args.out:
        sw.emit(result, fmt, args.out)
    elif fmt == "json":
        sys.stdout.write(sw.to_json(result) + "\n")
    else:
        sw.write_csv(result, sys.stdout)
    b, m, u = result.argmax
    print(f"argmax beta_r={b:g} m={m} ub_acsa_m2={u:.6g} points={len(result.grid)}",
          file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validation.run_all(args.seed)
    with _output(args.out) as out:
        if args.format == "json":
            out.write(json.dumps([asdict(r) for r in results], indent=1) + "\n")
        else:
            out.write(validation.format_table(results) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the flags appear before or after the subcommand
    common.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS,
                        help="key = value configuration file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="jscuav", parents=[common],
                                     description="Cooperative JSC UAV network analysis")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def op_point(sp):
        sp.add_argument("--beta", type=float, help="sensing power ratio override")
        sp.add_argument("--m", type=int, help="number of SUs override")

    sp = sub.add_parser("budget", parents=[common], help="sensing budget at one operating point")
    op_point(sp)
    sp.set_defaults(func=cmd_budget)

    sp = sub.add_parser("link", parents=[common], help="STP and outage-capacity curves")
    op_point(sp)
    sp.add_argument("--max-distance", type=float, default=10000.0)
    sp.add_argument("--points", type=int, default=100)
    sp.set_defaults(func=cmd_link)

    sp = sub.add_parser("beampattern", parents=[common], help="synthesize and export a beam")
    sp.add_argument("--array", choices=("sena", "coma"), default="sena")
    sp.add_argument("--res-deg", type=float, default=0.5)
    sp.set_defaults(func=cmd_beampattern)

    sp = sub.add_parser("radar-demo", parents=[common], help="single-target range-Doppler map")
    sp.add_argument("--range", type=float, default=150.0)
    sp.add_argument("--velocity", type=float, default=0.0)
    sp.add_argument("--snr-db", type=float, default=None, help="per-symbol SNR (noiseless if omitted)")
    sp.add_argument("--n-c", type=int, default=None)
    sp.add_argument("--m-s", type=int, default=None)
    sp.set_defaults(func=cmd_radar_demo)

    sp = sub.add_parser("sweep", parents=[common], help="grid search over (beta, M)")
    sp.add_argument("--beta-grid", help="start:stop:step or comma list (default 0.01:0.99:0.01)")
    sp.add_argument("--m-grid", help="start:stop:step or comma list (default 1:200:1)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", parents=[common], help="run the oracle suite")
    sp.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
