"""Command line front end.

Subcommands: construct (code design as JSON), schedule (pruned decode
schedule as JSON), latency (time-step report), simulate (AWGN Monte
Carlo sweep to CSV, with companion figure when writing to a file).

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import json
import os
import sys

from .channel import SimConfig, format_csv, run_sweep
from .codes import CONSTRUCTIONS, build_code
from .latency import latency_report, load_cost_model, render_latency_table
from .schedule import MergerConfig, build_schedule, merger_set, schedule_stats


def _add_code_flags(p):
    p.add_argument("--N", "--n", dest="N", type=int, required=True,
                   help="block length, a power of two")
    p.add_argument("--k", "--K", dest="K", type=int, required=True,
                   help="number of information bits")
    p.add_argument("--construction", choices=CONSTRUCTIONS, default="bhattacharyya",
                   help="channel ranking method (default: bhattacharyya)")
    p.add_argument("--design-param", type=float, default=None,
                   help="erasure probability or design SNR in dB")


def _make_code(args):
    try:
        return build_code(args.N, args.K, args.construction, args.design_param)
    except ValueError as exc:
        args.parser.error(str(exc))


def _make_mergers(args, spec, min_node_size=1):
    try:
        merger_set(spec)
    except ValueError as exc:
        args.parser.error(str(exc))
    return MergerConfig(spec, min_node_size)


def cmd_construct(args):
    code = _make_code(args)
    print(code.to_json())
    return 0


def cmd_schedule(args):
    code = _make_code(args)
    cfg = _make_mergers(args, args.mergers, args.min_node_size)
    sched = build_schedule(code, cfg)
    payload = {
        "code": code.to_json_dict(),
        "schedule": sched.to_json_dict(),
        "stats": schedule_stats(sched),
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_latency(args):
    code = _make_code(args)
    names = [s.strip() for s in args.configs.split(",") if s.strip()]
    if not names:
        args.parser.error("--configs needs at least one name")
    # "+" joins tags into one custom set, e.g. REP+SPC.
    configs = [_make_mergers(args, n.replace("+", ",")) for n in names]
    for cfg, name in zip(configs, names):
        cfg.name = name
    cost_model = load_cost_model(args.cost_model) if args.cost_model else None
    report = latency_report(code, configs, cost_model)
    print(render_latency_table(report))
    print(json.dumps(report, indent=2))
    if args.plot:
        from .plotting import save_latency_figure

        save_latency_figure(report, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def _parse_snr(args):
    text = args.snr
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:step:stop")
            start, step, stop = parts
            if step <= 0:
                raise ValueError("step must be positive")
            if stop < start:
                raise ValueError("stop must not be below start")
            count = int((stop - start) / step + 1e-9) + 1
            return tuple(start + i * step for i in range(count))
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        args.parser.error(f"bad --snr {text!r}: {exc}")


def cmd_simulate(args):
    code = _make_code(args)
    if args.decoder == "fast":
        _make_mergers(args, args.mergers)
    snr_points = _parse_snr(args)
    cfg = SimConfig(
        code,
        decoder=args.decoder,
        mergers=args.mergers,
        rule=args.rule,
        snr_points=snr_points,
        max_frames=args.max_frames,
        max_frame_errors=args.max_frame_errors,
        seed=args.seed,
        name=args.name,
        min_node_size=args.min_node_size,
    )
    threads = args.threads if args.threads is not None else os.cpu_count() or 1
    rows = run_sweep(cfg, threads=threads)
    text = format_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for row in rows:
        print(
            f"{row['config_name']} @ {row['ebn0_db']} dB: "
            f"frames={row['frames']} ber={row['ber']:.3e} fer={row['fer']:.3e}",
            file=sys.stderr,
        )
    plot_path = args.plot
    if plot_path is None and args.out and not args.no_plot:
        plot_path = os.path.splitext(args.out)[0] + ".png"
    if plot_path and not args.no_plot:
        from .plotting import save_sweep_figure

        save_sweep_figure(rows, plot_path)
        print(f"figure written to {plot_path}", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polarfast",
        description="Polar code construction, decoding schedules, latency "
                    "reports, and AWGN simulation sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="design a code and print its JSON spec")
    _add_code_flags(p)
    p.set_defaults(func=cmd_construct, parser=p)

    p = sub.add_parser("schedule", help="print the pruned decode schedule as JSON")
    _add_code_flags(p)
    p.add_argument("--mergers", default="fast-ssc",
                   help="bundle name (none|fast-ssc|lossless|all) or comma list of tags")
    p.add_argument("--min-node-size", type=int, default=1,
                   help="smallest span a merged node may cover")
    p.set_defaults(func=cmd_schedule, parser=p)

    p = sub.add_parser("latency", help="time-step report across merger configs")
    _add_code_flags(p)
    p.add_argument("--configs", default="fast-ssc,lossless,all",
                   help="comma list of configs; first is the baseline; join tags "
                        "with '+' for a custom set (default: fast-ssc,lossless,all)")
    p.add_argument("--cost-model", default=None,
                   help="JSON file of per-operation costs merged over the defaults")
    p.add_argument("--plot", default=None, help="also render a bar chart to this path")
    p.set_defaults(func=cmd_latency, parser=p)

    p = sub.add_parser("simulate", help="run an AWGN sweep and write CSV")
    _add_code_flags(p)
    p.add_argument("--snr", default="0:0.5:4",
                   help="Eb/N0 grid in dB, start:step:stop inclusive, or comma list")
    p.add_argument("--decoder", choices=("sc", "fast"), default="fast")
    p.add_argument("--mergers", default="fast-ssc",
                   help="merger bundle or tag list for the fast decoder")
    p.add_argument("--rule", choices=("minsum", "exact"), default="minsum",
                   help="check-node update rule")
    p.add_argument("--seed", type=int, default=1, help="base RNG seed")
    p.add_argument("--max-frames", type=int, default=100000)
    p.add_argument("--max-frame-errors", type=int, default=100)
    p.add_argument("--min-node-size", type=int, default=1)
    p.add_argument("--name", default=None, help="config_name override for the CSV")
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads across SNR points (default: all cores); "
                        "results are identical for any value")
    p.add_argument("--plot", default=None,
                   help="figure path (default: CSV path with .png when --out is set)")
    p.add_argument("--no-plot", action="store_true", help="skip the figure")
    p.set_defaults(func=cmd_simulate, parser=p)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
