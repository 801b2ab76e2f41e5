"""Command line front end: generate / filter / evaluate / compare.

Exit codes: 0 success, 2 configuration or usage error, 3 trajectory parse
error, 4 I/O error. Every value that influenced a run is echoed into the
produced headers and reports. The --seed flag falls back to the
DQFILTER_SEED environment variable, then to 0.
"""

import argparse
import json
import os
import sys

from . import regression, trajio
from .trajectory import (
    RNG_ALGORITHM,
    NoiseSpec,
    PoseTrajectory,
    SplineSpec,
    add_noise,
    evaluate,
    generate_spline_trajectory,
    kalman_baseline,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_IO = 4

NOISE_SEED_OFFSET = 1000003  # keeps spline and noise streams distinct per run

FILTER_METHODS = ("pca", "wpca", "irls", "kalman")
COMPARE_METHODS = (
    ("pca", "qt"),
    ("wpca", "qt"),
    ("irls", "qt"),
    ("dual_pca", "dq"),
    ("dual_wpca", "dq"),
    ("dual_irls", "dq"),
    ("kalman", "qt"),
)


class ConfigError(Exception):
    pass


def _load_config(path):
    if path is None:
        return {}
    with open(path) as handle:
        try:
            config = json.load(handle)
        except ValueError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})")
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return config


def _effective(args, config, key, default):
    """Flag beats config file beats default."""
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _resolve_seed(args, config):
    seed = _effective(args, config, "seed", None)
    if seed is None:
        seed = os.environ.get("DQFILTER_SEED")
    if seed is None:
        seed = 0
    try:
        return int(seed)
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an integer, got {seed!r}")


def _pair(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers")
    return float(parts[0]), float(parts[1])


def _filter_settings(args, config):
    settings = {
        "method": _effective(args, config, "method", "irls"),
        "space": _effective(args, config, "space", "dq"),
        "window": int(_effective(args, config, "window", 19)),
        "irls_iters": int(_effective(args, config, "irls-iters", 5)),
        "delta": float(_effective(args, config, "delta", 1e-6)),
        "prior": _effective(args, config, "prior", "index"),
        "bandwidth": _effective(args, config, "bandwidth", None),
        "kalman_rot": tuple(_effective(args, config, "kalman-rot", (0.5, 2.0))),
        "kalman_trans": tuple(_effective(args, config, "kalman-trans", (0.2, 1.0))),
    }
    if settings["space"] not in ("dq", "qt"):
        raise ConfigError(f"unknown space {settings['space']!r}")
    if settings["bandwidth"] is not None:
        settings["bandwidth"] = float(settings["bandwidth"])
    return settings


def _apply_filter(traj, method, space, s):
    if method == "kalman":
        return kalman_baseline(traj, s["kalman_rot"], s["kalman_trans"])
    if space == "dq":
        filtered = regression.filter_trajectory(
            traj.to_dq(), s["window"], space="dq", method=method,
            irls_iters=s["irls_iters"], delta=s["delta"], prior=s["prior"],
            bandwidth=s["bandwidth"],
        )
        return PoseTrajectory.from_dq(filtered)
    rotations, translations = regression.filter_trajectory(
        (traj.rotations, traj.translations), s["window"], space="split",
        method=method, irls_iters=s["irls_iters"], delta=s["delta"],
        prior=s["prior"], bandwidth=s["bandwidth"],
    )
    return PoseTrajectory(rotations, translations)


def _channel_report(report, include_values=True):
    summary = report.summary()
    if include_values:
        for name, values in report.channels().items():
            summary[name]["values"] = [float(v) for v in values]
    return summary


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_generate(args):
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    samples = int(_effective(args, config, "samples", 500))
    sigma = float(_effective(args, config, "sigma", 0.02))
    outlier_frac = float(_effective(args, config, "outlier-frac", 0.05))
    outlier_sigma = float(_effective(args, config, "outlier-sigma", 0.2))
    space = _effective(args, config, "space", "qt")

    spec = SplineSpec.random(seed, sample_count=samples)
    ground_truth = generate_spline_trajectory(spec)
    noise = NoiseSpec(
        sigma=sigma,
        outlier_fraction=outlier_frac,
        outlier_sigma=outlier_sigma,
        seed=seed + NOISE_SEED_OFFSET,
    )
    noisy, outliers = add_noise(ground_truth, noise)

    common = {"seed": seed, "rng": RNG_ALGORITHM, "samples": samples}
    trajio.write_trajectory(args.gt, ground_truth, space=space, meta=common)
    noisy_meta = dict(common)
    noisy_meta.update(
        {
            "noise-seed": noise.seed,
            "sigma": f"{sigma:.17g}",
            "outlier-frac": f"{outlier_frac:.17g}",
            "outlier-sigma": f"{outlier_sigma:.17g}",
            "outliers": " ".join(str(i) for i in outliers),
        }
    )
    trajio.write_trajectory(args.out, noisy, space=space, meta=noisy_meta)
    print(f"wrote {args.gt} and {args.out} ({samples} poses, seed {seed})")
    return EXIT_OK


def _cmd_filter(args):
    config = _load_config(args.config)
    s = _filter_settings(args, config)
    if s["method"] not in FILTER_METHODS:
        raise ConfigError(f"unknown method {s['method']!r}")
    traj, file_space, _ = trajio.read_trajectory(args.input)
    filtered = _apply_filter(traj, s["method"], s["space"], s)
    meta = {
        "method": s["method"],
        "filter-space": s["space"],
        "window": s["window"],
        "irls-iters": s["irls_iters"],
        "delta": f"{s['delta']:.17g}",
        "prior": s["prior"],
        "source": os.path.basename(args.input),
    }
    if s["bandwidth"] is not None:
        meta["bandwidth"] = f"{s['bandwidth']:.17g}"
    trajio.write_trajectory(args.out, filtered, space=file_space, meta=meta)
    print(f"wrote {args.out} ({s['method']}, space {s['space']})")
    return EXIT_OK


def _csv_path(report_path):
    root, _ = os.path.splitext(report_path)
    return root + ".csv"


def _cmd_evaluate(args):
    estimate, _, _ = trajio.read_trajectory(args.input)
    ground_truth, _, _ = trajio.read_trajectory(args.gt)
    report = evaluate(estimate, ground_truth)
    payload = {
        "config": {"estimate": args.input, "ground_truth": args.gt},
        "count": len(estimate),
        "channels": _channel_report(report),
    }
    trajio.write_report(args.report, payload)
    rows = [
        (i, f"{a:.17g}", f"{x:.17g}", f"{t:.17g}")
        for i, (a, x, t) in enumerate(
            zip(report.angle_deg, report.axis_deg, report.trans)
        )
    ]
    trajio.write_csv(_csv_path(args.report), ["index", "angle_deg", "axis_deg", "trans"], rows)
    med = report.summary()
    print(
        "medians: angle {angle:.6g} deg, axis {axis:.6g} deg, trans {trans:.6g}".format(
            angle=med["angle_deg"]["median"],
            axis=med["axis_deg"]["median"],
            trans=med["trans"]["median"],
        )
    )
    return EXIT_OK


def _cmd_compare(args):
    config = _load_config(args.config)
    s = _filter_settings(args, config)
    noisy, _, _ = trajio.read_trajectory(args.input)
    ground_truth, _, _ = trajio.read_trajectory(args.gt)
    if len(noisy) != len(ground_truth):
        raise ConfigError("noisy and ground-truth trajectories differ in length")

    results = {}
    for name, space in COMPARE_METHODS:
        method = name.removeprefix("dual_")
        filtered = _apply_filter(noisy, method, space, s)
        results[name] = evaluate(filtered, ground_truth).summary()

    payload = {
        "config": {
            "input": args.input,
            "ground_truth": args.gt,
            "window": s["window"],
            "irls_iters": s["irls_iters"],
            "delta": s["delta"],
            "prior": s["prior"],
            "bandwidth": s["bandwidth"],
            "kalman_rot": list(s["kalman_rot"]),
            "kalman_trans": list(s["kalman_trans"]),
            "kalman_note": "approximate reproduction",
        },
        "count": len(noisy),
        "methods": results,
    }
    trajio.write_report(args.report, payload)

    rows = []
    for name, _ in COMPARE_METHODS:
        for channel in ("angle_deg", "axis_deg", "trans"):
            stats = results[name][channel]
            rows.append(
                (
                    name,
                    channel,
                    f"{stats['median']:.17g}",
                    f"{stats['mean']:.17g}",
                    f"{stats['std']:.17g}",
                )
            )
    trajio.write_csv(
        _csv_path(args.report), ["method", "channel", "median", "mean", "std"], rows
    )

    header = f"{'method':<10} {'trans.med':>12} {'angle.med':>12} {'axis.med':>12}"
    print(header)
    for name, _ in COMPARE_METHODS:
        stats = results[name]
        print(
            f"{name:<10} {stats['trans']['median']:>12.6g} "
            f"{stats['angle_deg']['median']:>12.6g} "
            f"{stats['axis_deg']['median']:>12.6g}"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_filter_flags(p):
    p.add_argument("--method", choices=FILTER_METHODS, default=None)
    p.add_argument("--space", choices=("dq", "qt"), default=None)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--irls-iters", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--prior", choices=("index", "tangent"), default=None)
    p.add_argument("--bandwidth", type=float, default=None)
    p.add_argument("--kalman-rot", type=_pair, default=None,
                   metavar="PROC,MEAS", help="kalman rotation covariances")
    p.add_argument("--kalman-trans", type=_pair, default=None,
                   metavar="PROC,MEAS", help="kalman translation covariances")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="dqfilter",
        description="Pose trajectory smoothing on the dual-quaternion manifold.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic ground-truth/noisy pair")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--outlier-frac", type=float, default=None)
    p.add_argument("--outlier-sigma", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--space", choices=("dq", "qt"), default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--gt", required=True, help="ground-truth output path")
    p.add_argument("--out", required=True, help="noisy output path")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("filter", help="smooth a trajectory file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    _add_filter_flags(p)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("evaluate", help="error report of an estimate vs ground truth")
    p.add_argument("--in", dest="input", required=True, help="estimate path")
    p.add_argument("--gt", required=True)
    p.add_argument("--report", required=True, help="JSON report path (CSV beside it)")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("compare", help="run every method and tabulate the errors")
    p.add_argument("--in", dest="input", required=True, help="noisy trajectory path")
    p.add_argument("--gt", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--config", default=None)
    _add_filter_flags(p)
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except trajio.TrajectoryParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
