"""Command-line interface.

Subcommands: sample, betti, signature, ingest, sweep, experiment, validate.
Exit codes: 0 success, 1 partial cell failures, 2 config or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import BettisigError
from .experiment import FamilySpec, ingest, load_config, run_experiment, segment_sweep
from .filtration import build_order_complex
from .homology import DEFAULT_BUDGET
from .io import (
    append_signature_records,
    read_matrix_csv,
    read_series_csv,
    write_curve_csv,
    write_filtration_csv,
    write_matrix_csv,
    write_pointcloud_csv,
)
from .matrices import validate
from .rng import make_rng
from .samplers import (
    HyperbolicParams,
    distance_matrix,
    random_correlation,
    random_symmetric,
    sample_cube,
    sample_hyperbolic,
    sample_sphere,
)
from .signature import SignatureConfig, curve_of_matrix, signature_of_curve


def _add_pipeline_flags(p: argparse.ArgumentParser, max_dim_default: int = 1) -> None:
    p.add_argument("--direction", choices=["desc", "asc"], default="desc")
    p.add_argument("--max-dim", type=int, default=max_dim_default)
    p.add_argument("--grid", default="auto", help="'auto' or a grid point count")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="simplex cap")


def _signature_config(args) -> SignatureConfig:
    grid = args.grid if args.grid == "auto" else int(args.grid)
    return SignatureConfig(
        direction=args.direction, max_dim=args.max_dim, grid=grid, budget=args.budget
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bettisig",
        description="Betti curves and integral Betti signatures of symmetric matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="emit one matrix from a reference family")
    p.add_argument(
        "--family",
        required=True,
        choices=["random", "euclidean", "sphere", "hyperbolic", "random_correlation", "modular"],
    )
    p.add_argument("--n", type=int, required=True, help="matrix size / point count")
    p.add_argument("--dim", type=int, default=400, help="ambient dim or series length")
    p.add_argument("--radius", type=float, help="hyperbolic truncation radius")
    p.add_argument("--modules", type=int, help="module count for the modular family")
    p.add_argument("--noise", type=float, default=0.1, help="modular noise amplitude")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="matrix CSV path")
    p.add_argument("--points-out", help="also dump sampled coordinates")

    p = sub.add_parser("betti", help="matrix CSV -> Betti curve CSV")
    p.add_argument("matrix")
    _add_pipeline_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="recorded in metadata only")
    p.add_argument("--dump-filtration", help="also write the sorted edge list")

    p = sub.add_parser("signature", help="matrix CSV -> one signature JSONL line")
    p.add_argument("matrix")
    _add_pipeline_flags(p)
    p.add_argument("--label", default="")
    p.add_argument("--sample-dim", type=int, default=0)
    p.add_argument("--seed", type=int, help="recorded in metadata only")
    p.add_argument("--out", help="append to this JSONL file (default stdout)")

    p = sub.add_parser("ingest", help="load user data into a matrix CSV")
    p.add_argument("input")
    p.add_argument("--format", required=True, choices=["matrix_csv", "series_csv"])
    p.add_argument(
        "--preprocessing", choices=["none", "log_returns", "normalize"], default="none"
    )
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="signatures of growing series segments")
    p.add_argument("series", help="series CSV")
    p.add_argument("--lengths", type=int, nargs="+", required=True)
    p.add_argument(
        "--preprocessing", choices=["none", "log_returns", "normalize"], default="none"
    )
    _add_pipeline_flags(p)
    p.add_argument("--label", default="segments")
    p.add_argument("--out", help="append to this JSONL file (default stdout)")

    p = sub.add_parser("experiment", help="run a full config-driven grid")
    p.add_argument("config", help="INI config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threads", type=int, help="override worker count")
    p.add_argument("--seed", type=int, help="override config seed")
    p.add_argument("--emit-gnuplot", action="store_true")

    p = sub.add_parser("validate", help="report ties / finiteness of a matrix CSV")
    p.add_argument("matrix")
    p.add_argument("--json", action="store_true")
    return parser


def _cmd_sample(args) -> int:
    rng = make_rng(args.seed, "sample", args.family, args.dim)
    cloud = None
    if args.family == "random":
        matrix = random_symmetric(args.n, rng)
    elif args.family == "euclidean":
        cloud = sample_cube(args.n, args.dim, rng)
        matrix = distance_matrix(cloud)
    elif args.family == "sphere":
        cloud = sample_sphere(args.n, args.dim, rng)
        matrix = distance_matrix(cloud)
    elif args.family == "hyperbolic":
        if args.radius is None:
            raise BettisigError("--radius is required for the hyperbolic family")
        cloud = sample_hyperbolic(args.n, args.dim, HyperbolicParams(args.radius), rng)
        matrix = distance_matrix(cloud)
    elif args.family == "random_correlation":
        matrix = random_correlation(args.n, args.dim, rng)
    else:  # modular
        spec = FamilySpec(
            label="modular",
            kind="modular",
            n_modules=args.modules or 1,
            noise=args.noise,
        )
        from .experiment import _cell_matrix

        matrix, _ = _cell_matrix(spec, args.n, args.dim, rng)
    write_matrix_csv(args.out, matrix)
    if args.points_out and cloud is not None:
        write_pointcloud_csv(args.points_out, cloud, seed=args.seed)
    return 0


def _cmd_betti(args) -> int:
    matrix = read_matrix_csv(args.matrix)
    cfg = _signature_config(args)
    curve = curve_of_matrix(matrix, cfg)
    write_curve_csv(
        args.out,
        curve,
        metadata={
            "direction": cfg.direction,
            "seed": args.seed if args.seed is not None else "",
            "max_dim": cfg.max_dim,
            "grid": curve.grid.size,
            "source": args.matrix,
        },
    )
    if args.dump_filtration:
        write_filtration_csv(args.dump_filtration, build_order_complex(matrix, cfg.direction))
    return 0


def _cmd_signature(args) -> int:
    matrix = read_matrix_csv(args.matrix)
    cfg = _signature_config(args)
    curve = curve_of_matrix(matrix, cfg)
    sig = signature_of_curve(
        curve,
        n_points=matrix.n,
        sample_dim=args.sample_dim,
        label=args.label or args.matrix,
        family="external",
        direction=cfg.direction,
        seed=args.seed,
    )
    record = sig.to_record()
    if args.out:
        append_signature_records(args.out, [record])
    else:
        print(json.dumps(record))
    return 0


def _cmd_ingest(args) -> int:
    matrix, meta = ingest(args.input, args.format, args.preprocessing)
    write_matrix_csv(args.out, matrix)
    print(json.dumps({"out": args.out, "n": matrix.n, **meta}))
    return 0


def _cmd_sweep(args) -> int:
    series = read_series_csv(args.series)
    if args.preprocessing != "none":
        from .experiment import _preprocess_series

        series = _preprocess_series(series, args.preprocessing)
    sigs = segment_sweep(series, args.lengths, _signature_config(args), label=args.label)
    records = [s.to_record() for s in sigs]
    if args.out:
        append_signature_records(args.out, records)
    else:
        for rec in records:
            print(json.dumps(rec))
    return 0


def _cmd_experiment(args) -> int:
    config = load_config(args.config)
    if args.threads is not None or args.seed is not None:
        import dataclasses

        updates = {}
        if args.threads is not None:
            updates["threads"] = args.threads
        if args.seed is not None:
            updates["seed"] = args.seed
        config = dataclasses.replace(config, **updates)
    manifest = run_experiment(config, args.out, emit_gnuplot=args.emit_gnuplot)
    failed = manifest["n_failed"]
    print(
        f"{manifest['n_cells']} cells, {failed} failed, hash {manifest['config_hash']}"
    )
    return 1 if failed else 0


def _cmd_validate(args) -> int:
    report = validate(read_matrix_csv(args.matrix))
    if args.json:
        import dataclasses

        print(json.dumps(dataclasses.asdict(report)))
    else:
        print(report.summary())
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "betti": _cmd_betti,
    "signature": _cmd_signature,
    "ingest": _cmd_ingest,
    "sweep": _cmd_sweep,
    "experiment": _cmd_experiment,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BettisigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
