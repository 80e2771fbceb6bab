"""Configuration-driven batch runner over (family, dimension, replicate) grids.

Every cell's random stream is derived from (seed, family label, dim,
replicate), so outputs are independent of worker count and execution
order; a rerun of the same config writes byte-identical signature lines.
"""
from __future__ import annotations

import concurrent.futures
import configparser
import hashlib
import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BettisigError,
    LengthExceedsDataError,
    ParseError,
    PreprocessingError,
)
from .filtration import build_order_complex, normalize_direction
from .homology import DEFAULT_BUDGET, BettiCurve, betti_curves, enumerate_cliques
from .io import (
    append_signature_records,
    ensure_dir,
    read_matrix_csv,
    read_series_csv,
    write_curve_csv,
)
from .matrices import (
    SymmetricMatrix,
    TimeSeriesSet,
    log_returns,
    normalize_series,
    pearson_correlation,
)
from .modularity import ModularConfig, generate_modular_series
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
from .signature import IntegralBettiSignature, SignatureConfig, signature_of_curve

FAMILY_KINDS = (
    "random",
    "euclidean",
    "sphere",
    "hyperbolic",
    "random_correlation",
    "modular",
    "external",
)
PREPROCESSING = ("none", "log_returns", "normalize")


@dataclass(frozen=True)
class FamilySpec:
    """One matrix family of the experiment grid."""

    label: str
    kind: str
    radius: float | None = None
    n_modules: int | None = None
    noise: float = 0.1
    path: str | None = None
    fmt: str | None = None  # matrix_csv | series_csv
    preprocessing: str = "none"

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "hyperbolic" and (self.radius is None or self.radius <= 0):
            raise ValueError(f"family {self.label!r}: hyperbolic needs radius > 0")
        if self.kind == "modular" and not self.n_modules:
            raise ValueError(f"family {self.label!r}: modular needs modules >= 1")
        if self.kind == "external":
            if not self.path or self.fmt not in ("matrix_csv", "series_csv"):
                raise ValueError(
                    f"family {self.label!r}: external needs path and format"
                )
        if self.preprocessing not in PREPROCESSING:
            raise ValueError(f"unknown preprocessing {self.preprocessing!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    families: tuple[FamilySpec, ...]
    n_points: int = 90
    dims: tuple[int, ...] = (400,)
    replicates: int = 1
    max_dim: int = 1
    direction: str = "descending"
    grid: int | str = "auto"
    seed: int = 0
    threads: int = 1
    budget: int = DEFAULT_BUDGET
    emit_curves: bool = True

    def __post_init__(self):
        object.__setattr__(self, "direction", normalize_direction(self.direction))
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.families:
            raise ValueError("config needs at least one family")
        labels = [f.label for f in self.families]
        if len(set(labels)) != len(labels):
            raise ValueError("family labels must be unique")

    def signature_config(self) -> SignatureConfig:
        return SignatureConfig(
            direction=self.direction,
            max_dim=self.max_dim,
            grid=self.grid,
            budget=self.budget,
        )

    def resolved(self) -> dict:
        out = asdict(self)
        out["families"] = [asdict(f) for f in self.families]
        return out

    def hash(self) -> str:
        canon = json.dumps(self.resolved(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _parse_scalar_list(text: str) -> list[int]:
    parts = text.replace(",", " ").split()
    return [int(p) for p in parts]


def load_config(path) -> ExperimentConfig:
    """Parse the INI experiment schema (see README for the full key list)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise ParseError("config file not found or unreadable", path=str(path))
    if "experiment" not in parser:
        raise ParseError("missing [experiment] section", path=str(path))
    exp = parser["experiment"]
    families = []
    for section in parser.sections():
        if not section.startswith("family."):
            continue
        label = section.split(".", 1)[1]
        fam = parser[section]
        kind = fam.get("kind", label)
        families.append(
            FamilySpec(
                label=label,
                kind=kind,
                radius=fam.getfloat("radius") if "radius" in fam else None,
                n_modules=fam.getint("modules") if "modules" in fam else None,
                noise=fam.getfloat("noise", 0.1),
                path=fam.get("path"),
                fmt=fam.get("format"),
                preprocessing=fam.get("preprocessing", "none"),
            )
        )
    grid_raw = exp.get("grid", "auto")
    try:
        return ExperimentConfig(
            families=tuple(families),
            n_points=exp.getint("n_points", 90),
            dims=tuple(_parse_scalar_list(exp.get("dims", "400"))),
            replicates=exp.getint("replicates", 1),
            max_dim=exp.getint("max_dim", 1),
            direction=exp.get("direction", "descending"),
            grid="auto" if grid_raw == "auto" else int(grid_raw),
            seed=exp.getint("seed", 0),
            threads=exp.getint("threads", 1),
            budget=exp.getint("budget", DEFAULT_BUDGET),
            emit_curves=exp.getboolean("emit_curves", True),
        )
    except (ValueError, BettisigError) as exc:
        raise ParseError(f"bad config: {exc}", path=str(path))


# ---------------------------------------------------------------------------
# Ingestion of user-supplied files
# ---------------------------------------------------------------------------


def _preprocess_series(series: TimeSeriesSet, preprocessing: str) -> TimeSeriesSet:
    if preprocessing == "none":
        return series
    if preprocessing == "log_returns":
        return log_returns(series)
    if preprocessing == "normalize":
        return normalize_series(series)
    raise PreprocessingError(f"unknown preprocessing {preprocessing!r}")


def ingest(path, fmt: str, preprocessing: str = "none") -> tuple[SymmetricMatrix, dict]:
    """Load a user matrix or series file into a correlation-ready matrix.

    Series files are Pearson-correlated after preprocessing; matrix files
    are loaded as-is (preprocessing must stay 'none'). The returned
    metadata records the provenance choices.
    """
    meta = {"source": str(path), "format": fmt, "preprocessing": preprocessing}
    if fmt == "matrix_csv":
        if preprocessing != "none":
            raise PreprocessingError("matrix input takes no series preprocessing")
        return read_matrix_csv(path), meta
    if fmt == "series_csv":
        series = _preprocess_series(read_series_csv(path), preprocessing)
        meta["series_length"] = series.length
        return pearson_correlation(series), meta
    raise PreprocessingError(f"unknown format {fmt!r}")


def segment_sweep(
    series: TimeSeriesSet,
    lengths: list[int],
    signature_config: SignatureConfig | None = None,
    label: str = "segments",
    seed: int | None = None,
) -> list[IntegralBettiSignature]:
    """Signature of the correlation matrix of each initial segment."""
    signature_config = signature_config or SignatureConfig()
    if sorted(lengths) != list(lengths):
        raise ValueError("lengths must be sorted ascending")
    out = []
    for length in lengths:
        if length > series.length:
            raise LengthExceedsDataError(length, series.length)
        matrix = pearson_correlation(series.truncated(length))
        curve = _cell_curve(matrix, signature_config)
        out.append(
            signature_of_curve(
                curve,
                n_points=matrix.n,
                sample_dim=length,
                label=f"{label}_L{length}",
                family="segment_sweep",
                direction=signature_config.direction,
                seed=seed,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Grid execution
# ---------------------------------------------------------------------------


def _cell_curve(matrix: SymmetricMatrix, cfg: SignatureConfig):
    oc = build_order_complex(matrix, cfg.direction)
    filtration = enumerate_cliques(oc, cfg.max_dim + 2, budget=cfg.budget)
    return betti_curves(filtration, grid=cfg.grid_for(matrix.n, oc.n_edges))


def _cell_matrix(spec: FamilySpec, n_points: int, dim: int, rng) -> tuple[SymmetricMatrix, dict]:
    extra: dict = {}
    if spec.kind == "random":
        return random_symmetric(n_points, rng), extra
    if spec.kind == "euclidean":
        return distance_matrix(sample_cube(n_points, dim, rng)), extra
    if spec.kind == "sphere":
        return distance_matrix(sample_sphere(n_points, dim, rng)), extra
    if spec.kind == "hyperbolic":
        cloud = sample_hyperbolic(n_points, dim, HyperbolicParams(spec.radius), rng)
        extra["radius"] = spec.radius
        return distance_matrix(cloud), extra
    if spec.kind == "random_correlation":
        return random_correlation(n_points, dim, rng), extra
    if spec.kind == "modular":
        mc = ModularConfig(
            n_series=n_points,
            length=dim,
            n_modules=spec.n_modules,
            noise_amplitude=spec.noise,
        )
        extra.update({"n_modules": spec.n_modules, "noise_amplitude": spec.noise})
        return pearson_correlation(generate_modular_series(mc, rng)), extra
    if spec.kind == "external":
        matrix, meta = ingest(spec.path, spec.fmt, spec.preprocessing)
        if spec.fmt == "series_csv" and dim > 0:
            series = _preprocess_series(read_series_csv(spec.path), spec.preprocessing)
            if dim > series.length:
                raise LengthExceedsDataError(dim, series.length)
            matrix = pearson_correlation(series.truncated(dim))
        extra.update(meta)
        return matrix, extra
    raise ValueError(f"unknown family kind {spec.kind!r}")


def _cells_of(config: ExperimentConfig) -> list[tuple[FamilySpec, int, int]]:
    cells = []
    for spec in config.families:
        dims = config.dims
        reps = config.replicates
        if spec.kind == "external":
            reps = 1
            if spec.fmt == "matrix_csv":
                dims = (0,)
        for dim in dims:
            for rep in range(reps):
                cells.append((spec, dim, rep))
    return cells


def _run_cell(args):
    config, spec, dim, rep = args
    cell_id = f"{spec.label}:dim{dim}:rep{rep}"
    started = time.perf_counter()
    try:
        rng = make_rng(config.seed, spec.label, dim, rep)
        matrix, extra = _cell_matrix(spec, config.n_points, dim, rng)
        cfg = config.signature_config()
        curve = _cell_curve(matrix, cfg)
        extra["replicate"] = rep
        sig = signature_of_curve(
            curve,
            n_points=matrix.n,
            sample_dim=dim,
            label=cell_id,
            family=spec.label,
            direction=cfg.direction,
            seed=config.seed,
            extra=extra,
        )
        return {
            "cell": cell_id,
            "family": spec.label,
            "dim": dim,
            "replicate": rep,
            "status": "ok",
            "wall_time": time.perf_counter() - started,
            "signature": sig.to_record(),
            "grid": curve.grid,
            "values": curve.values,
        }
    except BettisigError as exc:
        return {
            "cell": cell_id,
            "family": spec.label,
            "dim": dim,
            "replicate": rep,
            "status": "error",
            "wall_time": time.perf_counter() - started,
            "error": f"{type(exc).__name__}: {exc}",
        }


def run_experiment(config: ExperimentConfig, out_dir, emit_gnuplot: bool = False) -> dict:
    """Execute the full grid and write all artifacts under out_dir.

    Returns the manifest (also written to manifest.json). Cell failures are
    recorded per cell rather than aborting the run.
    """
    out = ensure_dir(out_dir)
    cells = _cells_of(config)
    jobs = [(config, spec, dim, rep) for spec, dim, rep in cells]
    if config.threads > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_run_cell, jobs, chunksize=1))
    else:
        results = [_run_cell(job) for job in jobs]

    config_hash = config.hash()
    (out / "config.resolved.json").write_text(
        json.dumps({"hash": config_hash, "config": config.resolved()}, indent=2) + "\n"
    )

    sig_records = []
    for res in results:
        if res["status"] == "ok":
            rec = dict(res["signature"])
            rec["config_hash"] = config_hash
            sig_records.append(rec)
    sig_path = out / "signatures.jsonl"
    sig_path.unlink(missing_ok=True)
    append_signature_records(sig_path, sig_records)
    _write_signatures_csv(out / "signatures.csv", sig_records)

    curve_dir = ensure_dir(out / "curves") if config.emit_curves else None
    artifacts: dict[str, list[str]] = {}
    for res in results:
        if res["status"] != "ok":
            continue
        paths = []
        if curve_dir is not None:
            path = curve_dir / f"{res['family']}_dim{res['dim']}_rep{res['replicate']}.csv"
            curve = BettiCurve(
                grid=res["grid"], values=res["values"], max_dim=config.max_dim
            )
            write_curve_csv(
                path,
                curve,
                metadata={
                    "direction": config.direction,
                    "seed": config.seed,
                    "max_dim": config.max_dim,
                    "family": res["family"],
                    "dim": res["dim"],
                    "replicate": res["replicate"],
                    "config_hash": config_hash,
                },
            )
            paths.append(str(path.relative_to(out)))
        artifacts[res["cell"]] = paths

    mean_dir = ensure_dir(out / "mean_curves")
    mean_paths = _write_mean_curves(mean_dir, out, results, config, config_hash)
    for res in results:
        if res["status"] == "ok":
            key = (res["family"], res["dim"])
            if key in mean_paths:
                artifacts[res["cell"]].append(mean_paths[key])

    manifest = {
        "config_hash": config_hash,
        "version": __version__,
        "n_cells": len(cells),
        "n_failed": sum(1 for r in results if r["status"] != "ok"),
        "outputs": {
            "signatures": str(sig_path.relative_to(out)),
            "signatures_csv": "signatures.csv",
            "mean_curves": sorted(set(mean_paths.values())),
        },
        "cells": [
            {
                "cell": r["cell"],
                "family": r["family"],
                "dim": r["dim"],
                "replicate": r["replicate"],
                "status": r["status"],
                "wall_time": round(r["wall_time"], 6),
                "outputs": artifacts.get(r["cell"], []),
                **({"error": r["error"]} if r["status"] != "ok" else {}),
            }
            for r in results
        ],
    }
    if emit_gnuplot:
        gp = _write_gnuplot(out, config, results)
        manifest["outputs"]["gnuplot"] = gp
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def _write_signatures_csv(path, records: list[dict]) -> None:
    cols = [
        "label",
        "family",
        "n_points",
        "sample_dim",
        "radius",
        "direction",
        "seed",
        "b0_auc",
        "b1_auc",
        "grid",
        "max_dim",
        "n_modules",
        "noise_amplitude",
    ]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for rec in records:
            fh.write(",".join(str(rec.get(c, "")) for c in cols) + "\n")


def _write_mean_curves(mean_dir, out, results, config, config_hash) -> dict:
    groups: dict[tuple, list] = {}
    for res in results:
        if res["status"] == "ok":
            groups.setdefault((res["family"], res["dim"]), []).append(res)
    paths = {}
    for (family, dim), group in sorted(groups.items()):
        grids = {g["grid"].shape for g in group}
        if len(grids) != 1:
            continue  # mixed grids (external cells); nothing to average
        stack = np.stack([g["values"] for g in group]).astype(np.float64)
        mean = stack.mean(axis=0)
        sd = stack.std(axis=0, ddof=0)
        path = mean_dir / f"{family}_dim{dim}.csv"
        with open(path, "w") as fh:
            fh.write(f"# family={family}\n# dim={dim}\n# replicates={len(group)}\n")
            fh.write(f"# direction={config.direction}\n# config_hash={config_hash}\n")
            heads = [f"mean_beta_{p}" for p in range(config.max_dim + 1)]
            heads += [f"sd_beta_{p}" for p in range(config.max_dim + 1)]
            fh.write("density," + ",".join(heads) + "\n")
            grid = group[0]["grid"]
            for g in range(grid.size):
                row = [repr(float(grid[g]))]
                row += [repr(float(v)) for v in mean[:, g]]
                row += [repr(float(v)) for v in sd[:, g]]
                fh.write(",".join(row) + "\n")
        paths[(family, dim)] = str(path.relative_to(out))
    return paths


def _write_gnuplot(out, config, results) -> list[str]:
    """Plain-text gnuplot scripts referencing the emitted CSVs."""
    written = []
    dims_by_family = {}
    for res in results:
        if res["status"] == "ok":
            dims_by_family.setdefault(res["family"], set()).add(res["dim"])
    for dim in config.dims:
        families = sorted(f for f, ds in dims_by_family.items() if dim in ds)
        if not families:
            continue
        name = f"plot_mean_beta1_dim{dim}.gp"
        lines = [
            "set datafile separator ','",
            "set xlabel 'edge density'",
            "set ylabel 'mean beta_1'",
            f"set title 'mean Betti curves (dim {dim})'",
            "set key outside",
            "plot \\",
        ]
        plot_parts = [
            f"  'mean_curves/{family}_dim{dim}.csv' using 1:3 with lines title '{family}'"
            for family in families
        ]
        lines.append(", \\\n".join(plot_parts))
        (out / name).write_text("\n".join(lines) + "\n")
        written.append(name)
    scatter = [
        "set datafile separator ','",
        "set xlabel 'B0 AUC'",
        "set ylabel 'B1 AUC'",
        "set key outside",
        "plot 'signatures.csv' using 8:9 with points title 'signatures'",
    ]
    (out / "plot_signatures.gp").write_text("\n".join(scatter) + "\n")
    written.append("plot_signatures.gp")
    return written
