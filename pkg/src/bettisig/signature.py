"""Integral Betti signatures: areas under the beta_0 and beta_1 curves."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimOutOfRangeError
from .filtration import normalize_direction, build_order_complex
from .homology import DEFAULT_BUDGET, BettiCurve, betti_curves, default_grid, enumerate_cliques
from .matrices import SymmetricMatrix


@dataclass(frozen=True)
class SignatureConfig:
    """Pipeline knobs for turning one matrix into one signature."""

    direction: str = "descending"
    max_dim: int = 1
    grid: int | str = "auto"  # "auto": per-step up to 120 vertices, else 512
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "direction", normalize_direction(self.direction))
        if self.max_dim < 1:
            raise ValueError("signatures need max_dim >= 1")

    def grid_for(self, n_vertices: int, n_edges: int) -> np.ndarray:
        if self.grid == "auto":
            return default_grid(n_vertices, n_edges)
        return np.linspace(0.0, 1.0, int(self.grid))


@dataclass(frozen=True)
class IntegralBettiSignature:
    """(B0 AUC, B1 AUC) of one matrix plus its provenance coordinates."""

    b0_auc: float
    b1_auc: float
    n_points: int
    sample_dim: int
    label: str = ""
    family: str = ""
    direction: str = "descending"
    seed: int | None = None
    grid_size: int = 0
    max_dim: int = 1
    extra: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        """JSON-ready record; one line of the signatures JSONL stream."""
        rec = {
            "label": self.label,
            "family": self.family,
            "n_points": self.n_points,
            "sample_dim": self.sample_dim,
        }
        if "radius" in self.extra:
            rec["radius"] = self.extra["radius"]
        rec.update(
            {
                "direction": self.direction,
                "seed": self.seed,
                "b0_auc": self.b0_auc,
                "b1_auc": self.b1_auc,
                "grid": self.grid_size,
                "max_dim": self.max_dim,
            }
        )
        for key, value in sorted(self.extra.items()):
            if key != "radius":
                rec[key] = value
        return rec


def auc(curve: BettiCurve, dim: int) -> float:
    """Trapezoidal integral of the dimension-`dim` curve over density."""
    if dim < 0 or dim > curve.max_dim:
        raise DimOutOfRangeError(dim, curve.max_dim)
    return float(np.trapezoid(curve.values[dim], curve.grid))


def signature_of_curve(
    curve: BettiCurve,
    *,
    n_points: int,
    sample_dim: int = 0,
    label: str = "",
    family: str = "",
    direction: str = "descending",
    seed: int | None = None,
    extra: dict | None = None,
) -> IntegralBettiSignature:
    return IntegralBettiSignature(
        b0_auc=auc(curve, 0),
        b1_auc=auc(curve, 1),
        n_points=n_points,
        sample_dim=sample_dim,
        label=label,
        family=family,
        direction=normalize_direction(direction),
        seed=seed,
        grid_size=int(curve.grid.size),
        max_dim=curve.max_dim,
        extra=dict(extra or {}),
    )


def curve_of_matrix(matrix: SymmetricMatrix, config: SignatureConfig | None = None) -> BettiCurve:
    """Order complex -> clique filtration -> Betti curves, per the config."""
    config = config or SignatureConfig()
    oc = build_order_complex(matrix, config.direction)
    filtration = enumerate_cliques(oc, config.max_dim + 2, budget=config.budget)
    return betti_curves(filtration, grid=config.grid_for(matrix.n, oc.n_edges))


def signature_of_matrix(
    matrix: SymmetricMatrix,
    config: SignatureConfig | None = None,
    *,
    sample_dim: int = 0,
    label: str = "",
    family: str = "",
    seed: int | None = None,
    extra: dict | None = None,
) -> IntegralBettiSignature:
    """Full pipeline from a symmetric matrix to its integral signature."""
    config = config or SignatureConfig()
    curve = curve_of_matrix(matrix, config)
    return signature_of_curve(
        curve,
        n_points=matrix.n,
        sample_dim=sample_dim,
        label=label,
        family=family,
        direction=config.direction,
        seed=seed,
        extra=extra,
    )
