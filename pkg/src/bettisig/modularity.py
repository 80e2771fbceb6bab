"""Low-rank modular time-series systems: m base series tiled over N channels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidModuleCountError
from .matrices import TimeSeriesSet, pearson_correlation
from .rng import SeedLike, as_rng, make_rng
from .signature import IntegralBettiSignature, SignatureConfig, signature_of_matrix


@dataclass(frozen=True)
class ModularConfig:
    """Modular system shape: series i copies base series i mod n_modules,
    so modules differ in size by at most one, plus independent noise."""

    n_series: int = 90
    length: int = 400
    n_modules: int = 1
    noise_amplitude: float = 0.1

    def __post_init__(self):
        if not 1 <= self.n_modules <= self.n_series:
            raise InvalidModuleCountError(self.n_modules, self.n_series)
        if self.length < 2:
            raise ValueError("length must be >= 2")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")

    def module_sizes(self) -> list[int]:
        m = self.n_modules
        q, r = divmod(self.n_series, m)
        return [q + 1 if t < r else q for t in range(m)]


def generate_modular_series(config: ModularConfig, seed: SeedLike) -> TimeSeriesSet:
    """Tile n_modules white-noise base series cyclically across n_series
    channels and add small-amplitude white noise to every channel."""
    rng = as_rng(seed)
    base = rng.standard_normal((config.n_modules, config.length))
    tiled = base[np.arange(config.n_series) % config.n_modules]
    noise = rng.standard_normal((config.n_series, config.length))
    return TimeSeriesSet(values=tiled + config.noise_amplitude * noise)


def modularity_sweep(
    config: ModularConfig,
    module_counts: list[int],
    replicates: int,
    seed: int,
    signature_config: SignatureConfig | None = None,
) -> list[IntegralBettiSignature]:
    """Signatures of modular systems for each module count and replicate."""
    signature_config = signature_config or SignatureConfig()
    out = []
    for m in module_counts:
        cell_config = ModularConfig(
            n_series=config.n_series,
            length=config.length,
            n_modules=m,
            noise_amplitude=config.noise_amplitude,
        )
        for rep in range(replicates):
            rng = make_rng(seed, "modular", m, rep)
            series = generate_modular_series(cell_config, rng)
            matrix = pearson_correlation(series)
            out.append(
                signature_of_matrix(
                    matrix,
                    signature_config,
                    sample_dim=config.length,
                    label=f"modular_m{m}_rep{rep}",
                    family="modular",
                    seed=seed,
                    extra={
                        "n_modules": m,
                        "noise_amplitude": config.noise_amplitude,
                        "replicate": rep,
                    },
                )
            )
    return out
