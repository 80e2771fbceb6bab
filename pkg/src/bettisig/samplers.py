"""Reference matrix families: random symmetric, geometric (cube, sphere,
Poincare ball), and random-correlation matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.spatial.distance import pdist

from .errors import NumericalDomainError
from .matrices import SymmetricMatrix, TimeSeriesSet, pair_indices, pearson_correlation
from .rng import SeedLike, as_rng

EUCLIDEAN_CUBE = "euclidean_cube"
SPHERE = "sphere"
HYPERBOLIC = "hyperbolic_poincare"

_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class PointCloud:
    """Sampled points on one of the constant-curvature model spaces."""

    geometry: str
    coordinates: np.ndarray  # (n_points, ambient_dim)
    radius: float | None = None  # truncation radius, hyperbolic only

    def __post_init__(self):
        c = np.asarray(self.coordinates, dtype=np.float64)
        c.setflags(write=False)
        object.__setattr__(self, "coordinates", c)

    @property
    def n_points(self) -> int:
        return self.coordinates.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.coordinates.shape[1]


@dataclass(frozen=True)
class HyperbolicParams:
    """Radial law for Poincare-ball sampling: density ~ sinh^q(r) on [0, R].

    The default exponent q=1 is the planar quasi-uniform law used
    throughout the hyperbolic network-model literature; it keeps a real
    radial spread at every radius, which is what gives small-radius clouds
    their near-zero higher Betti curves. Passing radial_exponent=dim-1
    instead gives the exact volume element of dim-dimensional hyperbolic
    space, which in high ambient dimension concentrates all mass on the
    boundary shell (and then the distance order degenerates to the
    spherical one).
    """

    radius: float
    radial_exponent: int = 1

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.radial_exponent < 1:
            raise ValueError("radial_exponent must be >= 1")


def random_symmetric(n: int, seed: SeedLike) -> SymmetricMatrix:
    """Symmetric matrix with i.i.d. uniform [0, 1] off-diagonal entries."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = as_rng(seed)
    return SymmetricMatrix(n=n, entries=rng.random(n * (n - 1) // 2))


def sample_cube(n_points: int, dim: int, seed: SeedLike) -> PointCloud:
    """Points i.i.d. uniform in the unit cube [0, 1]^dim."""
    if n_points < 2 or dim < 1:
        raise ValueError("need n_points >= 2 and dim >= 1")
    rng = as_rng(seed)
    return PointCloud(geometry=EUCLIDEAN_CUBE, coordinates=rng.random((n_points, dim)))


def sample_sphere(n_points: int, dim: int, seed: SeedLike) -> PointCloud:
    """Points uniform on the unit sphere in R^dim (normalized Gaussians)."""
    if n_points < 2 or dim < 2:
        raise ValueError("need n_points >= 2 and dim >= 2")
    rng = as_rng(seed)
    x = rng.standard_normal((n_points, dim))
    norms = np.linalg.norm(x, axis=1)
    while np.any(norms < 1e-12):  # degenerate draw: resample those rows
        bad = norms < 1e-12
        x[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(x, axis=1)
    return PointCloud(geometry=SPHERE, coordinates=x / norms[:, None])


def _log_sinh(r: np.ndarray) -> np.ndarray:
    """log(sinh(r)) for r > 0, stable for large arguments."""
    out = np.empty_like(r)
    small = r < 20.0
    out[small] = np.log(np.sinh(r[small]))
    out[~small] = r[~small] + np.log1p(-np.exp(-2.0 * r[~small])) - np.log(2.0)
    return out


def hyperbolic_radial_inverse_cdf(exponent: int, radius: float, n_knots: int = 10_000):
    """Inverse CDF of the radial law with density ~ sinh^exponent(r) on
    [0, radius], normalized by its true integral (numerically).

    Works in log space: for exponents in the thousands the unnormalized
    density spans hundreds of orders of magnitude.
    """
    r = np.linspace(0.0, radius, n_knots)
    log_pdf = np.full(n_knots, -np.inf)
    log_pdf[1:] = exponent * _log_sinh(r[1:])
    w = np.exp(log_pdf - log_pdf.max())
    cdf = cumulative_trapezoid(w, r, initial=0.0)
    cdf /= cdf[-1]

    def inverse(u: np.ndarray) -> np.ndarray:
        return np.interp(u, cdf, r)

    return inverse


def poincare_norm_of_radius(r: np.ndarray) -> np.ndarray:
    """Map a radial distance to a Euclidean norm inside the unit ball,
    (cosh r - 1) / (2 + cosh r); monotone, with range [0, 1)."""
    c = np.cosh(r)
    return (c - 1.0) / (2.0 + c)


def radius_of_poincare_norm(e: np.ndarray) -> np.ndarray:
    """Inverse of poincare_norm_of_radius."""
    return np.arccosh((1.0 + 2.0 * np.asarray(e)) / (1.0 - np.asarray(e)))


def sample_hyperbolic(
    n_points: int,
    dim: int,
    params: HyperbolicParams,
    seed: SeedLike,
    n_knots: int = 10_000,
) -> PointCloud:
    """Points in the Poincare ball: uniform directions, radial distances
    drawn from the configured sinh^q law on [0, R], then mapped to ball
    norms with (cosh r - 1) / (2 + cosh r)."""
    if n_points < 2 or dim < 2:
        raise ValueError("need n_points >= 2 and dim >= 2")
    rng = as_rng(seed)
    directions = sample_sphere(n_points, dim, rng).coordinates
    inverse = hyperbolic_radial_inverse_cdf(params.radial_exponent, params.radius, n_knots)
    radial = inverse(rng.random(n_points))
    norms = poincare_norm_of_radius(radial)
    return PointCloud(
        geometry=HYPERBOLIC, coordinates=directions * norms[:, None], radius=params.radius
    )


def _domain_check(cond: np.ndarray, values: np.ndarray, n: int) -> None:
    """Raise NumericalDomainError at the first pair violating `cond`."""
    bad = np.nonzero(~cond)[0]
    if bad.size:
        iu, ju = pair_indices(n)
        b = int(bad[0])
        raise NumericalDomainError(int(iu[b]), int(ju[b]), float(values[b]))


def distance_matrix(cloud: PointCloud) -> SymmetricMatrix:
    """Pairwise geodesic distances for the cloud's geometry."""
    x = cloud.coordinates
    n = cloud.n_points
    iu, ju = pair_indices(n)
    if cloud.geometry == EUCLIDEAN_CUBE:
        return SymmetricMatrix(n=n, entries=pdist(x))
    if cloud.geometry == SPHERE:
        dots = (x @ x.T)[iu, ju]
        _domain_check(np.abs(dots) <= 1.0 + _CLAMP_TOL, dots, n)
        return SymmetricMatrix(n=n, entries=np.arccos(np.clip(dots, -1.0, 1.0)))
    if cloud.geometry == HYPERBOLIC:
        sq = pdist(x, "sqeuclidean")
        one_minus = 1.0 - (x * x).sum(axis=1)
        arg = 1.0 + 2.0 * sq / (one_minus[iu] * one_minus[ju])
        _domain_check(arg >= 1.0 - _CLAMP_TOL, arg, n)
        return SymmetricMatrix(n=n, entries=np.arccosh(np.maximum(arg, 1.0)))
    raise ValueError(f"unknown geometry {cloud.geometry!r}")


def random_correlation(n_series: int, length: int, seed: SeedLike) -> SymmetricMatrix:
    """Pearson correlation matrix of independent Gaussian white noise."""
    if n_series < 2 or length < 3:
        raise ValueError("need n_series >= 2 and length >= 3")
    rng = as_rng(seed)
    series = TimeSeriesSet(values=rng.standard_normal((n_series, length)))
    return pearson_correlation(series)
