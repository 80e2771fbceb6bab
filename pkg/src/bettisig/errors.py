"""Exception types shared across the package."""


class BettisigError(Exception):
    """Base class for all package-specific errors."""


class ConstantSeriesError(BettisigError):
    """A series has zero variance and cannot be correlated."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"series {index} is constant (zero variance)")


class LengthMismatchError(BettisigError):
    """Ragged time-series input: not all series share one length."""


class NonPositivePriceError(BettisigError):
    """Log returns require strictly positive prices."""

    def __init__(self, series: int, t: int):
        self.series = series
        self.t = t
        super().__init__(f"non-positive price in series {series} at t={t}")


class NonFiniteEntryError(BettisigError):
    """A matrix entry is NaN or infinite where a finite value is required."""

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"non-finite entry at ({i}, {j})")


class BudgetExceededError(BettisigError):
    """The simplex count would exceed the configured cap."""

    def __init__(self, limit: int, needed: int):
        self.limit = limit
        self.needed = needed
        super().__init__(f"simplex budget exceeded: need {needed}, cap {limit}")


class TooLargeError(BettisigError):
    """Instance too large for the exponential brute-force path."""

    def __init__(self, n: int, limit: int = 16):
        self.n = n
        self.limit = limit
        super().__init__(f"brute force limited to {limit} vertices, got {n}")


class NumericalDomainError(BettisigError):
    """A geodesic-distance argument left its valid domain beyond tolerance."""

    def __init__(self, i: int, j: int, value: float):
        self.i = i
        self.j = j
        self.value = value
        super().__init__(f"distance argument out of domain at ({i}, {j}): {value!r}")


class DimOutOfRangeError(BettisigError):
    """Requested Betti dimension is not present in the curve."""

    def __init__(self, dim: int, max_dim: int):
        self.dim = dim
        self.max_dim = max_dim
        super().__init__(f"dimension {dim} not available (curve has 0..{max_dim})")


class InvalidModuleCountError(BettisigError):
    """Module count must satisfy 1 <= m <= n_series."""

    def __init__(self, m: int, n_series: int):
        self.m = m
        self.n_series = n_series
        super().__init__(f"invalid module count {m} for {n_series} series")


class ParseError(BettisigError):
    """A CSV or config file failed to parse or violated its format contract."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        loc = ""
        if path is not None:
            loc = f" [{path}{':' + str(line) if line is not None else ''}]"
        super().__init__(message + loc)


class PreprocessingError(BettisigError):
    """Requested preprocessing is invalid for the given data kind."""


class LengthExceedsDataError(BettisigError):
    """A requested segment length exceeds the available series length."""

    def __init__(self, length: int, available: int):
        self.length = length
        self.available = available
        super().__init__(f"segment length {length} exceeds series length {available}")
