"""Grey interval numbers, the linguistic rating scale, and expert aggregation."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

logger = logging.getLogger(__name__)

# Weights are snapped to nearby rationals before normalization so that
# 0.3 and 30.000000000000004 normalize to the same value.
_WEIGHT_DENOMINATOR_LIMIT = 10**9


class ScaleError(ValueError):
    """Raised for malformed scales and unknown linguistic codes."""


@dataclass(frozen=True)
class GreyNumber:
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError(f"grey bounds must be finite, got [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            raise ValueError(f"lower bound exceeds upper bound: [{self.lower}, {self.upper}]")

    def as_tuple(self) -> tuple[float, float]:
        return (self.lower, self.upper)


ZERO = GreyNumber(0.0, 0.0)


@dataclass(frozen=True)
class LinguisticScale:
    """Ordered mapping from linguistic code to grey interval.

    Codes are stored upper case. Bounds must be non-decreasing along the
    scale order.
    """

    values: Mapping[str, GreyNumber] = field(default_factory=dict)

    def __post_init__(self):
        if not self.values:
            raise ScaleError("scale must define at least one code")
        canonical: dict[str, GreyNumber] = {}
        for code, value in self.values.items():
            key = str(code).strip().upper()
            if not key:
                raise ScaleError("scale codes must be non-empty")
            if key in canonical:
                raise ScaleError(f"duplicate scale code {key!r}")
            if not isinstance(value, GreyNumber):
                value = GreyNumber(float(value[0]), float(value[1]))
            canonical[key] = value
        items = list(canonical.values())
        for prev, cur in zip(items, items[1:]):
            if cur.lower < prev.lower or cur.upper < prev.upper:
                raise ScaleError("scale grey values must be non-decreasing in both bounds")
        object.__setattr__(self, "values", canonical)

    @classmethod
    def from_pairs(cls, pairs: Mapping[str, Sequence[float]]) -> LinguisticScale:
        return cls({code: GreyNumber(float(lo), float(hi)) for code, (lo, hi) in pairs.items()})

    @property
    def codes(self) -> list[str]:
        return list(self.values)

    def __contains__(self, code: object) -> bool:
        return isinstance(code, str) and code.strip().upper() in self.values

    def to_pairs(self) -> dict[str, list[float]]:
        return {code: [g.lower, g.upper] for code, g in self.values.items()}


DEFAULT_SCALE = LinguisticScale.from_pairs(
    {
        "N": (0, 0),
        "VL": (0, 1),
        "L": (1, 2),
        "M": (2, 3),
        "H": (3, 4),
        "VH": (4, 5),
    }
)

# Diagonal cells must carry this code.
NO_INFLUENCE = "N"


@dataclass(frozen=True, eq=False)
class GreyMatrix:
    """Square matrix of grey numbers, stored as two float arrays."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float)
        upper = np.array(self.upper, dtype=float)
        if lower.ndim != 2 or lower.shape[0] != lower.shape[1]:
            raise ValueError(f"grey matrix must be square, got shape {lower.shape}")
        if upper.shape != lower.shape:
            raise ValueError("lower and upper bound arrays differ in shape")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("grey matrix bounds must be finite")
        if np.any(lower > upper):
            raise ValueError("grey matrix has an entry with lower > upper")
        if np.any(np.diag(lower) != 0) or np.any(np.diag(upper) != 0):
            raise ValueError("grey matrix diagonal must be [0, 0]")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def __getitem__(self, ij: tuple[int, int]) -> GreyNumber:
        return GreyNumber(float(self.lower[ij]), float(self.upper[ij]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GreyMatrix):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def row(self, i: int) -> list[GreyNumber]:
        return [self[i, j] for j in range(self.n)]

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Sequence[float]]]) -> GreyMatrix:
        arr = np.asarray(entries, dtype=float)
        return cls(arr[..., 0], arr[..., 1])


def rating_to_grey(code: str, scale: LinguisticScale = DEFAULT_SCALE) -> GreyNumber:
    key = code.strip().upper() if isinstance(code, str) else code
    try:
        return scale.values[key]
    except (KeyError, TypeError):
        raise ScaleError(f"unknown linguistic code {code!r}; expected one of {scale.codes}") from None


class AssessmentError(ValueError):
    def __init__(self, message: str, expert: str | None = None, row: int | None = None, col: int | None = None):
        self.expert = expert
        self.row = row
        self.col = col
        where = []
        if expert is not None:
            where.append(f"expert {expert}")
        if row is not None:
            where.append(f"row {row + 1}")
        if col is not None:
            where.append(f"column {col + 1}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def assessment_to_grey_matrix(
    ratings: Sequence[Sequence[str]],
    scale: LinguisticScale = DEFAULT_SCALE,
    expert: str | None = None,
) -> GreyMatrix:
    """Map one expert's grid of linguistic codes onto grey intervals.

    Row and column numbers in errors are 1-based.
    """
    n = len(ratings)
    for i, row in enumerate(ratings):
        if len(row) != n:
            raise AssessmentError(f"matrix is not square ({n} rows, row has {len(row)} entries)", expert, i)
    lower = np.zeros((n, n))
    upper = np.zeros((n, n))
    for i, row in enumerate(ratings):
        for j, code in enumerate(row):
            if i == j:
                if not (isinstance(code, str) and code.strip().upper() == NO_INFLUENCE):
                    raise AssessmentError(f"diagonal must be {NO_INFLUENCE!r}, got {code!r}", expert, i, j)
                continue
            try:
                g = rating_to_grey(code, scale)
            except ScaleError as exc:
                raise AssessmentError(str(exc), expert, i, j) from None
            lower[i, j] = g.lower
            upper[i, j] = g.upper
    return GreyMatrix(lower, upper)


def normalize_weights(weights: Sequence[float]) -> np.ndarray:
    """Scale non-negative weights to sum to one.

    Normalization runs in exact rational arithmetic, so equal weights always
    come out as exactly ``1/K`` and rescaling all weights by a common factor
    does not change the result.
    """
    if len(weights) == 0:
        raise ValueError("at least one weight is required")
    fracs = []
    for w in weights:
        w = float(w)
        if not math.isfinite(w) or w < 0:
            raise ValueError(f"weights must be finite and non-negative, got {w}")
        fracs.append(Fraction(w).limit_denominator(_WEIGHT_DENOMINATOR_LIMIT))
    total = sum(fracs)
    if total == 0:
        raise ValueError("weights must not all be zero")
    if total != 1:
        logger.info("expert weights sum to %s; normalizing to 1", float(total))
    return np.array([float(f / total) for f in fracs])


def weighted_average_grey(matrices: Sequence[GreyMatrix], weights: Sequence[float] | None = None) -> GreyMatrix:
    """Entrywise weighted mean of grey matrices, bounds averaged independently.

    With ``weights=None`` every matrix gets the same weight, which is the
    plain arithmetic mean.
    """
    if not matrices:
        raise ValueError("at least one grey matrix is required")
    n = matrices[0].n
    for k, m in enumerate(matrices):
        if m.n != n:
            raise ValueError(f"matrix {k} is {m.n}x{m.n}, expected {n}x{n}")
    if weights is None:
        weights = [1.0] * len(matrices)
    if len(weights) != len(matrices):
        raise ValueError(f"got {len(weights)} weights for {len(matrices)} matrices")
    w = normalize_weights(weights)
    lower = np.zeros((n, n))
    upper = np.zeros((n, n))
    for wk, m in zip(w, matrices):
        lower += wk * m.lower
        upper += wk * m.upper
    return GreyMatrix(lower, upper)
