"""Modified-CFCS conversion of an averaged grey matrix into crisp scores.

Each row is normalized on its own range, the normalized bounds are fused
into one crisp value, and the result is mapped back onto the row's scale.

Two variants are provided. ``paper`` shifts upper bounds by the row minimum
of the *upper* bounds and rescales from the minimum *normalized* lower
bound. ``standard`` uses the row minimum of the lower bounds for both, as
classic CFCS does. With a zero diagonal and a non-negative scale the two
produce identical output.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grey import GreyMatrix, GreyNumber


class CFCSVariant(str, Enum):
    PAPER = "paper"
    STANDARD = "standard"


@dataclass(frozen=True)
class RowNormalization:
    min_lower: float
    min_upper: float
    max_upper: float
    delta: float


def row_normalization(row: Sequence[GreyNumber]) -> RowNormalization:
    if len(row) == 0:
        raise ValueError("cannot normalize an empty row")
    lowers = [g.lower for g in row]
    uppers = [g.upper for g in row]
    return _stats(np.array(lowers), np.array(uppers))


def _stats(lower: np.ndarray, upper: np.ndarray) -> RowNormalization:
    min_lower = float(lower.min())
    max_upper = float(upper.max())
    return RowNormalization(
        min_lower=min_lower,
        min_upper=float(upper.min()),
        max_upper=max_upper,
        delta=max_upper - min_lower,
    )


def _crisp_row(
    lower: np.ndarray, upper: np.ndarray, stats: RowNormalization, variant: CFCSVariant
) -> np.ndarray:
    if stats.delta == 0:
        # Every entry in the row is the same crisp value.
        return np.full(lower.shape, stats.min_lower)
    norm_lower = (lower - stats.min_lower) / stats.delta
    if variant is CFCSVariant.PAPER:
        norm_upper = (upper - stats.min_upper) / stats.delta
        offset = float(norm_lower.min())
    else:
        norm_upper = (upper - stats.min_lower) / stats.delta
        offset = stats.min_lower
    denom = 1.0 - norm_lower + norm_upper
    if np.any(denom <= 0):
        raise ValueError("degenerate CFCS row: crisp-value denominator is not positive")
    y = (norm_lower * (1.0 - norm_lower) + norm_upper * norm_upper) / denom
    return offset + y * stats.delta


def defuzzify(
    grey: GreyMatrix,
    variant: CFCSVariant | str = CFCSVariant.PAPER,
    include_diagonal: bool = True,
) -> np.ndarray:
    """Crisp direct-relation matrix from an averaged grey matrix.

    When ``include_diagonal`` is false the row statistics are taken over
    off-diagonal cells only; the diagonal of the result is zero either way.
    """
    variant = CFCSVariant(variant)
    n = grey.n
    if not include_diagonal and n < 2:
        raise ValueError("a 1x1 matrix has no off-diagonal entries to normalize")
    z = np.zeros((n, n))
    for i in range(n):
        if include_diagonal:
            cols = np.arange(n)
        else:
            cols = np.array([j for j in range(n) if j != i])
        lo = grey.lower[i, cols]
        hi = grey.upper[i, cols]
        z[i, cols] = _crisp_row(lo, hi, _stats(lo, hi), variant)
    np.fill_diagonal(z, 0.0)
    return z
