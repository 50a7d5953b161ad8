"""Direct-relation normalization, total-relation matrix, and prominence table."""

from __future__ import annotations

import warnings
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Relative pivot magnitude below which (I - X) counts as singular.
PIVOT_TOLERANCE = 1e-12

# Values this close (relative to the largest magnitude) rank as ties; keeps
# ranks and cause/effect labels stable under float noise.
TIE_TOLERANCE = 1e-9

CAUSE = "cause"
EFFECT = "effect"


class DegenerateStudyError(ValueError):
    """The crisp matrix carries no influence at all."""


class InfeasibleStudyError(ArithmeticError):
    """(I - X) is singular, so the total-relation matrix does not exist."""


@dataclass(frozen=True)
class ProminenceRecord:
    factor_code: str
    r: float
    c: float
    prominence: float
    net_influence: float
    prominence_rank: int
    influence_rank: int
    group: str

    @property
    def label(self) -> str:
        return "C" if self.group == CAUSE else "E"


def normalize_direct_matrix(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError(f"crisp matrix must be square, got shape {z.shape}")
    s = z.sum(axis=1).max()
    if not s > 0:
        raise DegenerateStudyError("all row sums of the crisp matrix are zero; nothing to normalize")
    return z / s


def total_relation_matrix(x: np.ndarray) -> np.ndarray:
    """M = X (I - X)^-1, via an LU solve of (I - X)^T M^T = X^T."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    a = np.eye(n) - x
    with warnings.catch_warnings():
        # singularity is reported below as InfeasibleStudyError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a.T, check_finite=True)
    scale = np.abs(a).max()
    if np.abs(np.diag(lu)).min() < PIVOT_TOLERANCE * scale:
        raise InfeasibleStudyError(
            "I - X is singular or nearly so; the total-relation matrix is undefined "
            "(a revised DEMATEL normalization such as Lee et al. 2013 would be needed)"
        )
    return scipy.linalg.lu_solve((lu, piv), x.T).T


def row_column_sums(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m, dtype=float)
    return m.sum(axis=1), m.sum(axis=0)


def _tolerance(values: np.ndarray) -> float:
    return TIE_TOLERANCE * float(np.abs(values).max()) if len(values) else 0.0


def competition_rank_desc(values: Sequence[float]) -> list[int]:
    """1-based descending ranks; tied values share the smallest rank.

    Neighbouring values closer than the tie tolerance count as tied.
    """
    v = np.asarray(values, dtype=float)
    tol = _tolerance(v)
    order = np.argsort(-v, kind="stable")
    ranks = [0] * len(v)
    rank = 1
    for pos, idx in enumerate(order):
        if pos > 0 and v[order[pos - 1]] - v[idx] > tol:
            rank = pos + 1
        ranks[idx] = rank
    return ranks


def prominence_table(r: Sequence[float], c: Sequence[float], codes: Sequence[str]) -> list[ProminenceRecord]:
    if not (len(r) == len(c) == len(codes)):
        raise ValueError("R, C and codes must have equal length")
    r = [float(v) for v in r]
    c = [float(v) for v in c]
    prom = [ri + ci for ri, ci in zip(r, c)]
    net = [ri - ci for ri, ci in zip(r, c)]
    prom_rank = competition_rank_desc(prom)
    net_rank = competition_rank_desc(net)
    zero_tol = _tolerance(np.asarray(prom))
    return [
        ProminenceRecord(
            factor_code=code,
            r=r[i],
            c=c[i],
            prominence=prom[i],
            net_influence=net[i],
            prominence_rank=prom_rank[i],
            influence_rank=net_rank[i],
            # zero net influence is classed as cause
            group=CAUSE if net[i] >= -zero_tol else EFFECT,
        )
        for i, code in enumerate(codes)
    ]


@dataclass(frozen=True)
class IPMPoint:
    code: str
    x: float
    y: float
    group: str


def ipm_points(records: Sequence[ProminenceRecord]) -> list[IPMPoint]:
    """Influence-prominence map coordinates: x = R+C, y = R-C."""
    return [IPMPoint(rec.factor_code, rec.prominence, rec.net_influence, rec.group) for rec in records]
