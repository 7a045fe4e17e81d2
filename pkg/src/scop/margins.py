"""Nonparametric margins: empirical cdfs and rank-based pseudo-observations.

The ecdf (rank/R, attaining 1 at the sample maximum) is exposed for
diagnostics and plotting; copula fitting uses rank/(R+1) pseudo-observations
so that log-densities stay finite at every data point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous empirical distribution function of a sample."""

    sorted_values: np.ndarray

    def __call__(self, y):
        """P_hat(X <= y) = #{values <= y} / R, vectorized over ``y``."""
        y = np.asarray(y, dtype=float)
        counts = np.searchsorted(self.sorted_values, y, side="right")
        out = counts / self.sorted_values.size
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class PseudoSample:
    """Epoch-aligned pairs (u, v) strictly inside the unit square."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u, v = np.asarray(self.u, float), np.asarray(self.v, float)
        if u.shape != v.shape or u.ndim != 1:
            raise ValidationError(f"u and v must be 1-d and paired, got {u.shape} vs {v.shape}")
        if u.size < 2:
            raise ValidationError("need at least two pairs")
        if not (np.all((u > 0) & (u < 1)) and np.all((v > 0) & (v < 1))):
            raise ValidationError("pseudo-observations must lie strictly inside (0, 1)")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.u.size


def ecdf(values) -> EmpiricalCdf:
    """Empirical cdf of a length-R sample (R >= 2, finite entries)."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ValidationError(f"need a 1-d sample with R >= 2, got shape {values.shape}")
    if not np.isfinite(values).all():
        raise ValidationError("sample contains non-finite values")
    return EmpiricalCdf(sorted_values=np.sort(values))


def pseudo_observations(x, y) -> PseudoSample:
    """Rank-transform paired samples to the open unit square.

    u[r] = rank(x[r]) / (R+1) with average ranks on ties, and likewise for v.
    Invariant under strictly increasing transforms of either margin.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError(f"samples must be 1-d and paired, got {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValidationError("need at least two pairs")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValidationError("samples contain non-finite values")
    n = x.size
    return PseudoSample(u=rankdata(x, method="average") / (n + 1),
                        v=rankdata(y, method="average") / (n + 1))
