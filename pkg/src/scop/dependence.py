"""Spectral dependence measures: coherence, rank-based coherence, and the
Kendall-type independence test.

The rank-based coherence is Kendall's tau-a computed on epoch-aligned
Fourier-coefficient magnitudes at a fixed frequency (or frequency-aligned
within a band): (#concordant - #discordant) / (R(R-1)/2), tied pairs
counting as neither. The fast path counts discordances with a merge-sort
inversion count and agrees exactly, as integer counts, with the naive
O(R^2) reference implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DomainError, ValidationError

_LEAF = 64  # below this size, count inversions by direct comparison


@dataclass(frozen=True)
class IndependenceTestResult:
    """Normal-approximation Kendall independence test outcome."""

    statistic: float
    p_value: float
    epoch_count: int
    rank_coherence: float
    small_sample: bool = False


@dataclass(frozen=True)
class DependenceEstimate:
    """A dependence value with the metadata identifying what it measured."""

    kind: str  # "coherence" | "band_coherence" | "rank_coherence"
    value: float
    channels: tuple[int, int]
    frequency_index: int | None = None
    band: str | None = None
    epochs: tuple[int, int] | None = None
    epochs_second: tuple[int, int] | None = None


def _paired(x, y, dtype=float):
    x = np.asarray(x, dtype=dtype)
    y = np.asarray(y, dtype=dtype)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError(f"inputs must be 1-d and paired, got {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValidationError("need at least two pairs")
    return x, y


def coherence_over_epochs(f_l, f_lp) -> float:
    """Coherence pooled over epochs at one frequency.

    |sum_r f_l[r] conj(f_lp[r])|^2 / (sum |f_l|^2 * sum |f_lp|^2), in [0, 1].
    """
    f_l, f_lp = _paired(f_l, f_lp, dtype=complex)
    p_l = np.sum(np.abs(f_l) ** 2)
    p_lp = np.sum(np.abs(f_lp) ** 2)
    if p_l == 0.0 or p_lp == 0.0:
        raise DomainError("coherence undefined: a channel is identically zero at this frequency")
    cross = np.abs(np.sum(f_l * np.conj(f_lp))) ** 2
    return float(min(cross / (p_l * p_lp), 1.0))


def band_coherence_per_epoch(f_l_band, f_lp_band) -> float:
    """Single-epoch coherence with the sums running over a band's indices."""
    f_l_band = np.asarray(f_l_band, dtype=complex)
    if f_l_band.size < 2:
        raise DomainError("band coherence needs at least two frequency indices")
    return coherence_over_epochs(f_l_band, f_lp_band)


def _count_inversions(a: np.ndarray) -> tuple[int, np.ndarray]:
    """Strict inversions (i < j, a[i] > a[j]) and the sorted array."""
    n = a.size
    if n <= _LEAF:
        gt = a[:, None] > a[None, :]
        inv = int(gt[np.triu_indices(n, k=1)].sum())
        return inv, np.sort(a)
    mid = n // 2
    inv_left, left = _count_inversions(a[:mid])
    inv_right, right = _count_inversions(a[mid:])
    # pairs (i in left, j in right) with left[i] > right[j]
    pos = np.searchsorted(left, right, side="right")
    cross = left.size * right.size - int(pos.sum(dtype=np.int64))
    return inv_left + inv_right + cross, np.sort(np.concatenate([left, right]))


def _tie_pair_count(values: np.ndarray) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int((counts * (counts - 1) // 2).sum(dtype=np.int64))


def kendall_tau(x, y) -> float:
    """Kendall's tau-a by merge-sort inversion counting, O(R log R).

    Tied pairs (in either coordinate) count as neither concordant nor
    discordant; the denominator is R(R-1)/2.
    """
    x, y = _paired(x, y)
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValidationError("inputs contain non-finite values")
    n = x.size
    order = np.lexsort((y, x))
    ys = y[order]
    n0 = n * (n - 1) // 2
    n1 = _tie_pair_count(x)
    n2 = _tie_pair_count(y)
    # pairs tied in both coordinates
    pairs = np.empty(n, dtype=[("x", float), ("y", float)])
    pairs["x"], pairs["y"] = x, y
    _, joint_counts = np.unique(pairs, return_counts=True)
    n3 = int((joint_counts * (joint_counts - 1) // 2).sum(dtype=np.int64))
    discordant, _ = _count_inversions(ys)
    c_minus_d = n0 - n1 - n2 + n3 - 2 * discordant
    return c_minus_d / n0


def kendall_tau_naive(x, y) -> float:
    """O(R^2) reference implementation: enumerate every pair once."""
    x, y = _paired(x, y)
    n = x.size
    dx = np.sign(x[:, None] - x[None, :])
    dy = np.sign(y[:, None] - y[None, :])
    prod = dx * dy
    iu = np.triu_indices(n, k=1)
    concordant = int((prod[iu] > 0).sum())
    discordant = int((prod[iu] < 0).sum())
    return (concordant - discordant) / (n * (n - 1) // 2)


def rank_coherence(delta_l, delta_lp) -> float:
    """Rank-based coherence: Kendall tau-a over epoch-aligned magnitudes."""
    return kendall_tau(delta_l, delta_lp)


def rank_coherence_band(delta_l_band, delta_lp_band) -> float:
    """Rank-based coherence within one epoch, paired by frequency index."""
    delta_l_band = np.asarray(delta_l_band, dtype=float)
    if delta_l_band.size < 2:
        raise DomainError("band rank coherence needs at least two frequency indices")
    return kendall_tau(delta_l_band, delta_lp_band)


def independence_test(k_hat: float, R: int) -> IndependenceTestResult:
    """Kendall-type test of independence from a rank coherence estimate.

    statistic = k_hat * sqrt(9 R (R-1) / (2 (2R + 5))), compared two-sided
    against the standard normal. R below 10 is outside the comfortable
    normal-approximation regime; the result is still returned, flagged.
    """
    if not np.isfinite(k_hat) or abs(k_hat) > 1:
        raise ValidationError(f"rank coherence must lie in [-1, 1], got {k_hat}")
    if R < 2:
        raise ValidationError(f"need R >= 2 epochs, got {R}")
    stat = k_hat * np.sqrt(9.0 * R * (R - 1) / (2.0 * (2.0 * R + 5.0)))
    p = 2.0 * (1.0 - ndtr(abs(stat)))
    return IndependenceTestResult(
        statistic=float(stat),
        p_value=float(min(p, 1.0)),
        epoch_count=int(R),
        rank_coherence=float(k_hat),
        small_sample=R < 10,
    )
