"""Epoch handling, per-epoch discrete Fourier transforms, frequency-band
bookkeeping, and AR(2) theoretical spectra.

Conventions
-----------
The DFT of one epoch of length T uses the orthonormal scaling

    f[k] = (1/sqrt(T)) * sum_t x[t] * exp(-i 2 pi (k/T) t),   t = 0..T-1,

so Parseval holds exactly and the fundamental frequencies are
omega_k = k/T cycles per sample (k*fs/T in Hz). Indexing epochs and time
from zero instead of one changes only a unit-modulus phase per bin, which
is irrelevant for the coefficient magnitudes consumed downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

#: Named band edges in Hz; gamma's upper edge is capped at Nyquist at use time.
BAND_EDGES = {
    "delta": (0.0, 4.0),
    "theta": (4.0, 8.0),
    "alpha": (8.0, 12.0),
    "beta": (12.0, 30.0),
    "gamma": (30.0, None),
}


@dataclass(frozen=True, eq=False)
class EpochedSeries:
    """A d-channel recording cut into R epochs of T samples each.

    Parameters
    ----------
    data : ndarray, shape (d, R, T)
        Real-valued samples; every entry must be finite.
    fs : float
        Sampling rate in Hz.
    """

    data: np.ndarray
    fs: float

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 3:
            raise ValidationError(
                f"epoched data must be (channels, epochs, samples), got shape {data.shape}"
            )
        d, R, T = data.shape
        if d < 1 or R < 2 or T < 2:
            raise ValidationError(f"need d >= 1, R >= 2, T >= 2, got ({d}, {R}, {T})")
        if not np.isfinite(data).all():
            raise ValidationError("epoched data contains non-finite values")
        if not (np.isfinite(self.fs) and self.fs > 0):
            raise ValidationError(f"sampling rate must be a positive real, got {self.fs}")
        object.__setattr__(self, "data", data)

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @property
    def R(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> int:
        return self.data.shape[2]

    @property
    def nyquist(self) -> float:
        return self.fs / 2.0

    def channel(self, ell: int) -> np.ndarray:
        """(R, T) view of channel ``ell`` (0-based)."""
        if not 0 <= ell < self.d:
            raise ValidationError(f"channel {ell} out of range [0, {self.d})")
        return self.data[ell]


@dataclass(frozen=True, eq=False)
class SpectralMagnitudes:
    """Per-epoch Fourier-coefficient magnitudes of one channel at one bin.

    ``k`` is None for band-aggregated magnitudes (sum of in-band magnitudes
    within each epoch).
    """

    channel: int
    k: int | None
    values: np.ndarray


@dataclass(frozen=True)
class FrequencyBand:
    """Half-open frequency interval [lower, upper) in Hz."""

    name: str
    lower: float
    upper: float

    def __post_init__(self):
        if not (0 <= self.lower < self.upper):
            raise ValidationError(
                f"band must satisfy 0 <= lower < upper, got [{self.lower}, {self.upper})"
            )

    @classmethod
    def named(cls, name: str, fs: float) -> "FrequencyBand":
        """Standard EEG band by name; gamma extends to Nyquist."""
        if name not in BAND_EDGES:
            raise ValidationError(f"unknown band {name!r}; expected one of {sorted(BAND_EDGES)}")
        lower, upper = BAND_EDGES[name]
        if upper is None:
            upper = fs / 2.0
        return cls(name, lower, upper)


def dft_epoch(x) -> np.ndarray:
    """Orthonormal DFT of a single epoch.

    Returns the length-T complex vector f with
    f[k] = (1/sqrt(T)) sum_t x[t] exp(-i 2 pi k t / T).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValidationError(f"epoch must be a 1-d vector with T >= 2, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise ValidationError("epoch contains non-finite values")
    return np.fft.fft(x) / np.sqrt(x.size)


def channel_dft(series: EpochedSeries, ell: int) -> np.ndarray:
    """(R, T) complex array of Fourier coefficients for channel ``ell``."""
    epochs = series.channel(ell)
    return np.fft.fft(epochs, axis=-1) / np.sqrt(series.T)


def magnitudes(series: EpochedSeries, ell: int, k: int) -> SpectralMagnitudes:
    """Length-R vector of |f[k]| across epochs for one channel."""
    if not 0 <= k <= series.T - 1:
        raise DomainError(f"frequency index {k} out of range [0, {series.T - 1}]")
    coeffs = channel_dft(series, ell)
    return SpectralMagnitudes(channel=ell, k=k, values=np.abs(coeffs[:, k]))


def hz_to_index(f: float, T: int, fs: float) -> int:
    """Nearest fundamental-frequency index for ``f`` Hz: k = round(f*T/fs)."""
    if not np.isfinite(f) or f < 0:
        raise DomainError(f"frequency must be a nonnegative real, got {f}")
    if f > fs / 2.0:
        raise DomainError(f"frequency {f} Hz above Nyquist {fs / 2.0} Hz")
    return int(round(f * T / fs))


def band_indices(band: FrequencyBand, T: int, fs: float) -> np.ndarray:
    """All indices k with band.lower <= k*fs/T < band.upper."""
    if band.upper > fs / 2.0:
        raise DomainError(
            f"band upper edge {band.upper} Hz above Nyquist {fs / 2.0} Hz"
        )
    k = np.arange(T // 2 + 1)
    freqs = k * fs / T
    ks = k[(freqs >= band.lower) & (freqs < band.upper)]
    if ks.size == 0:
        raise DomainError(
            f"band [{band.lower}, {band.upper}) Hz narrower than the frequency "
            f"resolution {fs / T} Hz; no index falls inside"
        )
    return ks


def band_magnitudes(series: EpochedSeries, ell: int, band: FrequencyBand) -> SpectralMagnitudes:
    """Per-epoch sums of in-band coefficient magnitudes (band margins).

    Magnitudes are summed across the band's frequency indices within each
    epoch; the resulting length-R vector feeds the same rank machinery as
    single-frequency magnitudes.
    """
    ks = band_indices(band, series.T, series.fs)
    coeffs = channel_dft(series, ell)
    return SpectralMagnitudes(channel=ell, k=None, values=np.abs(coeffs[:, ks]).sum(axis=1))


def ar2_is_stationary(phi1: float, phi2: float) -> bool:
    """Stationarity triangle for AR(2): roots strictly outside the unit circle."""
    return (phi1 + phi2 < 1.0) and (phi2 - phi1 < 1.0) and (abs(phi2) < 1.0)


def ar2_from_root(magnitude: float, f: float, fs: float) -> tuple[float, float]:
    """AR(2) coefficients whose characteristic roots are magnitude*e^(+-i*2*pi*f/fs).

    ``magnitude`` must exceed 1 for stationarity.
    """
    if magnitude <= 1.0:
        raise DomainError(f"root magnitude must exceed 1 for stationarity, got {magnitude}")
    w = 2.0 * np.pi * f / fs
    return 2.0 * np.cos(w) / magnitude, -1.0 / magnitude**2


def ar2_theoretical_spectrum(phi1: float, phi2: float, sigma2: float, omega):
    """AR(2) spectral density sigma2 / |1 - phi1 e^{-i2pi w} - phi2 e^{-i4pi w}|^2.

    ``omega`` is in cycles per sample; scalar or array. The density is
    normalized so its integral over omega in [0, 1) equals the process
    variance.
    """
    if not ar2_is_stationary(phi1, phi2):
        raise DomainError(f"non-stationary AR(2) coefficients ({phi1}, {phi2})")
    if sigma2 <= 0:
        raise ValidationError(f"innovation variance must be positive, got {sigma2}")
    omega = np.asarray(omega, dtype=float)
    z = np.exp(-2j * np.pi * omega)
    denom = np.abs(1.0 - phi1 * z - phi2 * z * z) ** 2
    out = sigma2 / denom
    return float(out) if out.ndim == 0 else out


def ar2_stationary_variance(phi1: float, phi2: float, sigma2: float = 1.0) -> float:
    """Closed-form stationary variance of a stationary AR(2) process."""
    if not ar2_is_stationary(phi1, phi2):
        raise DomainError(f"non-stationary AR(2) coefficients ({phi1}, {phi2})")
    return sigma2 * (1.0 - phi2) / ((1.0 + phi2) * ((1.0 - phi2) ** 2 - phi1**2))
