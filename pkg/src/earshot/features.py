"""Per-window audio descriptors and the 54-dimensional segment vector.

Each 1024-sample frame is Hann-windowed, transformed to a 512-bin
magnitude spectrum and described by 27 scalars:

    rolloff, flux, flux_std, compactness, variability,
    13 MFCCs, 9 LPC coefficients

A segment's vector holds the per-window means (positions 0..26, in the
order above) followed by the matching population standard deviations
(positions 27..53).
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np
from scipy.fft import dct

from .audio_io import FRAME_LEN, SAMPLE_RATE, Frame
from .dsp import LOG_FLOOR, fft_magnitude, hann_window

VECTOR_DIM = 54
N_WINDOW_FEATURES = 27
N_MFCC = 13
N_MEL_FILTERS = 26
N_LPC = 9
FLUX_HISTORY = 10

FEATURE_NAMES = (
    ["rolloff", "flux", "flux_std", "compactness", "variability"]
    + [f"mfcc{i}" for i in range(N_MFCC)]
    + [f"lpc{i + 1}" for i in range(N_LPC)]
)


def spectral_rolloff(spec: np.ndarray, cutoff: float = 0.85) -> float:
    """Fraction of the spectrum below which `cutoff` of the energy lies."""
    if not 0.0 < cutoff <= 1.0:
        raise ValueError(f"cutoff must be in (0, 1], got {cutoff}")
    power = np.asarray(spec, dtype=np.float64) ** 2
    total = power.sum()
    if total == 0.0:
        return 0.0
    r = int(np.searchsorted(np.cumsum(power), cutoff * total))
    return r / power.size


def spectral_flux(spec: np.ndarray, spec_prev: np.ndarray) -> float:
    """Sum of squared bin-wise magnitude differences between windows."""
    spec = np.asarray(spec, dtype=np.float64)
    spec_prev = np.asarray(spec_prev, dtype=np.float64)
    if spec.shape != spec_prev.shape:
        raise ValueError("spectra must have equal length")
    return float(np.sum((spec - spec_prev) ** 2))


def flux_std(history: Sequence[float]) -> float:
    """Population std of the trailing flux history (up to 10 windows)."""
    return float(np.std(np.asarray(history, dtype=np.float64)))


def compactness(spec: np.ndarray) -> float:
    """Summed deviation of each bin's log magnitude from its 3-bin mean."""
    log_mag = 20.0 * np.log10(np.asarray(spec, dtype=np.float64) + LOG_FLOOR)
    local_mean = (log_mag[:-2] + log_mag[1:-1] + log_mag[2:]) / 3.0
    return float(np.sum(np.abs(log_mag[1:-1] - local_mean)))


def spectral_variability(spec: np.ndarray) -> float:
    """Population standard deviation of the magnitude values."""
    return float(np.std(np.asarray(spec, dtype=np.float64)))


def _hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def _mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_filters: int = N_MEL_FILTERS,
                   n_bins: int = FRAME_LEN // 2,
                   sample_rate: int = SAMPLE_RATE) -> np.ndarray:
    """Triangular mel filters spanning 0 Hz to Nyquist, one row per filter."""
    edges_hz = _mel_to_hz(np.linspace(0.0, _hz_to_mel(sample_rate / 2.0), n_filters + 2))
    bin_hz = np.arange(n_bins) * sample_rate / (2.0 * n_bins)
    bank = np.zeros((n_filters, n_bins))
    for m in range(n_filters):
        left, center, right = edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]
        rising = (bin_hz - left) / (center - left)
        falling = (right - bin_hz) / (right - center)
        bank[m] = np.clip(np.minimum(rising, falling), 0.0, None)
    return bank


_filterbank_cache: dict[tuple, np.ndarray] = {}


def _filterbank() -> np.ndarray:
    key = (N_MEL_FILTERS, FRAME_LEN // 2, SAMPLE_RATE)
    fb = _filterbank_cache.get(key)
    if fb is None:
        fb = mel_filterbank()
        _filterbank_cache[key] = fb
    return fb


def mfcc(spec: np.ndarray) -> np.ndarray:
    """First 13 mel-frequency cepstral coefficients of a 512-bin spectrum.

    26 triangular mel filters over squared magnitudes, natural log with
    a 1e-10 floor, orthonormal DCT-II.
    """
    energies = _filterbank() @ (np.asarray(spec, dtype=np.float64) ** 2)
    log_e = np.log(np.maximum(energies, LOG_FLOOR))
    return dct(log_e, type=2, norm="ortho")[:N_MFCC]


def lpc(frame: np.ndarray, order: int = N_LPC) -> np.ndarray:
    """Order-9 linear-prediction coefficients of a windowed frame.

    Autocorrelation method solved by Levinson-Durbin; the result a
    satisfies x[t] ~ sum_k a[k] * x[t-k]. An (effectively) silent frame
    yields all zeros.
    """
    x = np.asarray(frame, dtype=np.float64)
    r = np.array([np.dot(x[: x.size - k], x[k:]) for k in range(order + 1)])
    if r[0] <= 1e-20:
        return np.zeros(order)

    # Levinson-Durbin recursion on the Toeplitz normal equations R a = r.
    a = np.zeros(order)
    err = r[0]
    for i in range(order):
        k = (r[i + 1] - np.dot(a[:i], r[i:0:-1])) / err
        a[:i] = a[:i] - k * a[:i][::-1]
        a[i] = k
        err *= 1.0 - k * k
        if err <= 1e-20:
            break
    return a


def window_features(frame: Frame, prev_spec: np.ndarray,
                    flux_history: deque) -> tuple[np.ndarray, np.ndarray]:
    """27 scalars for one frame; returns (features, spectrum).

    `prev_spec` is the previous window's spectrum (all zeros for the
    first window of a segment); `flux_history` is mutated in place.
    """
    windowed = frame.samples * hann_window(FRAME_LEN)
    spec = fft_magnitude(windowed)
    flux = spectral_flux(spec, prev_spec)
    flux_history.append(flux)
    feats = np.concatenate([
        [
            spectral_rolloff(spec),
            flux,
            flux_std(flux_history),
            compactness(spec),
            spectral_variability(spec),
        ],
        mfcc(spec),
        lpc(windowed),
    ])
    return feats, spec


def extract_segment_features(frames: Sequence[Frame]) -> np.ndarray:
    """Aggregate per-window features into the 54-value segment vector."""
    if not frames:
        raise ValueError("segment must contain at least one frame")
    rows = np.empty((len(frames), N_WINDOW_FEATURES))
    prev_spec = np.zeros(FRAME_LEN // 2)
    history: deque = deque(maxlen=FLUX_HISTORY)
    for i, frame in enumerate(frames):
        rows[i], prev_spec = window_features(frame, prev_spec, history)
    return np.concatenate([rows.mean(axis=0), rows.std(axis=0)])
