"""Windowing, FFT magnitude spectra and display spectrogram columns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LOG_FLOOR = 1e-10
DISPLAY_FFT = 2048
DISPLAY_RANGE_DB = 80.0

_window_cache: dict[int, np.ndarray] = {}


def hann_window(n: int) -> np.ndarray:
    """Periodic Hann window: w[k] = 0.5 * (1 - cos(2*pi*k/n))."""
    if n < 2:
        raise ValueError("window length must be >= 2")
    w = _window_cache.get(n)
    if w is None:
        k = np.arange(n)
        w = 0.5 * (1.0 - np.cos(2.0 * np.pi * k / n))
        w.setflags(write=False)
        _window_cache[n] = w
    return w


def fft_magnitude(frame: np.ndarray) -> np.ndarray:
    """Magnitudes of the first n/2 DFT bins of a power-of-two frame."""
    frame = np.asarray(frame, dtype=np.float64)
    n = frame.size
    if n < 2 or n & (n - 1):
        raise ValueError(f"frame length must be a power of two, got {n}")
    return np.abs(np.fft.rfft(frame)[: n // 2])


@dataclass(frozen=True)
class SpectrogramColumn:
    """One display column: 1024 values in [0, 1] plus capture state."""

    values: np.ndarray
    timestamp: float
    state: str  # "monitor" while only capturing, "active" inside a segment

    def __post_init__(self):
        if self.state not in ("monitor", "active"):
            raise ValueError(f"unknown state {self.state!r}")
        if self.values.size != DISPLAY_FFT // 2:
            raise ValueError("column must hold 1024 values")


def spectrogram_column(frame: np.ndarray, state: str, timestamp: float = 0.0) -> SpectrogramColumn:
    """Log-compress a 2048-sample frame into a normalized display column.

    v = clamp((20*log10(m + eps) + 80) / 80, 0, 1), so digital silence
    maps to 0 and an 80 dB range is spread over [0, 1].
    """
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size != DISPLAY_FFT:
        raise ValueError(f"display frames hold {DISPLAY_FFT} samples, got {frame.size}")
    mags = fft_magnitude(frame)
    db = 20.0 * np.log10(mags + LOG_FLOOR)
    values = np.clip((db + DISPLAY_RANGE_DB) / DISPLAY_RANGE_DB, 0.0, 1.0)
    return SpectrogramColumn(values, timestamp, state)
