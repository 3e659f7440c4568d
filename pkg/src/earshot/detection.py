"""Frame admission control and segmentation of admitted audio.

A frame is admitted when its RMS amplitude reaches the minimum
threshold OR its normalized spectral entropy falls below the maximum:
loud sounds pass on amplitude alone, quiet but structured sounds pass
on entropy, and quiet noise is rejected. Admitted runs of frames are
closed into segments of 0.4 to 2.7 seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .audio_io import FRAME_LEN, FRAME_SECONDS, Frame
from .dsp import fft_magnitude, hann_window


@dataclass(frozen=True)
class AdmissionConfig:
    rms_min: float = 0.01               # ~ -40 dBFS
    entropy_max_norm: float = 0.75      # H / ln(n_bins)
    hangover_frames: int = 14           # ~300 ms of rejects closes a segment
    min_len_s: float = 0.4
    max_len_s: float = 2.7

    def __post_init__(self):
        if not 0.0 < self.rms_min < 1.0:
            raise ValueError("rms_min must be in (0, 1)")
        if not 0.0 < self.entropy_max_norm <= 1.0:
            raise ValueError("entropy_max_norm must be in (0, 1]")
        if self.hangover_frames < 1:
            raise ValueError("hangover_frames must be >= 1")
        if not self.min_len_s < self.max_len_s:
            raise ValueError("min_len_s must be below max_len_s")

    @property
    def min_frames(self) -> int:
        return math.ceil(self.min_len_s / FRAME_SECONDS)

    @property
    def max_frames(self) -> int:
        return int(self.max_len_s / FRAME_SECONDS)


@dataclass(frozen=True)
class AdmissionDecision:
    admitted: bool
    reason: Optional[str] = None  # "amplitude" | "structure" when admitted

    def __bool__(self):
        return self.admitted


@dataclass(frozen=True)
class SegmentEvent:
    """An admitted audio segment, including interior hangover frames."""

    frames: tuple[Frame, ...]
    start_time: float
    end_time: float
    end_reason: str  # "silence" | "max_length" | "user_stop"

    @property
    def duration(self) -> float:
        return self.end_time - self.start_time


def rms(frame: Frame) -> float:
    """Root mean square amplitude of the frame."""
    return float(np.sqrt(np.mean(frame.samples ** 2)))


def spectral_entropy(spec: np.ndarray) -> float:
    """Shannon entropy (nats) of the spectrum as a probability distribution.

    An all-zero spectrum carries no structure and is assigned the
    maximum ln(n), so digital silence is never admitted via entropy.
    """
    spec = np.asarray(spec, dtype=np.float64)
    total = spec.sum()
    if total == 0.0:
        return math.log(spec.size)
    p = spec / total
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def admit_frame(frame: Frame, cfg: AdmissionConfig) -> AdmissionDecision:
    """Decide admission; amplitude takes precedence when both tests pass."""
    if rms(frame) >= cfg.rms_min:
        return AdmissionDecision(True, "amplitude")
    spec = fft_magnitude(frame.samples * hann_window(FRAME_LEN))
    if spectral_entropy(spec) / math.log(spec.size) <= cfg.entropy_max_norm:
        return AdmissionDecision(True, "structure")
    return AdmissionDecision(False)


class Segmenter:
    """State machine turning an admitted-frame stream into SegmentEvents.

    A segment opens at the first admitted frame and closes after
    `hangover_frames` consecutive rejections (trailing rejects trimmed),
    at the maximum length (long sounds are split, not discarded), or on
    an external stop signal. Segments shorter than the minimum after
    trimming are discarded silently.
    """

    def __init__(self, cfg: AdmissionConfig = AdmissionConfig(),
                 on_state: Optional[Callable[[str], None]] = None):
        self.cfg = cfg
        self.on_state = on_state
        self._open: list[Frame] = []
        self._rejects = 0

    @property
    def active(self) -> bool:
        """True while a segment is open (signal being recorded/recognized)."""
        return bool(self._open)

    def _set_state(self, state: str):
        if self.on_state is not None:
            self.on_state(state)

    def _close(self, reason: str, trim: int = 0) -> Optional[SegmentEvent]:
        frames = self._open[: len(self._open) - trim] if trim else self._open
        self._open = []
        self._rejects = 0
        self._set_state("monitor")
        if len(frames) < self.cfg.min_frames:
            return None
        return SegmentEvent(
            frames=tuple(frames),
            start_time=frames[0].start_time,
            end_time=frames[-1].start_time + FRAME_SECONDS,
            end_reason=reason,
        )

    def push(self, frame: Frame) -> Optional[SegmentEvent]:
        """Feed one frame; returns a SegmentEvent when one closes."""
        decision = admit_frame(frame, self.cfg)
        if not self._open:
            if decision:
                self._open = [frame]
                self._rejects = 0
                self._set_state("active")
            return None

        self._open.append(frame)
        self._rejects = 0 if decision else self._rejects + 1
        if self._rejects >= self.cfg.hangover_frames:
            return self._close("silence", trim=self._rejects)
        if len(self._open) >= self.cfg.max_frames:
            return self._close("max_length")
        return None

    def flush(self, reason: str = "silence") -> Optional[SegmentEvent]:
        """Close any open segment at stream end or on user stop."""
        if not self._open:
            return None
        return self._close(reason, trim=self._rejects)


def segment(frames: Iterable[Frame], cfg: AdmissionConfig = AdmissionConfig(),
            user_stop: Optional[Callable[[], bool]] = None) -> Iterator[SegmentEvent]:
    """Run the segmenter over a frame stream, yielding emitted segments."""
    seg = Segmenter(cfg)
    for frame in frames:
        if user_stop is not None and user_stop():
            event = seg.flush("user_stop")
            if event is not None:
                yield event
            return
        event = seg.push(frame)
        if event is not None:
            yield event
    event = seg.flush()
    if event is not None:
        yield event
