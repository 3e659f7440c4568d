"""Orchestration of the record / manual-recognition / auto-recognition flows.

The engine consumes a chunk source (file replay, ingest queue, mic),
runs admission + segmentation on the real-time path, and hands closed
segments to feature extraction + classification off that path. Typed
events (spectrogram columns, detection state, results, delay warnings,
label requests) are fanned out to subscribed listeners; the gateway
forwards them to clients.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from . import audio_io, classify as clf
from .audio_io import FRAME_LEN, FRAME_SECONDS, Frame, SampleBuffer
from .confidence import GpiResult, gpi
from .detection import AdmissionConfig, SegmentEvent, Segmenter
from .dsp import SpectrogramColumn, spectrogram_column
from .errors import RecognitionError
from .features import extract_segment_features
from .kb import KnowledgeBase

HISTORY_CAPACITY = 500
COLUMN_RATES = {23: 1, 12: 2, 8: 3}  # columns/s -> decimation of ~23.4/s native
DELAY_WARNING_S = 0.25


# -- events ----------------------------------------------------------------

@dataclass(frozen=True)
class ColumnEvent:
    kind = "spectrogram_column"
    column: SpectrogramColumn


@dataclass(frozen=True)
class DetectionStateEvent:
    kind = "detection_state"
    state: str  # "monitor" | "active"
    timestamp: float


@dataclass(frozen=True)
class RecognitionResult:
    kind = "recognition_result"
    timestamp: float
    class_name: str
    posterior: float
    gpi: GpiResult
    level: int
    importance: str
    display_state: str  # "shown" | "suppressed"


@dataclass(frozen=True)
class DelayWarningEvent:
    kind = "delay_warning"
    lag_s: float
    timestamp: float


@dataclass(frozen=True)
class PendingLabelEvent:
    kind = "pending_label_request"
    timestamp: float
    duration: float


@dataclass
class RecordingOutcome:
    status: str  # "captured" | "timeout" | "discarded"
    segment: Optional[SegmentEvent] = None
    features: Optional[np.ndarray] = None
    audio: Optional[SampleBuffer] = None


class History:
    """Bounded chronological log of recognition results."""

    def __init__(self, capacity: int = HISTORY_CAPACITY):
        self._items: deque = deque(maxlen=capacity)
        self._lock = threading.Lock()

    def append(self, result: RecognitionResult):
        with self._lock:
            self._items.append(result)

    def snapshot(self) -> list[RecognitionResult]:
        with self._lock:
            return list(self._items)

    def __len__(self):
        return len(self._items)


def segment_audio(segment: SegmentEvent) -> SampleBuffer:
    return SampleBuffer(np.concatenate([f.samples for f in segment.frames]))


class Engine:
    """Single-session engine over one knowledge base."""

    def __init__(self, kb: KnowledgeBase, cfg: AdmissionConfig = AdmissionConfig(),
                 history_capacity: int = HISTORY_CAPACITY, columns_per_second: int = 23,
                 clock: Callable[[], float] = time.monotonic):
        if columns_per_second not in COLUMN_RATES:
            raise ValueError(f"columns_per_second must be one of {sorted(COLUMN_RATES)}")
        self.kb = kb
        self.cfg = cfg
        self.history = History(history_capacity)
        self.columns_per_second = columns_per_second
        self.clock = clock
        self.mode = "idle"
        self._listeners: list[Callable] = []
        self._models: dict[Optional[str], clf.NaiveBayesModel] = {}
        self._model_lock = threading.Lock()

    # -- events ------------------------------------------------------------

    def subscribe(self, listener: Callable) -> Callable:
        self._listeners.append(listener)
        return listener

    def unsubscribe(self, listener: Callable):
        if listener in self._listeners:
            self._listeners.remove(listener)

    def _emit(self, event):
        for listener in list(self._listeners):
            listener(event)

    # -- training ----------------------------------------------------------

    def ensure_trained(self, environment: Optional[str] = None) -> clf.NaiveBayesModel:
        """Return the cached model, rebuilding only when the KB moved on.

        The swap is atomic: callers holding the previous model keep
        classifying against it.
        """
        with self._model_lock:
            model = self._models.get(environment)
            if model is None or model.trained_revision != self.kb.revision:
                model = clf.train_naive_bayes(self.kb, environment)
                self._models[environment] = model
            return model

    # -- recognition core --------------------------------------------------

    def recognize_vector(self, v: np.ndarray, environment: Optional[str] = None,
                         timestamp: float = 0.0) -> RecognitionResult:
        model = self.ensure_trained(environment)
        ranked = clf.classify(model, v)
        class_name, posterior = ranked[0]
        records = [r for r in self.kb.training_view(environment)[0]
                   if r.class_name == class_name]
        points = np.stack([r.features for r in records])
        result_gpi = gpi(v, points, class_name)
        importance = self.kb.classes[class_name].importance
        return RecognitionResult(
            timestamp=timestamp,
            class_name=class_name,
            posterior=posterior,
            gpi=result_gpi,
            level=result_gpi.level,
            importance=importance,
            display_state="suppressed" if importance == "ignore" else "shown",
        )

    # -- frame plumbing ----------------------------------------------------

    def _frames_with_display(self, source: Iterable[SampleBuffer],
                             segmenter: Segmenter) -> Iterator[Frame]:
        """Pass frames through while emitting spectrogram columns.

        Columns come from 2048-sample pairs of consecutive frames,
        decimated to the configured rate. A delay warning fires when
        column production lags the wall clock by more than 250 ms.
        """
        decim = COLUMN_RATES[self.columns_per_second]
        prev: Optional[Frame] = None
        produced = 0
        started = self.clock()
        lagging = False
        for frame in audio_io.frames_from_chunks(source):
            yield frame
            if prev is not None and frame.index % 2 == 1:
                pair_index = frame.index // 2
                if pair_index % decim == 0:
                    state = "active" if segmenter.active else "monitor"
                    ts = frame.start_time + FRAME_SECONDS
                    column = spectrogram_column(
                        np.concatenate([prev.samples, frame.samples]), state, ts)
                    self._emit(ColumnEvent(column))
                    lag = (self.clock() - started) - ts
                    if lag > DELAY_WARNING_S and not lagging:
                        lagging = True
                        self._emit(DelayWarningEvent(lag_s=lag, timestamp=ts))
                    elif lag <= DELAY_WARNING_S:
                        lagging = False
                    produced += 1
            prev = frame

    def _segments(self, source: Iterable[SampleBuffer],
                  stop: Optional[Callable[[], bool]] = None,
                  timeout_s: Optional[float] = None) -> Iterator[SegmentEvent]:
        """Segment a chunk source, emitting state-change events."""
        last_state = "monitor"

        def on_state(state: str):
            nonlocal last_state
            last_state = state

        segmenter = Segmenter(self.cfg, on_state=on_state)
        for frame in self._frames_with_display(source, segmenter):
            if stop is not None and stop():
                event = segmenter.flush("user_stop")
                if event is not None:
                    yield event
                return
            before = last_state
            event = segmenter.push(frame)
            if last_state != before:
                self._emit(DetectionStateEvent(last_state, frame.start_time))
            if event is not None:
                yield event
            elif (timeout_s is not None and not segmenter.active
                  and frame.start_time + FRAME_SECONDS >= timeout_s):
                return
        event = segmenter.flush()
        if event is not None:
            yield event

    # -- user-facing flows -------------------------------------------------

    def run_recording(self, source: Iterable[SampleBuffer],
                      stop: Optional[Callable[[], bool]] = None,
                      timeout_s: float = 30.0) -> RecordingOutcome:
        """Capture the first detected segment and extract its features.

        The caller labels the outcome via KnowledgeBase.add_record. The
        timeout is measured in audio time so replayed fixtures behave
        identically to live capture.
        """
        self.mode = "recording"
        try:
            for segment in self._segments(source, stop=stop, timeout_s=timeout_s):
                features = extract_segment_features(segment.frames)
                self._emit(PendingLabelEvent(timestamp=segment.start_time,
                                             duration=segment.duration))
                return RecordingOutcome("captured", segment, features,
                                        segment_audio(segment))
            if stop is not None and stop():
                return RecordingOutcome("discarded")
            return RecordingOutcome("timeout")
        finally:
            self.mode = "idle"

    def run_manual_recognition(self, source: Iterable[SampleBuffer],
                               environment: Optional[str] = None,
                               stop: Optional[Callable[[], bool]] = None,
                               timeout_s: float = 30.0) -> RecognitionResult:
        """Capture one segment, classify it and report class + confidence."""
        if not self.kb.records:
            raise RecognitionError("knowledge base holds no records")
        self.ensure_trained(environment)  # surface training errors up front
        self.mode = "manual_recognition"
        try:
            for segment in self._segments(source, stop=stop, timeout_s=timeout_s):
                result = self.recognize_vector(
                    extract_segment_features(segment.frames),
                    environment, timestamp=segment.start_time)
                self.history.append(result)
                self._emit(result)
                return result
            raise RecognitionError("no sound detected before timeout")
        finally:
            self.mode = "idle"

    def run_auto_recognition(self, source: Iterable[SampleBuffer],
                             stop: Optional[Callable[[], bool]] = None,
                             environment: Optional[str] = None,
                             max_workers: int = 2) -> Iterator[RecognitionResult]:
        """Continuously recognize detected segments.

        Per-segment work runs on a small pool off the capture path;
        results are still yielded in segment-start order. Suppressed
        (ignore-importance) results reach the history but not the
        yielded stream. Per-segment failures are skipped, the stream
        continues.
        """
        if not self.kb.records:
            raise RecognitionError("knowledge base holds no records")
        self.ensure_trained(environment)
        self.mode = "auto_recognition"

        def process(segment: SegmentEvent) -> RecognitionResult:
            return self.recognize_vector(
                extract_segment_features(segment.frames),
                environment, timestamp=segment.start_time)

        try:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                pending: deque = deque()
                for segment in self._segments(source, stop=stop):
                    pending.append(pool.submit(process, segment))
                    # Drain completed work in submission (= start) order.
                    while pending and pending[0].done():
                        result = self._finish(pending.popleft())
                        if result is not None:
                            yield result
                while pending:
                    result = self._finish(pending.popleft())
                    if result is not None:
                        yield result
        finally:
            self.mode = "idle"

    def _finish(self, future) -> Optional[RecognitionResult]:
        try:
            result = future.result()
        except Exception:
            return None  # per-segment failure; the stream continues
        self.history.append(result)
        self._emit(result)
        return None if result.display_state == "suppressed" else result
