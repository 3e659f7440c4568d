"""Local streaming service: REST endpoints plus a WebSocket event feed.

All processing stays on this machine; the server binds loopback unless
explicitly told otherwise. The web UI is a pure client of this API.

Event wire format (JSON, one message per event):
    {"seq": n, "kind": "...", "payload": {...}}
kinds: spectrogram_column (values quantized to 8-bit), detection_state,
recognition_result, delay_warning, pending_label_request.
"""

from __future__ import annotations

import base64
import queue
import threading
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import Body, FastAPI, Response, WebSocket, WebSocketDisconnect
from starlette.concurrency import run_in_threadpool

from . import audio_io
from .errors import (ConflictError, EarshotError, FormatError, NotFoundError,
                     RecognitionError, UnsupportedFormatError, ValidationError)
from .kb import IMPORTANCE_LEVELS, KnowledgeBase
from .pipeline import (ColumnEvent, DelayWarningEvent, DetectionStateEvent, Engine,
                       PendingLabelEvent, RecognitionResult, RecordingOutcome)

EVENT_QUEUE_LIMIT = 256  # columns beyond this are dropped per connection


def event_payload(event) -> dict:
    if isinstance(event, ColumnEvent):
        quantized = np.clip(np.round(event.column.values * 255), 0, 255).astype(np.uint8)
        return {
            "kind": "spectrogram_column",
            "payload": {
                "timestamp": event.column.timestamp,
                "state": event.column.state,
                "values_b64": base64.b64encode(quantized.tobytes()).decode("ascii"),
            },
        }
    if isinstance(event, DetectionStateEvent):
        return {"kind": "detection_state",
                "payload": {"state": event.state, "timestamp": event.timestamp}}
    if isinstance(event, RecognitionResult):
        return {"kind": "recognition_result", "payload": result_json(event)}
    if isinstance(event, DelayWarningEvent):
        return {"kind": "delay_warning",
                "payload": {"lag_s": event.lag_s, "timestamp": event.timestamp}}
    if isinstance(event, PendingLabelEvent):
        return {"kind": "pending_label_request",
                "payload": {"timestamp": event.timestamp, "duration": event.duration}}
    raise TypeError(f"unknown event {event!r}")


def result_json(result: RecognitionResult) -> dict:
    return {
        "timestamp": result.timestamp,
        "class_name": result.class_name,
        "posterior": result.posterior,
        "g": result.gpi.g,
        "level": result.level,
        "importance": result.importance,
        "display_state": result.display_state,
    }


class SessionRunner:
    """Owns the single active audio session and fans events out to clients.

    Audio reaches a running session through an ingest queue, so tests
    and the UI demo can feed fixture WAVs over HTTP.
    """

    def __init__(self, engine: Engine):
        self.engine = engine
        self.lock = threading.Lock()
        self.thread: Optional[threading.Thread] = None
        self.ingest: "queue.Queue" = queue.Queue()
        self.stop_flag = threading.Event()
        self.pending: Optional[RecordingOutcome] = None
        self.last_result: Optional[RecognitionResult] = None
        self.subscribers: list[dict] = []
        engine.subscribe(self._broadcast)

    # -- event fan-out -------------------------------------------------

    def attach(self) -> dict:
        sub = {"queue": queue.Queue(), "seq": 0, "lock": threading.Lock()}
        self.subscribers.append(sub)
        return sub

    def detach(self, sub: dict):
        if sub in self.subscribers:
            self.subscribers.remove(sub)

    def _broadcast(self, event):
        message = event_payload(event)
        droppable = message["kind"] == "spectrogram_column"
        for sub in list(self.subscribers):
            with sub["lock"]:
                if droppable and sub["queue"].qsize() >= EVENT_QUEUE_LIMIT:
                    continue  # slow consumer: columns are droppable
                sub["seq"] += 1
                sub["queue"].put({"seq": sub["seq"], **message})

    # -- session control -------------------------------------------------

    def _chunk_source(self):
        while True:
            chunk = self.ingest.get()
            if chunk is None:
                return
            yield chunk

    def busy(self) -> bool:
        return self.thread is not None and self.thread.is_alive()

    def start(self, target):
        with self.lock:
            if self.busy():
                raise ConflictError("another audio session is active")
            self.stop_flag.clear()
            self.ingest = queue.Queue()
            self.thread = threading.Thread(target=target, daemon=True)
            self.thread.start()

    def start_recording(self, timeout_s: float = 30.0):
        def run():
            self.pending = self.engine.run_recording(
                self._chunk_source(), stop=self.stop_flag.is_set, timeout_s=timeout_s)
        self.start(run)

    def start_auto(self, environment: Optional[str] = None):
        def run():
            for _ in self.engine.run_auto_recognition(
                    self._chunk_source(), stop=self.stop_flag.is_set,
                    environment=environment):
                pass  # results travel via events/history
        self.start(run)

    def start_manual(self, environment: Optional[str] = None, timeout_s: float = 30.0):
        def run():
            try:
                self.last_result = self.engine.run_manual_recognition(
                    self._chunk_source(), environment=environment,
                    stop=self.stop_flag.is_set, timeout_s=timeout_s)
            except RecognitionError:
                self.last_result = None
        self.start(run)

    def feed_wav(self, data: bytes):
        buf = audio_io.decode_wav(data)
        step = 8 * audio_io.FRAME_LEN
        for i in range(0, len(buf), step):
            chunk = buf.samples[i:i + step]
            if chunk.size:
                self.ingest.put(audio_io.SampleBuffer(chunk))

    def stop(self, join_timeout: float = 30.0):
        self.stop_flag.set()
        self.ingest.put(None)
        if self.thread is not None:
            self.thread.join(timeout=join_timeout)

    def end_of_audio(self, join_timeout: float = 30.0):
        """Close the ingest stream without raising the user-stop flag."""
        self.ingest.put(None)
        if self.thread is not None:
            self.thread.join(timeout=join_timeout)


def create_app(kb: KnowledgeBase, kb_path=None, columns_per_second: int = 23) -> FastAPI:
    app = FastAPI(title="earshot", version="0.1.0")
    engine = Engine(kb, columns_per_second=columns_per_second)
    runner = SessionRunner(engine)
    app.state.engine = engine
    app.state.runner = runner

    def persist():
        if kb_path is not None:
            kb.save(Path(kb_path))

    @app.exception_handler(EarshotError)
    async def domain_error(request, exc: EarshotError):
        status = 404 if isinstance(exc, NotFoundError) else \
                 409 if isinstance(exc, ConflictError) else 400
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=status,
                            content={"error": type(exc).__name__, "detail": str(exc)})

    # -- knowledge base -------------------------------------------------

    def class_json(name: str) -> dict:
        cls = kb.classes[name]
        return {
            "name": cls.name,
            "importance": cls.importance,
            "excluded": cls.excluded,
            "records": [
                {"id": r.id, "environment": r.environment,
                 "created_at": r.created_at, "has_audio": kb.audio_of(r.id) is not None}
                for r in kb.records_of(name)
            ],
        }

    @app.get("/api/sounds")
    def list_sounds():
        return [class_json(name) for name in sorted(kb.classes)]

    @app.post("/api/sounds", status_code=201)
    def create_sound(body: dict = Body(...)):
        name = body.get("name", "")
        if not name:
            raise ValidationError("class name must be non-empty")
        if name in kb.classes:
            raise ConflictError(f"class {name!r} already exists")
        importance = body.get("importance", "usual")
        if importance not in IMPORTANCE_LEVELS:
            raise ValidationError(f"importance must be one of {IMPORTANCE_LEVELS}")
        from .kb import SoundClass
        kb.classes[name] = SoundClass(name, importance)
        kb.revision += 1
        persist()
        return class_json(name)

    @app.patch("/api/sounds/{name}")
    def update_sound(name: str, body: dict = Body(...)):
        kb.update_class(name, importance=body.get("importance"),
                        excluded=body.get("excluded"), new_name=body.get("new_name"))
        persist()
        return class_json(body.get("new_name") or name)

    @app.delete("/api/sounds/{name}", status_code=204)
    def delete_sound(name: str):
        kb.delete_class(name)
        persist()

    @app.delete("/api/records/{record_id}", status_code=204)
    def delete_record(record_id: str):
        kb.delete_record(record_id)
        persist()

    @app.get("/api/records/{record_id}/audio")
    def record_audio(record_id: str):
        if record_id not in kb.records:
            raise NotFoundError(f"unknown record {record_id!r}")
        buf = kb.audio_of(record_id)
        if buf is None:
            raise NotFoundError(f"record {record_id!r} kept no audio payload")
        return Response(content=audio_io.encode_wav(buf), media_type="audio/wav")

    @app.get("/api/environments")
    def environments():
        groups = kb.list_by_environment()
        return {
            "environments": kb.environments(),
            "groups": {env: [r.id for r in records] for env, records in groups.items()},
        }

    @app.patch("/api/environments/{label}")
    def rename_environment(label: str, body: dict = Body(...)):
        kb.rename_environment(label, body.get("new_name"))
        persist()
        return {"environments": kb.environments()}

    @app.delete("/api/environments/{label}", status_code=204)
    def delete_environment(label: str):
        kb.rename_environment(label, None)
        persist()

    # -- sessions ---------------------------------------------------------

    @app.post("/api/session/record/start")
    def record_start(body: dict = Body(default={})):
        runner.pending = None
        runner.start_recording(timeout_s=float(body.get("timeout_s", 30.0)))
        return {"mode": "recording"}

    @app.post("/api/session/record/label")
    def record_label(body: dict = Body(...)):
        outcome = runner.pending
        if outcome is None or outcome.status != "captured":
            raise NotFoundError("no captured segment awaiting a label")
        record_id = kb.add_record(body["class_name"], outcome.features,
                                  environment=body.get("environment"),
                                  audio=outcome.audio)
        runner.pending = None
        persist()
        return {"record_id": record_id}

    @app.post("/api/session/record/cancel", status_code=204)
    def record_cancel():
        runner.pending = None

    @app.post("/api/recognize/manual")
    def manual_recognize(environment: Optional[str] = None, body: bytes = Body(default=b"")):
        """One-shot manual recognition of a posted WAV payload."""
        if runner.busy():
            raise ConflictError("another audio session is active")
        buf = audio_io.decode_wav(body)
        result = engine.run_manual_recognition(iter([buf]), environment=environment)
        return result_json(result)

    @app.post("/api/session/auto/start")
    def auto_start(body: dict = Body(default={})):
        runner.start_auto(environment=body.get("environment"))
        return {"mode": "auto_recognition"}

    @app.post("/api/session/manual/start")
    def manual_start(body: dict = Body(default={})):
        runner.last_result = None
        runner.start_manual(environment=body.get("environment"),
                            timeout_s=float(body.get("timeout_s", 30.0)))
        return {"mode": "manual_recognition"}

    @app.post("/api/session/stop")
    def session_stop():
        runner.stop()
        return {"mode": engine.mode}

    @app.post("/api/session/end-of-audio")
    def session_end_of_audio():
        """Finish the ingest stream (fixture replay ran out of audio)."""
        runner.end_of_audio()
        return {"mode": engine.mode}

    @app.post("/api/ingest", status_code=202)
    def ingest(body: bytes = Body(...)):
        if not runner.busy():
            raise ValidationError("no active session to feed")
        runner.feed_wav(body)
        return {"queued": True}

    @app.get("/api/session")
    def session_state():
        return {
            "mode": engine.mode,
            "pending_label": runner.pending is not None
                             and runner.pending.status == "captured",
            "last_result": result_json(runner.last_result) if runner.last_result else None,
            "kb_revision": kb.revision,
        }

    @app.get("/api/history")
    def history():
        return [result_json(r) for r in engine.history.snapshot()]

    # -- event stream -------------------------------------------------------

    @app.websocket("/ws/events")
    async def events(ws: WebSocket):
        await ws.accept()
        sub = runner.attach()
        try:
            while True:
                try:
                    message = await run_in_threadpool(sub["queue"].get, True, 0.5)
                except queue.Empty:
                    # Also drain pings from the client to notice disconnects.
                    continue
                await ws.send_json(message)
        except WebSocketDisconnect:
            pass
        finally:
            runner.detach(sub)

    return app
