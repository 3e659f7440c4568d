"""Persistent, user-personalized collection of labeled sound records.

Storage layout: a directory holding a human-readable `manifest.json`
plus one sibling WAV file per record that kept its audio payload.
Feature values survive the round trip bit-exactly (JSON shortest
round-trip float encoding).
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import audio_io
from .errors import ConflictError, NotFoundError, SchemaError, ValidationError
from .features import VECTOR_DIM

IMPORTANCE_LEVELS = ("ignore", "usual", "important", "urgent")
NO_ENVIRONMENT = "(none)"
MIN_TRAINING_RECORDS = 2  # classes below this are trained but flagged


@dataclass
class SoundClass:
    name: str
    importance: str = "usual"
    excluded: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValidationError("class name must be non-empty")
        if self.importance not in IMPORTANCE_LEVELS:
            raise ValidationError(f"importance must be one of {IMPORTANCE_LEVELS}")


@dataclass
class SoundRecord:
    id: str
    class_name: str
    features: np.ndarray
    environment: Optional[str] = None
    created_at: float = 0.0
    audio_path: Optional[str] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.size != VECTOR_DIM:
            raise ValidationError(f"feature vector must have {VECTOR_DIM} values")


class KnowledgeBase:
    """Classes + records with a revision counter bumped on every mutation."""

    def __init__(self):
        self.classes: dict[str, SoundClass] = {}
        self.records: dict[str, SoundRecord] = {}
        self.revision = 0
        self._audio: dict[str, audio_io.SampleBuffer] = {}

    # -- mutations ---------------------------------------------------------

    def add_record(self, class_name: str, features, environment: Optional[str] = None,
                   audio: Optional[audio_io.SampleBuffer] = None) -> str:
        """Store a labeled record; the class is created on first use."""
        if not class_name:
            raise ValidationError("class name must be non-empty")
        if class_name not in self.classes:
            self.classes[class_name] = SoundClass(class_name)
        record = SoundRecord(
            id=uuid.uuid4().hex,
            class_name=class_name,
            features=features,
            environment=environment or None,
            created_at=time.time(),
        )
        self.records[record.id] = record
        if audio is not None:
            self._audio[record.id] = audio
        self.revision += 1
        return record.id

    def update_class(self, name: str, importance: Optional[str] = None,
                     excluded: Optional[bool] = None, new_name: Optional[str] = None):
        cls = self.classes.get(name)
        if cls is None:
            raise NotFoundError(f"unknown class {name!r}")
        if new_name is not None and new_name != name:
            if not new_name:
                raise ValidationError("class name must be non-empty")
            if new_name in self.classes:
                raise ConflictError(f"class {new_name!r} already exists")
            del self.classes[name]
            cls.name = new_name
            self.classes[new_name] = cls
            for record in self.records.values():
                if record.class_name == name:
                    record.class_name = new_name
        if importance is not None:
            if importance not in IMPORTANCE_LEVELS:
                raise ValidationError(f"importance must be one of {IMPORTANCE_LEVELS}")
            cls.importance = importance
        if excluded is not None:
            cls.excluded = excluded
        self.revision += 1

    def delete_class(self, name: str):
        """Remove a class and all of its records."""
        if name not in self.classes:
            raise NotFoundError(f"unknown class {name!r}")
        del self.classes[name]
        for rid in [r.id for r in self.records.values() if r.class_name == name]:
            del self.records[rid]
            self._audio.pop(rid, None)
        self.revision += 1

    def delete_record(self, record_id: str):
        """Remove one record; its class stays even when left empty."""
        if record_id not in self.records:
            raise NotFoundError(f"unknown record {record_id!r}")
        del self.records[record_id]
        self._audio.pop(record_id, None)
        self.revision += 1

    def rename_environment(self, old: str, new: Optional[str]):
        """Relabel (or clear, when new is None) an environment on all records."""
        hit = False
        for record in self.records.values():
            if record.environment == old:
                record.environment = new or None
                hit = True
        if not hit:
            raise NotFoundError(f"unknown environment {old!r}")
        self.revision += 1

    # -- queries -----------------------------------------------------------

    def records_of(self, class_name: str) -> list[SoundRecord]:
        return sorted((r for r in self.records.values() if r.class_name == class_name),
                      key=lambda r: r.created_at)

    def environments(self) -> list[str]:
        return sorted({r.environment for r in self.records.values() if r.environment})

    def list_by_environment(self) -> dict[str, list[SoundRecord]]:
        """Group records by environment; unlabeled ones land under "(none)"."""
        groups: dict[str, list[SoundRecord]] = {}
        for record in sorted(self.records.values(), key=lambda r: r.created_at):
            groups.setdefault(record.environment or NO_ENVIRONMENT, []).append(record)
        return groups

    def audio_of(self, record_id: str) -> Optional[audio_io.SampleBuffer]:
        return self._audio.get(record_id)

    def training_view(self, environment: Optional[str] = None):
        """(records, flagged_classes) eligible for training.

        Excluded classes are omitted. With an environment filter, only
        records of that environment plus unlabeled records remain.
        Classes with fewer than MIN_TRAINING_RECORDS records are still
        trained but reported in the flagged list.
        """
        records = []
        counts: dict[str, int] = {}
        for record in sorted(self.records.values(), key=lambda r: r.created_at):
            cls = self.classes[record.class_name]
            if cls.excluded:
                continue
            if environment is not None and record.environment not in (None, environment):
                continue
            records.append(record)
            counts[record.class_name] = counts.get(record.class_name, 0) + 1
        flagged = sorted(n for n, c in counts.items() if c < MIN_TRAINING_RECORDS)
        return records, flagged

    # -- persistence -------------------------------------------------------

    def save(self, path):
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        audio_dir = path / "audio"
        manifest = {
            "format": "earshot-kb/1",
            "revision": self.revision,
            "classes": [
                {"name": c.name, "importance": c.importance, "excluded": c.excluded}
                for c in sorted(self.classes.values(), key=lambda c: c.name)
            ],
            "records": [],
        }
        for record in sorted(self.records.values(), key=lambda r: (r.created_at, r.id)):
            entry = {
                "id": record.id,
                "class": record.class_name,
                "environment": record.environment,
                "created_at": record.created_at,
                "features": [float(v) for v in record.features],
                "audio": None,
            }
            buf = self._audio.get(record.id)
            if buf is not None:
                audio_dir.mkdir(exist_ok=True)
                wav_name = f"audio/{record.id}.wav"
                (path / wav_name).write_bytes(audio_io.encode_wav(buf))
                entry["audio"] = wav_name
            manifest["records"].append(entry)
        (path / "manifest.json").write_text(json.dumps(manifest, indent=2))

    @classmethod
    def load(cls, path) -> "KnowledgeBase":
        path = Path(path)
        manifest_path = path / "manifest.json"
        if not manifest_path.exists():
            raise SchemaError(str(manifest_path), "manifest not found")
        try:
            manifest = json.loads(manifest_path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError("manifest.json", f"invalid JSON: {exc}") from exc
        if not isinstance(manifest, dict) or manifest.get("format") != "earshot-kb/1":
            raise SchemaError("format", "expected 'earshot-kb/1'")

        kb = cls()
        for i, c in enumerate(manifest.get("classes", [])):
            try:
                kb.classes[c["name"]] = SoundClass(c["name"], c["importance"], bool(c["excluded"]))
            except (KeyError, TypeError, ValidationError) as exc:
                raise SchemaError(f"classes[{i}]", str(exc)) from exc
        for i, r in enumerate(manifest.get("records", [])):
            try:
                record = SoundRecord(
                    id=r["id"],
                    class_name=r["class"],
                    features=np.array(r["features"], dtype=np.float64),
                    environment=r.get("environment"),
                    created_at=r["created_at"],
                    audio_path=r.get("audio"),
                )
            except (KeyError, TypeError, ValidationError) as exc:
                raise SchemaError(f"records[{i}]", str(exc)) from exc
            if record.class_name not in kb.classes:
                raise SchemaError(f"records[{i}].class", f"unknown class {record.class_name!r}")
            kb.records[record.id] = record
            if record.audio_path:
                wav_path = path / record.audio_path
                if not wav_path.exists():
                    raise SchemaError(f"records[{i}].audio", f"missing file {record.audio_path}")
                kb._audio[record.id] = audio_io.decode_wav(wav_path.read_bytes())
        kb.revision = int(manifest.get("revision", 0))
        return kb

    def structurally_equal(self, other: "KnowledgeBase") -> bool:
        if set(self.classes) != set(other.classes):
            return False
        for name, cls in self.classes.items():
            o = other.classes[name]
            if (cls.importance, cls.excluded) != (o.importance, o.excluded):
                return False
        if set(self.records) != set(other.records):
            return False
        for rid, record in self.records.items():
            o = other.records[rid]
            if record.class_name != o.class_name or record.environment != o.environment:
                return False
            if not np.array_equal(record.features, o.features):
                return False
        return True
