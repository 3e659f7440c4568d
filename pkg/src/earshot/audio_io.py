"""WAV decode/encode and framing of audio into fixed-size analysis frames.

Only the capture configuration used throughout the engine is accepted:
PCM 16-bit, mono, 48 kHz. Samples are held as float64 in [-1, 1].
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import FormatError, UnsupportedFormatError

SAMPLE_RATE = 48_000
FRAME_LEN = 1024
FRAME_SECONDS = FRAME_LEN / SAMPLE_RATE
_SCALE = 32768.0


@dataclass(frozen=True)
class SampleBuffer:
    """Immutable mono audio at the fixed capture configuration."""

    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE
    channels: int = 1
    bit_depth_origin: int = 16

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        self.samples.setflags(write=False)
        if self.sample_rate != SAMPLE_RATE:
            raise UnsupportedFormatError("sample_rate", SAMPLE_RATE, self.sample_rate)
        if self.channels != 1:
            raise UnsupportedFormatError("channels", 1, self.channels)
        if self.samples.size and (np.max(self.samples) > 1.0 or np.min(self.samples) < -1.0):
            raise ValueError("samples outside [-1, 1]")

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class Frame:
    """One non-overlapping 1024-sample analysis frame."""

    samples: np.ndarray
    index: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.samples.size != FRAME_LEN:
            raise ValueError(f"frame must hold {FRAME_LEN} samples, got {self.samples.size}")
        self.samples.setflags(write=False)

    @property
    def start_time(self) -> float:
        return self.index * FRAME_SECONDS


def decode_wav(data: bytes) -> SampleBuffer:
    """Parse a RIFF/WAVE byte string into a SampleBuffer.

    Raises FormatError for a broken container and UnsupportedFormatError
    (naming the offending field) for valid WAV outside the fixed
    48 kHz / 16-bit / mono configuration.
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise FormatError("not a RIFF/WAVE container")
    pos = 12
    fmt = None
    pcm = None
    while pos + 8 <= len(data):
        chunk_id = data[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise FormatError("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise FormatError("data chunk truncated")
            pcm = body
        pos += 8 + chunk_size + (chunk_size & 1)
    if fmt is None:
        raise FormatError("missing fmt chunk")
    if pcm is None:
        raise FormatError("missing data chunk")

    audio_format, channels, rate, _, _, bits = fmt
    if audio_format != 1:
        raise UnsupportedFormatError("audio_format", "PCM (1)", audio_format)
    if channels != 1:
        raise UnsupportedFormatError("channels", 1, channels)
    if rate != SAMPLE_RATE:
        raise UnsupportedFormatError("sample_rate", SAMPLE_RATE, rate)
    if bits != 16:
        raise UnsupportedFormatError("bit_depth", 16, bits)

    ints = np.frombuffer(pcm[:len(pcm) - (len(pcm) % 2)], dtype="<i2")
    return SampleBuffer(ints.astype(np.float64) / _SCALE)


def encode_wav(buf: SampleBuffer) -> bytes:
    """Serialize a SampleBuffer as PCM 16-bit mono 48 kHz WAV."""
    ints = np.clip(np.round(buf.samples * _SCALE), -32768, 32767).astype("<i2")
    pcm = ints.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(pcm), b"WAVE",
        b"fmt ", 16, 1, 1, SAMPLE_RATE, SAMPLE_RATE * 2, 2, 16,
        b"data", len(pcm),
    )
    return header + pcm


def frame_stream(buf: SampleBuffer) -> Iterator[Frame]:
    """Split a buffer into non-overlapping 1024-sample frames.

    The terminal partial frame is zero-padded; an empty buffer yields
    nothing.
    """
    n = buf.samples.size
    for i in range(0, n, FRAME_LEN):
        chunk = buf.samples[i:i + FRAME_LEN]
        if chunk.size < FRAME_LEN:
            chunk = np.concatenate([chunk, np.zeros(FRAME_LEN - chunk.size)])
        yield Frame(chunk, i // FRAME_LEN)


def frames_from_chunks(chunks: Iterable[SampleBuffer]) -> Iterator[Frame]:
    """Frame a stream of SampleBuffer chunks as one continuous signal.

    This is the live-capture abstraction: any producer of SampleBuffer
    chunks (file replay, microphone, network ingest) plugs in here.
    A trailing partial frame is zero-padded.
    """
    pending = np.empty(0)
    index = 0
    for chunk in chunks:
        pending = np.concatenate([pending, chunk.samples])
        while pending.size >= FRAME_LEN:
            yield Frame(pending[:FRAME_LEN], index)
            index += 1
            pending = pending[FRAME_LEN:]
    if pending.size:
        yield Frame(np.concatenate([pending, np.zeros(FRAME_LEN - pending.size)]), index)


def replay_source(path, chunk_frames: int = 8) -> Iterator[SampleBuffer]:
    """File-replay chunk producer; the deterministic stand-in for a mic."""
    with open(path, "rb") as fh:
        buf = decode_wav(fh.read())
    step = chunk_frames * FRAME_LEN
    for i in range(0, max(len(buf), 1), step):
        chunk = buf.samples[i:i + step]
        if chunk.size:
            yield SampleBuffer(chunk)
