"""Synthetic sound corpus for tests and desk-scale evaluation runs.

Classes are built from six texture archetypes (pure tone, harmonic
stack, up/down chirps, band-limited noise, AM and FM tones) crossed
with base-frequency bands. Every instance is parameter-jittered,
rendered to 16-bit WAV bytes and decoded back, so features always come
out of the full WAV-to-feature path.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import audio_io
from .audio_io import SAMPLE_RATE, SampleBuffer
from .features import extract_segment_features
from .kb import KnowledgeBase

ARCHETYPES = ("tone", "harmonics", "sawtooth", "chirp", "band_noise", "am_tone")
BASE_FREQS = (250.0, 450.0, 800.0, 1400.0, 2500.0, 4300.0, 7500.0)


@dataclass(frozen=True)
class ClassSpec:
    name: str
    archetype: str
    base_freq: float
    amplitude: float


def class_specs(n_classes: int) -> list[ClassSpec]:
    """Deterministic archetype x frequency-band grid of class definitions.

    Each class also gets its own loudness, like real sound classes do
    (a vacuum cleaner is not a faucet); energy-scaled features then
    separate classes the same way they would on real recordings.
    """
    specs = []
    for i in range(n_classes):
        arch = ARCHETYPES[i % len(ARCHETYPES)]
        freq = BASE_FREQS[(i // len(ARCHETYPES)) % len(BASE_FREQS)]
        amp = 0.05 * 1.5 ** (i % 5)
        specs.append(ClassSpec(f"{arch}_{int(freq)}hz", arch, freq, amp))
    return specs


def _band_noise(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    spectrum = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n, d=1.0 / SAMPLE_RATE)
    spectrum[(freqs < lo) | (freqs > hi)] = 0.0
    x = np.fft.irfft(spectrum, n)
    peak = np.max(np.abs(x))
    return x / peak if peak > 0 else x


def render_instance(spec: ClassSpec, rng: np.random.Generator) -> SampleBuffer:
    """One jittered rendition of a class, ~1.2 s long.

    Jitter is kept small (pitch, loudness, length, phase, AM rate) so
    the within-class spread stays below the between-class spacing in
    the unstandardized feature space the classifiers operate on; 16-bit
    quantization through the WAV path adds its own noise on top.
    """
    duration = rng.uniform(1.195, 1.205)
    n = int(duration * SAMPLE_RATE)
    t = np.arange(n) / SAMPLE_RATE
    f = spec.base_freq * rng.uniform(0.998, 1.002)
    phase = rng.uniform(0.0, 2.0 * np.pi)

    if spec.archetype == "tone":
        x = np.sin(2 * np.pi * f * t + phase)
    elif spec.archetype == "harmonics":
        x = (np.sin(2 * np.pi * f * t + phase)
             + 0.5 * np.sin(2 * np.pi * 2 * f * t)
             + 0.25 * np.sin(2 * np.pi * 3 * f * t))
    elif spec.archetype == "sawtooth":
        harmonics = np.arange(1, 12)
        x = np.sum(np.sin(2 * np.pi * np.outer(harmonics, f * t) + phase) / harmonics[:, None],
                   axis=0)
    elif spec.archetype == "chirp":
        x = np.sin(2 * np.pi * f * (t + 0.5 * t ** 2 / duration) + phase)
    elif spec.archetype == "band_noise":
        x = _band_noise(rng, n, 0.6 * f, 2.0 * f)
    elif spec.archetype == "am_tone":
        mod = rng.uniform(4.8, 5.2)
        x = np.sin(2 * np.pi * f * t + phase) * (0.55 + 0.45 * np.sin(2 * np.pi * mod * t))
    else:
        raise ValueError(f"unknown archetype {spec.archetype!r}")

    amp = spec.amplitude * rng.uniform(0.995, 1.005)
    x = amp * x / max(np.max(np.abs(x)), 1e-12)
    # 10 ms fade in/out to avoid clicks at the edges.
    fade = int(0.01 * SAMPLE_RATE)
    ramp = np.linspace(0.0, 1.0, fade)
    x[:fade] *= ramp
    x[-fade:] *= ramp[::-1]
    return SampleBuffer(np.clip(x, -1.0, 1.0))


def features_via_wav(buf: SampleBuffer) -> np.ndarray:
    """Extract the 54-value vector through a WAV encode/decode round trip."""
    decoded = audio_io.decode_wav(audio_io.encode_wav(buf))
    return extract_segment_features(list(audio_io.frame_stream(decoded)))


def build_kb(n_classes: int, n_instances: int, seed: int,
             keep_audio: bool = False) -> KnowledgeBase:
    """In-memory synthetic KB with features from the full audio path."""
    rng = np.random.default_rng(seed)
    kb = KnowledgeBase()
    for spec in class_specs(n_classes):
        for _ in range(n_instances):
            buf = render_instance(spec, rng)
            kb.add_record(spec.name, features_via_wav(buf),
                          audio=buf if keep_audio else None)
    return kb


def generate_corpus(out_dir, n_classes: int, n_instances: int, seed: int) -> Path:
    """Write the corpus as WAV files, one directory per class."""
    out_dir = Path(out_dir)
    rng = np.random.default_rng(seed)
    for spec in class_specs(n_classes):
        class_dir = out_dir / spec.name
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(n_instances):
            buf = render_instance(spec, rng)
            (class_dir / f"{i:03d}.wav").write_bytes(audio_io.encode_wav(buf))
    return out_dir


def tone_burst(freq: float = 1000.0, duration: float = 1.0, amplitude: float = 0.4,
               lead_silence: float = 1.0, tail_silence: float = 1.0) -> SampleBuffer:
    """Fixture helper: one tone burst embedded in digital silence."""
    n = int(duration * SAMPLE_RATE)
    t = np.arange(n) / SAMPLE_RATE
    burst = amplitude * np.sin(2 * np.pi * freq * t)
    fade = int(0.01 * SAMPLE_RATE)
    ramp = np.linspace(0.0, 1.0, fade)
    burst[:fade] *= ramp
    burst[-fade:] *= ramp[::-1]
    return SampleBuffer(np.concatenate([
        np.zeros(int(lead_silence * SAMPLE_RATE)),
        burst,
        np.zeros(int(tail_silence * SAMPLE_RATE)),
    ]))
