import numpy as np
import pytest

from earshot import synth
from earshot.audio_io import FRAME_LEN, SAMPLE_RATE, SampleBuffer
from earshot.synth import ClassSpec


@pytest.fixture(scope="session")
def corpus_kb():
    """The shipped desk-scale corpus: 30 classes x 10 instances."""
    return synth.build_kb(30, 10, seed=7)


@pytest.fixture(scope="session")
def duo_specs():
    """Two loud, strongly contrasting classes for pipeline fixtures."""
    return (ClassSpec("low_tone", "tone", 250.0, 0.2),
            ClassSpec("hiss_band", "band_noise", 2500.0, 0.2))


@pytest.fixture(scope="session")
def duo_kb(duo_specs):
    """Small KB trained from the two contrast classes (3 instances each)."""
    from earshot.kb import KnowledgeBase

    rng = np.random.default_rng(5)
    kb = KnowledgeBase()
    for spec in duo_specs:
        for _ in range(3):
            buf = synth.render_instance(spec, rng)
            kb.add_record(spec.name, synth.features_via_wav(buf))
    return kb


def silence(seconds: float) -> np.ndarray:
    return np.zeros(int(seconds * SAMPLE_RATE))


def burst_fixture(specs, seed: int = 11, gap_s: float = 0.6) -> SampleBuffer:
    """Renditions of the given specs separated by silence gaps."""
    rng = np.random.default_rng(seed)
    parts = [silence(gap_s)]
    for spec in specs:
        parts.append(synth.render_instance(spec, rng).samples)
        parts.append(silence(gap_s))
    return SampleBuffer(np.concatenate(parts))


def chunks_of(buf: SampleBuffer, chunk_frames: int = 8):
    """Split a buffer into SampleBuffer chunks, like the replay source."""
    step = chunk_frames * FRAME_LEN
    for i in range(0, len(buf), step):
        chunk = buf.samples[i:i + step]
        if chunk.size:
            yield SampleBuffer(chunk)
