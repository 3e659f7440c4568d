import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earshot import synth
from earshot.audio_io import FRAME_LEN, FRAME_SECONDS, Frame, SampleBuffer, frame_stream
from earshot.detection import (AdmissionConfig, Segmenter, admit_frame, rms, segment,
                               spectral_entropy)

CFG = AdmissionConfig()


def noise_frame(amplitude: float, seed: int = 0) -> Frame:
    rng = np.random.default_rng(seed)
    return Frame(amplitude * rng.uniform(-1, 1, FRAME_LEN), index=0)


def tone_frame(amplitude: float, freq: float = 1000.0) -> Frame:
    t = np.arange(FRAME_LEN) / 48_000
    return Frame(amplitude * np.sin(2 * np.pi * freq * t), index=0)


class TestAdmission:
    def test_loud_noise_admitted_by_amplitude(self):
        decision = admit_frame(noise_frame(0.3), CFG)
        assert decision and decision.reason == "amplitude"

    def test_loud_tone_admitted_by_amplitude(self):
        # amplitude wins even though the tone would also pass on structure
        decision = admit_frame(tone_frame(0.5), CFG)
        assert decision and decision.reason == "amplitude"

    def test_quiet_tone_admitted_by_structure(self):
        frame = tone_frame(0.012)
        assert rms(frame) < CFG.rms_min
        decision = admit_frame(frame, CFG)
        assert decision and decision.reason == "structure"

    def test_quiet_noise_rejected(self):
        frame = noise_frame(0.005)
        assert rms(frame) < CFG.rms_min
        decision = admit_frame(frame, CFG)
        assert not decision and decision.reason is None

    def test_digital_silence_rejected(self):
        assert not admit_frame(Frame(np.zeros(FRAME_LEN), 0), CFG)

    def test_rms_known_value(self):
        assert rms(Frame(np.full(FRAME_LEN, 0.5), 0)) == pytest.approx(0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=1.0, max_value=50.0),
           st.integers(min_value=0, max_value=2 ** 31))
    def test_amplifying_an_admitted_frame_keeps_it_admitted(self, gain, seed):
        base = noise_frame(0.05, seed)
        assert admit_frame(base, CFG)
        louder = Frame(np.clip(base.samples * gain, -1, 1), 0)
        assert admit_frame(louder, CFG)


class TestSpectralEntropy:
    def test_single_bin_is_zero(self):
        spec = np.zeros(512)
        spec[3] = 2.0
        assert spectral_entropy(spec) == 0.0

    def test_uniform_is_maximal(self):
        assert spectral_entropy(np.ones(512)) == pytest.approx(math.log(512))

    def test_all_zero_maps_to_maximum(self):
        assert spectral_entropy(np.zeros(512)) == math.log(512)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e3),
           st.integers(min_value=0, max_value=2 ** 31))
    def test_scale_invariance(self, scale, seed):
        spec = np.random.default_rng(seed).uniform(0, 1, 64)
        assert spectral_entropy(scale * spec) == pytest.approx(spectral_entropy(spec))


class TestConfig:
    def test_frame_bounds(self):
        assert CFG.min_frames == 19     # ceil(0.4 s / 21.33 ms)
        assert CFG.max_frames == 126    # floor(2.7 s / 21.33 ms) -> 2.688 s

    def test_validation(self):
        with pytest.raises(ValueError):
            AdmissionConfig(rms_min=0.0)
        with pytest.raises(ValueError):
            AdmissionConfig(entropy_max_norm=1.5)
        with pytest.raises(ValueError):
            AdmissionConfig(hangover_frames=0)
        with pytest.raises(ValueError):
            AdmissionConfig(min_len_s=3.0, max_len_s=2.0)


class TestSegmentation:
    def test_single_burst_yields_one_trimmed_segment(self):
        buf = synth.tone_burst(duration=1.0)
        events = list(segment(frame_stream(buf)))
        assert len(events) == 1
        ev = events[0]
        assert ev.end_reason == "silence"
        assert 0.4 <= ev.duration <= 2.7
        # trailing hangover frames are trimmed: the segment ends near the burst
        assert abs(ev.duration - 1.0) < 3 * FRAME_SECONDS
        assert abs(ev.start_time - 1.0) < 2 * FRAME_SECONDS

    def test_silence_produces_zero_segments(self):
        buf = SampleBuffer(np.zeros(48_000 * 3))
        assert list(segment(frame_stream(buf))) == []

    def test_short_blip_is_discarded(self):
        buf = synth.tone_burst(duration=0.2)
        assert list(segment(frame_stream(buf))) == []

    def test_long_sound_is_split_at_max_length(self):
        buf = synth.tone_burst(duration=10.0)
        events = list(segment(frame_stream(buf)))
        assert [e.end_reason for e in events[:3]] == ["max_length"] * 3
        assert events[-1].end_reason == "silence"
        for ev in events:
            assert 0.4 <= ev.duration <= 2.7
        # split segments are back to back
        for a, b in zip(events, events[1:]):
            assert b.start_time == pytest.approx(a.end_time)

    def test_user_stop_closes_open_segment(self):
        buf = synth.tone_burst(duration=2.0, lead_silence=0.2, tail_silence=0.0)
        countdown = [60]

        def stop():
            countdown[0] -= 1
            return countdown[0] <= 0

        events = list(segment(frame_stream(buf), user_stop=stop))
        assert len(events) == 1
        assert events[0].end_reason == "user_stop"

    def test_stream_end_flushes_open_segment(self):
        buf = synth.tone_burst(duration=1.0, tail_silence=0.0)
        events = list(segment(frame_stream(buf)))
        assert len(events) == 1
        assert events[0].end_reason == "silence"

    def test_interior_gap_shorter_than_hangover_stays_one_segment(self):
        gap = np.zeros(10 * FRAME_LEN)  # 10 rejected frames < 14 hangover
        burst = synth.tone_burst(duration=0.5, lead_silence=0.0, tail_silence=0.0)
        buf = SampleBuffer(np.concatenate([burst.samples, gap, burst.samples]))
        events = list(segment(frame_stream(buf)))
        assert len(events) == 1

    def test_gap_longer_than_hangover_splits_segments(self):
        gap = np.zeros(20 * FRAME_LEN)
        burst = synth.tone_burst(duration=0.5, lead_silence=0.0, tail_silence=0.0)
        buf = SampleBuffer(np.concatenate([burst.samples, gap, burst.samples]))
        events = list(segment(frame_stream(buf)))
        assert len(events) == 2

    def test_state_callback_sequence(self):
        states = []
        seg = Segmenter(on_state=states.append)
        for frame in frame_stream(synth.tone_burst(duration=1.0)):
            seg.push(frame)
        seg.flush()
        assert states == ["active", "monitor"]

    def test_active_property(self):
        seg = Segmenter()
        assert not seg.active
        seg.push(tone_frame(0.5))
        assert seg.active
        seg.flush()
        assert not seg.active
