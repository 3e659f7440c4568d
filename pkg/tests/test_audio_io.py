import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earshot import audio_io
from earshot.audio_io import (FRAME_LEN, SAMPLE_RATE, Frame, SampleBuffer, decode_wav,
                              encode_wav, frame_stream, frames_from_chunks)
from earshot.errors import FormatError, UnsupportedFormatError


def make_wav(ints, rate=SAMPLE_RATE, channels=1, bits=16, audio_format=1):
    pcm = np.asarray(ints, dtype="<i2").tobytes()
    block = channels * bits // 8
    return struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(pcm), b"WAVE",
        b"fmt ", 16, audio_format, channels, rate, rate * block, block, bits,
        b"data", len(pcm),
    ) + pcm


class TestDecode:
    def test_known_sample_values(self):
        buf = decode_wav(make_wav([0, 16384, -16384, 32767]))
        assert np.allclose(buf.samples, [0.0, 0.5, -0.5, 32767 / 32768])

    def test_full_negative_scale(self):
        buf = decode_wav(make_wav([-32768]))
        assert buf.samples[0] == -1.0

    def test_not_riff(self):
        with pytest.raises(FormatError):
            decode_wav(b"OggS" + b"\x00" * 40)

    def test_missing_data_chunk(self):
        data = make_wav([0, 1])
        with pytest.raises(FormatError):
            decode_wav(data[:36])  # header + fmt only

    def test_wrong_rate_names_the_field(self):
        with pytest.raises(UnsupportedFormatError) as exc:
            decode_wav(make_wav([0], rate=44100))
        assert "sample_rate" in str(exc.value)
        assert "44100" in str(exc.value)

    def test_wrong_channels(self):
        with pytest.raises(UnsupportedFormatError):
            decode_wav(make_wav([0, 0], channels=2))

    def test_wrong_bit_depth(self):
        with pytest.raises(UnsupportedFormatError):
            decode_wav(make_wav([0], bits=8))

    def test_non_pcm(self):
        with pytest.raises(UnsupportedFormatError):
            decode_wav(make_wav([0], audio_format=3))

    def test_extra_chunks_are_skipped(self):
        base = make_wav([100, -100])
        junk = b"LIST" + struct.pack("<I", 4) + b"info"
        data = base[:12] + junk + base[12:]
        data = data[:4] + struct.pack("<I", len(data) - 8) + data[8:]
        buf = decode_wav(data)
        assert len(buf) == 2


class TestEncode:
    def test_round_trip_bytes_identical(self):
        original = make_wav([0, 5, -5, 1000, -32768, 32767])
        assert encode_wav(decode_wav(original)) == original

    def test_clipping_and_rounding(self):
        buf = SampleBuffer(np.array([1.0, -1.0, 0.5]))
        ints = np.frombuffer(encode_wav(buf)[44:], dtype="<i2")
        assert list(ints) == [32767, -32768, 16384]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(min_value=-32768, max_value=32767),
                    min_size=0, max_size=200))
    def test_round_trip_property(self, ints):
        data = make_wav(ints)
        assert encode_wav(decode_wav(data)) == data


class TestSampleBuffer:
    def test_rejects_other_rates(self):
        with pytest.raises(UnsupportedFormatError):
            SampleBuffer(np.zeros(4), sample_rate=44100)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SampleBuffer(np.array([1.5]))

    def test_samples_are_read_only(self):
        buf = SampleBuffer(np.zeros(4))
        with pytest.raises(ValueError):
            buf.samples[0] = 1.0

    def test_duration(self):
        assert SampleBuffer(np.zeros(SAMPLE_RATE)).duration == 1.0


class TestFraming:
    def test_exact_multiple(self):
        frames = list(frame_stream(SampleBuffer(np.zeros(3 * FRAME_LEN))))
        assert [f.index for f in frames] == [0, 1, 2]

    def test_terminal_zero_padding(self):
        buf = SampleBuffer(np.ones(FRAME_LEN + 1) * 0.25)
        frames = list(frame_stream(buf))
        assert len(frames) == 2
        assert frames[1].samples[0] == 0.25
        assert np.all(frames[1].samples[1:] == 0.0)

    def test_empty_buffer_yields_nothing(self):
        assert list(frame_stream(SampleBuffer(np.empty(0)))) == []

    def test_frame_start_time(self):
        frame = Frame(np.zeros(FRAME_LEN), index=3)
        assert frame.start_time == pytest.approx(3 * FRAME_LEN / SAMPLE_RATE)

    def test_frame_rejects_wrong_size(self):
        with pytest.raises(ValueError):
            Frame(np.zeros(100), index=0)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(min_value=1, max_value=4000), min_size=1, max_size=6))
    def test_chunked_framing_matches_whole_buffer(self, sizes):
        rng = np.random.default_rng(sum(sizes))
        samples = rng.uniform(-1, 1, sum(sizes))
        whole = list(frame_stream(SampleBuffer(samples)))
        chunks = []
        pos = 0
        for size in sizes:
            chunks.append(SampleBuffer(samples[pos:pos + size]))
            pos += size
        streamed = list(frames_from_chunks(chunks))
        assert len(streamed) == len(whole)
        for a, b in zip(streamed, whole):
            assert a.index == b.index
            assert np.array_equal(a.samples, b.samples)


def test_replay_source_reassembles_file(tmp_path):
    rng = np.random.default_rng(1)
    buf = SampleBuffer(rng.uniform(-0.9, 0.9, 5 * FRAME_LEN + 17))
    path = tmp_path / "x.wav"
    path.write_bytes(audio_io.encode_wav(buf))
    chunks = list(audio_io.replay_source(path, chunk_frames=2))
    joined = np.concatenate([c.samples for c in chunks])
    decoded = audio_io.decode_wav(path.read_bytes())
    assert np.array_equal(joined, decoded.samples)
