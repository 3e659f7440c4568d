"""Earshot: a personalized environmental sound recognition engine.

Detects acoustic events in a 48 kHz mono stream, describes each event
with a 54-value feature vector, classifies it against a user-built
knowledge base and reports a 0-5 confidence level alongside the label.
"""

from .audio_io import Frame, SampleBuffer, decode_wav, encode_wav, frame_stream
from .confidence import GpiResult, confidence_level, gpi
from .detection import AdmissionConfig, SegmentEvent, admit_frame, segment
from .features import extract_segment_features
from .kb import KnowledgeBase, SoundClass, SoundRecord
from .pipeline import Engine, History, RecognitionResult

__version__ = "0.1.0"

__all__ = [
    "AdmissionConfig", "Engine", "Frame", "GpiResult", "History",
    "KnowledgeBase", "RecognitionResult", "SampleBuffer", "SegmentEvent",
    "SoundClass", "SoundRecord", "admit_frame", "confidence_level",
    "decode_wav", "encode_wav", "extract_segment_features", "frame_stream",
    "gpi", "segment",
]
