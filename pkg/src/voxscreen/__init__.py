"""Respiratory-voice screening: audio features, metadata encoding, four
classifiers and binary-classification evaluation."""

__version__ = "0.1.0"
