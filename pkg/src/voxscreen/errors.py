"""Exception hierarchy shared by every stage of the pipeline.

Two base classes map onto CLI exit codes: ``DataError`` (exit 2) for bad
inputs and ``NumericError`` (exit 3) for training/numerical failures.
"""


class VoxError(Exception):
    pass


class DataError(VoxError):
    pass


class NumericError(VoxError):
    pass


# audio_io
class MalformedHeader(DataError):
    pass


class UnsupportedEncoding(DataError):
    pass


class EmptyAudio(DataError):
    pass


# dsp
class TooShort(DataError):
    pass


class InvalidRange(DataError):
    pass


class DegenerateSignal(UserWarning):
    """Warned (not raised) when skewness/kurtosis are undefined."""


# metadata
class UnknownCategory(DataError):
    pass


class UnparseableAge(DataError):
    pass


class MissingLabel(DataError):
    pass


class SchemaMismatch(UserWarning):
    """Warned when a record carries a symptom outside the frozen vocabulary."""


# dataset
class EmptyClass(DataError):
    pass


class InsufficientPositives(DataError):
    pass


# models
class ShapeMismatch(DataError):
    pass


class SingleClass(DataError):
    pass


class FeatureKindMismatch(DataError):
    pass


class MissingFeatures(DataError):
    pass


class NoConvergence(UserWarning):
    pass


class NanLoss(NumericError):
    def __init__(self, message, batch_id=None):
        super().__init__(message)
        self.batch_id = batch_id


# eval
class LengthMismatch(DataError):
    pass
