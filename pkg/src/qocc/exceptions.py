"""Exception hierarchy for the qocc package."""


class QOCCError(Exception):
    """Base class for all errors raised by qocc."""


# simulator
class SimulationSizeError(QOCCError, ValueError):
    pass


class QubitIndexError(QOCCError, IndexError):
    pass


class GateError(QOCCError, ValueError):
    pass


class DegenerateConditionError(QOCCError, ValueError):
    """Conditioning on an outcome that has zero probability."""


class SamplingArgumentError(QOCCError, ValueError):
    pass


# encoding
class EncodingError(QOCCError, ValueError):
    pass


class LoaderSpecError(QOCCError, ValueError):
    pass


# classifiers
class ModelError(QOCCError, ValueError):
    pass


class PostselectionError(QOCCError, RuntimeError):
    """No amplitude (or no shot) survived the ancilla postselection."""

    def __init__(self, message, postselection_probability=None):
        super().__init__(message)
        self.postselection_probability = postselection_probability


# data pipeline
class DatasetParseError(QOCCError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ConfigError(QOCCError, ValueError):
    pass


class BalanceError(QOCCError, ValueError):
    pass


class BatchError(QOCCError, ValueError):
    pass


class ScalingError(QOCCError, ValueError):
    pass


class SplitError(QOCCError, ValueError):
    pass


class StageError(QOCCError, RuntimeError):
    """Wraps a failure inside an experiment with the stage it happened in."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
