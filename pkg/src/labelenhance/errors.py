"""Exception hierarchy shared by the library, the CLI and the HTTP service.

The CLI maps these onto exit codes (invalid input -> 2, infeasible
constraints -> 3, training divergence -> 4); the service maps them onto
HTTP status codes.
"""


class LabelEnhanceError(Exception):
    """Base class for all errors raised by this package."""


class DataError(LabelEnhanceError):
    """Invalid or malformed input data (files, matrices, config values)."""


class InfeasibleError(LabelEnhanceError):
    """A constraint set is empty, e.g. a logical label row with no positives."""


class TrainingDivergedError(LabelEnhanceError):
    """The regression loss became non-finite during training."""

    def __init__(self, message: str, epoch: int):
        super().__init__(message)
        self.epoch = epoch
