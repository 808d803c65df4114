"""Exception hierarchy shared by every module."""


class SubcycleError(Exception):
    """Base class for all errors raised by the toolkit."""


class GridTooNarrow(SubcycleError):
    pass


class SingularFrequency(SubcycleError):
    pass


class DecompositionFailed(SubcycleError):
    pass


class GateTooWide(SubcycleError):
    pass


class SpacingViolation(SubcycleError):
    pass


class DegenerateSubtraction(SubcycleError):
    pass


class GridTruncation(SubcycleError):
    pass


class GridMismatch(SubcycleError):
    pass


class NegativeMarginal(SubcycleError):
    pass


class DuplicatePhases(SubcycleError):
    pass


class InsufficientPhases(SubcycleError):
    pass


class TooFewPhases(SubcycleError):
    pass


class NoSqueezingDetected(SubcycleError):
    pass


class EmptyPassband(SubcycleError):
    pass


class UnphysicalCovariance(SubcycleError):
    pass


class MissingArtifact(SubcycleError):
    pass


class ConfigInvalid(SubcycleError):
    """Invalid experiment configuration; ``problems`` maps field name to message."""

    def __init__(self, problems):
        self.problems = dict(problems)
        lines = [f"{k}: {v}" for k, v in sorted(self.problems.items())]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))
