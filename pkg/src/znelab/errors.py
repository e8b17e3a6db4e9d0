"""Exception hierarchy.  The CLI maps these onto exit codes."""


class ZnelabError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(ZnelabError, ValueError):
    pass


class CapacityError(ZnelabError):
    """A qubit or scan-size cap would be exceeded."""


class NumericError(ZnelabError, ArithmeticError):
    pass


class TrainingError(NumericError):
    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class ConfigError(ZnelabError, ValueError):
    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line


class ArtifactIOError(ZnelabError, OSError):
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class PipelineError(ZnelabError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the reason."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
