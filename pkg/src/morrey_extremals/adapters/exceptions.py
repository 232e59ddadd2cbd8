class AdapterError(Exception):
    """Base class for all adapter-related errors."""


class ConfigFileError(AdapterError):
    """Raised when a run configuration file or override is invalid."""


class ArtifactError(AdapterError):
    """Base class for artifact storage errors."""


class ArtifactReadError(ArtifactError):
    """Raised when a stored artifact cannot be read back."""


class ArtifactWriteError(ArtifactError):
    """Raised when an artifact cannot be written to the output directory."""


class OptimizerError(AdapterError):
    """Raised when an optimizer cannot handle the problem it is given."""
