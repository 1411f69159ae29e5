"""Exception hierarchy shared by every stage of the package."""


class BinarizationError(Exception):
    """Base class for all errors raised by Textimg2Bin."""


# ----------------------------------------------------------------------------
# Image files
# ----------------------------------------------------------------------------
class ImageFormatError(BinarizationError):
    """The file is not a supported image or its content is invalid."""


class MalformedHeaderError(ImageFormatError):
    pass


class UnsupportedMaxvalError(ImageFormatError):
    pass


class TruncatedPayloadError(ImageFormatError):
    pass


# ----------------------------------------------------------------------------
# Configuration and parameters
# ----------------------------------------------------------------------------
class ConfigError(BinarizationError, ValueError):
    """A configuration file, flag or parameter value is invalid."""


class ParameterError(ConfigError):
    pass


class CorpusError(ConfigError):
    """A corpus directory holds no usable image/ground-truth pairs."""


class SynthError(ConfigError):
    """A synthetic image specification cannot be rendered."""


# ----------------------------------------------------------------------------
# Data
# ----------------------------------------------------------------------------
class EmptyInputError(BinarizationError, ValueError):
    pass


class DimensionMismatchError(BinarizationError, ValueError):
    pass
