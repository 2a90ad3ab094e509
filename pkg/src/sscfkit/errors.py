"""Exception hierarchy shared by the toolkit.

The CLI maps these onto exit codes: :class:`AudioFileError` and plain
``OSError`` are IO failures (3); everything else deriving from
:class:`SscfError` is a data failure (4).
"""


class SscfError(Exception):
    """Base class for all toolkit errors."""


class AudioFileError(SscfError):
    """The audio file could not be opened or is not a RIFF/WAVE file."""


class UnsupportedEncodingError(SscfError):
    """The WAV file uses an encoding other than 16-bit PCM or 32-bit float."""


class EmptyAudioError(SscfError):
    """The WAV file holds no samples."""


class SignalTooShortError(SscfError):
    """Not enough samples (or frames) for the requested operation."""


class ConfigurationError(SscfError, ValueError):
    """Invalid parameter combination, e.g. a subband that contains no FFT bin."""


class FeatureFileError(SscfError):
    """Base class for feature file decoding problems."""


class FeatureFormatError(FeatureFileError):
    """Unrecognized magic bytes or unparseable header."""


class TruncatedFeatureFileError(FeatureFileError):
    """The payload is shorter than the header announces."""


class HeaderMismatchError(FeatureFileError):
    """Header fields disagree with the payload actually present."""


class LabelFileError(SscfError):
    """Malformed, overlapping or unordered rows in a label file."""


class InvalidTrackError(SscfError, ValueError):
    """A track or feature matrix violates a precondition (too short, bad values)."""
