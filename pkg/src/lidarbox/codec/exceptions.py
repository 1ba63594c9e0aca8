from lidarbox.exceptions import LidarboxDataError


class FrameDecodeError(LidarboxDataError):
    """Raised when compressed bytes cannot be turned back into a frame"""


class BadMagicError(FrameDecodeError):
    """Raised when a buffer does not start with the expected magic"""


class UnsupportedVersionError(FrameDecodeError):
    """Raised when the format version byte is unknown"""

    def __init__(self, version: int, *args):
        self.version = version
        super().__init__(f"Unsupported format version {version}", *args)

    def __reduce__(self):
        return (self.__class__, (self.version,))


class TruncatedDataError(FrameDecodeError):
    """Raised when a section ends before its declared length"""

    def __init__(self, section: str, needed: int, available: int):
        self.section = section
        """Name of the section being read"""
        self.needed = needed
        self.available = available
        super().__init__(f"Truncated {section} : needed {needed} bytes, {available} available")

    def __reduce__(self):
        return (self.__class__, (self.section, self.needed, self.available))


class CorruptHeaderError(FrameDecodeError):
    """Raised when header fields hold impossible values"""


class DeflateError(FrameDecodeError):
    """Raised when a payload is not a well-formed raw deflate stream"""


class VarintError(FrameDecodeError):
    """Raised on unterminated or over-long varints"""


class ResidualCountMismatchError(FrameDecodeError):
    """Raised when a residual stream does not match the number of valid pixels"""

    def __init__(self, expected: int, actual: int, section: str = "residual stream"):
        self.expected = expected
        self.actual = actual
        self.section = section
        super().__init__(f"{section} holds {actual} residuals, expected {expected}")

    def __reduce__(self):
        return (self.__class__, (self.expected, self.actual, self.section))


class TrailingDataError(FrameDecodeError):
    """Raised when bytes remain after the last section"""


class ArchiveFrameError(FrameDecodeError):
    """Raised when one frame of an archive fails to decode"""

    def __init__(self, frame_index: int, cause: Exception):
        self.frame_index = frame_index
        self.cause = cause
        super().__init__(f"Frame {frame_index} : {cause}")

    def __reduce__(self):
        return (self.__class__, (self.frame_index, self.cause))


class HeaderOverflowError(LidarboxDataError):
    """Raised when a frame cannot be represented in the container header"""
