"""Exceptions module"""

from lidarbox._bases import BaseLidarboxException


class LidarboxDataError(BaseLidarboxException):
    """Raised when input data is malformed. The commandline exits with status 2 on these."""


class ConfigurationError(BaseLidarboxException):
    """Raised when a profile or thresholds file cannot be loaded"""


class QuantizationError(LidarboxDataError):
    """Raised when a channel cannot be mapped onto the quantization lattice"""

    def __init__(self, message: str, pixel: tuple[int, int] | None = None, *args):
        self.pixel = pixel
        """(row, column) of the offending pixel if any"""
        super().__init__(message, *args)

    def __reduce__(self):
        return (self.__class__, (self.args[0] if self.args else "", self.pixel))


class InvalidImageError(LidarboxDataError):
    """Raised when a range image breaks its invariants"""

    def __init__(self, source: str, violations: list[str]):
        self.source = source
        self.violations = violations
        """Broken invariants, one line each"""
        shown = "; ".join(violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{source} : {len(violations)} invariant violations - {shown}{more}")

    def __reduce__(self):
        return (self.__class__, (self.source, self.violations))


class FrameMismatchError(LidarboxDataError):
    """Raised when a point cloud is in a different frame than the operation expects"""


class RawFrameFormatError(LidarboxDataError):
    """Raised when a raw `.lrf` frame file does not parse"""


class EmptyCorpusError(LidarboxDataError):
    """Raised when an input directory holds no frames"""


class RecordFormatError(LidarboxDataError):
    """Raised when a scenario or prediction record violates the schema"""

    def __init__(self, record_index: int, field: str, message: str):
        self.record_index = record_index
        """0-based record position, -1 for the file header"""
        self.field = field
        """Dotted path to the offending field"""
        self.detail = message
        location = "header" if record_index < 0 else f"record {record_index}"
        super().__init__(f"{location}, field '{field}' : {message}")

    def __reduce__(self):
        return (self.__class__, (self.record_index, self.field, self.detail))


class DanglingReferenceError(LidarboxDataError):
    """Raised when predictions and scenarios do not line up"""

    def __init__(self, offending_ids: list[str], message: str = "Dangling prediction references"):
        self.offending_ids = offending_ids
        self.summary = message
        super().__init__(f"{message} - {', '.join(offending_ids)}")

    def __reduce__(self):
        return (self.__class__, (self.offending_ids, self.summary))
