"""Previous-valid-pixel predictor.

Pixels are visited row-major and only valid pixels take part : each valid
pixel is predicted by the last valid pixel before it in scan order, carried
across row boundaries, and the first valid pixel is predicted as 0.
"""

from dataclasses import dataclass

import numpy as np

from lidarbox.codec.exceptions import ResidualCountMismatchError
from lidarbox.range_image import QuantizedChannel

__all__ = ["ResidualStream", "predict_encode", "predict_decode"]


@dataclass(frozen=True, eq=False)
class ResidualStream:
    """One signed residual per valid pixel in scan order"""

    residuals: np.ndarray

    def __post_init__(self):
        residuals = np.array(self.residuals, dtype=np.int64, copy=True).ravel()
        residuals.setflags(write=False)
        object.__setattr__(self, "residuals", residuals)

    def __len__(self) -> int:
        return int(self.residuals.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResidualStream):
            return NotImplemented
        return np.array_equal(self.residuals, other.residuals)


def predict_encode(q: QuantizedChannel) -> ResidualStream:
    """Residual = value - prediction for every valid pixel"""
    # Boolean indexing walks the grid in C (row-major) order
    return ResidualStream(np.diff(q.valid_values, prepend=np.int64(0)))


def predict_decode(stream: ResidualStream, mask: np.ndarray, step: float = 1.0) -> QuantizedChannel:
    """Exact inverse of `predict_encode` for the same mask

    Raises:
        ResidualCountMismatchError: Stream length differs from the number of valid pixels.
    """
    mask = np.asarray(mask, dtype=bool)
    expected = int(np.count_nonzero(mask))
    if len(stream) != expected:
        raise ResidualCountMismatchError(expected, len(stream))

    values = np.zeros(mask.shape, dtype=np.int64)
    values[mask] = np.cumsum(stream.residuals, dtype=np.int64)
    return QuantizedChannel(values=values, step=step, valid=mask)
