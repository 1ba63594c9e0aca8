"""Lossless range-image compression : previous-valid-pixel prediction, zigzag
varint residual streams and a raw deflate backend inside a bit-exact container.
"""

from lidarbox.codec.container import (
    HEADER_SIZE,
    DecodedFrame,
    FrameHeader,
    decode_archive,
    decode_frame,
    encode_archive,
    encode_frame,
    encode_quantized,
    frame_section_sizes,
    raw_varint_size,
    split_archive,
)
from lidarbox.codec.exceptions import (
    ArchiveFrameError,
    BadMagicError,
    CorruptHeaderError,
    DeflateError,
    FrameDecodeError,
    HeaderOverflowError,
    ResidualCountMismatchError,
    TrailingDataError,
    TruncatedDataError,
    UnsupportedVersionError,
    VarintError,
)
from lidarbox.codec.predictor import ResidualStream, predict_decode, predict_encode
from lidarbox.codec.varint import (
    decode_varints,
    encode_varints,
    unzigzag,
    unzigzag_array,
    varint_decode,
    varint_encode,
    zigzag,
    zigzag_array,
)

__all__ = [
    "HEADER_SIZE",
    "FrameHeader",
    "DecodedFrame",
    "ResidualStream",
    "encode_frame",
    "encode_quantized",
    "decode_frame",
    "frame_section_sizes",
    "encode_archive",
    "split_archive",
    "decode_archive",
    "raw_varint_size",
    "predict_encode",
    "predict_decode",
    "zigzag",
    "unzigzag",
    "zigzag_array",
    "unzigzag_array",
    "varint_encode",
    "varint_decode",
    "encode_varints",
    "decode_varints",
    # Exceptions
    "FrameDecodeError",
    "BadMagicError",
    "UnsupportedVersionError",
    "TruncatedDataError",
    "CorruptHeaderError",
    "DeflateError",
    "VarintError",
    "ResidualCountMismatchError",
    "TrailingDataError",
    "ArchiveFrameError",
    "HeaderOverflowError",
]
