"""Bit-exact frame container and multi-frame archive.

Frame layout (little endian) :

    magic "WLRF" | version u8 | sensor_id u8 | return_index u8 | deflate_level u8
    | height u16 | width u16 | 6 x step f64 | yaw, pitch, roll f64
    | validity bitmap ceil(h*w / 8) bytes, row-major, LSB first
    | 6 x (varint payload length, raw deflate of zigzag varint residuals)

Archive layout :

    magic "WLRA" | version u8 | varint frame count | frame count x (varint length, frame)
"""

import math
import struct
import typing as t
import zlib
from dataclasses import dataclass, field

import numpy as np

from lidarbox import logger
from lidarbox.codec.exceptions import (
    ArchiveFrameError,
    BadMagicError,
    CorruptHeaderError,
    DeflateError,
    FrameDecodeError,
    HeaderOverflowError,
    TrailingDataError,
    TruncatedDataError,
    UnsupportedVersionError,
)
from lidarbox.codec.predictor import ResidualStream, predict_decode, predict_encode
from lidarbox.codec.varint import (
    decode_varints,
    encode_varints,
    unzigzag_array,
    varint_decode,
    varint_encode,
    zigzag_array,
)
from lidarbox.constants import (
    ARCHIVE_MAGIC,
    CHANNEL_NAMES,
    DEFAULT_DEFLATE_LEVEL,
    FORMAT_VERSION,
    FRAME_MAGIC,
    MAX_DIMENSION,
    MAX_VARINT_BYTES,
    Channel,
    ReturnIndex,
    SensorName,
)
from lidarbox.range_image import (
    QuantizationProfile,
    QuantizedChannel,
    QuantizedImage,
    RangeImage,
    SensorGeometry,
    default_geometry,
    dequantize_channel,
    quantize_image,
    sensor_shape,
)

__all__ = [
    "FrameHeader",
    "DecodedFrame",
    "encode_frame",
    "encode_quantized",
    "decode_frame",
    "frame_section_sizes",
    "encode_archive",
    "split_archive",
    "decode_archive",
    "raw_varint_size",
]

_FIXED_HEADER = struct.Struct("<4sBBBBHH6d3d")

HEADER_SIZE = _FIXED_HEADER.size


@dataclass(frozen=True)
class FrameHeader:
    """Fixed-size container header"""

    sensor_id: SensorName
    return_index: ReturnIndex
    deflate_level: int
    height: int
    width: int
    steps: tuple[float, ...]
    """Quantization step per channel in `Channel` order"""
    rotation: tuple[float, float, float]
    """Frame yaw, pitch, roll in radians, already on the rotation lattice"""
    version: int = FORMAT_VERSION

    def pack(self) -> bytes:
        return _FIXED_HEADER.pack(
            FRAME_MAGIC,
            self.version,
            int(self.sensor_id),
            int(self.return_index),
            self.deflate_level,
            self.height,
            self.width,
            *self.steps,
            *self.rotation,
        )

    @property
    def num_pixels(self) -> int:
        return self.height * self.width


@dataclass(frozen=True, eq=False)
class DecodedFrame:
    """Everything `decode_frame` recovers from a container"""

    header: FrameHeader
    channels: tuple[QuantizedChannel, ...]
    valid: np.ndarray
    section_sizes: dict[str, int] = field(default_factory=dict)
    """Bytes taken by the header, the bitmap and each channel section (length prefix included)"""
    residual_byte_counts: dict[str, int] = field(default_factory=dict)
    """Inflated zigzag-varint bytes per channel"""

    def __iter__(self):
        yield from (self.channels, self.valid, self.header)

    @property
    def frame_rotation(self) -> tuple[float, float, float]:
        return self.header.rotation

    def to_range_image(self, geometry: SensorGeometry | None = None) -> RangeImage:
        """Dequantized image. `geometry` supplies inclination bounds, defaults to the placeholders."""
        geometry = geometry or default_geometry(self.header.sensor_id)
        if geometry.sensor_id != self.header.sensor_id:
            raise CorruptHeaderError(
                f"Frame holds {self.header.sensor_id.name} data, geometry is for {geometry.sensor_id.name}"
            )
        planes = [dequantize_channel(channel) for channel in self.channels]
        return RangeImage(
            geometry=geometry,
            return_index=self.header.return_index,
            range=planes[Channel.RANGE],
            intensity=planes[Channel.INTENSITY],
            elongation=planes[Channel.ELONGATION],
            pose_translation=np.stack(planes[Channel.POSE_TX :], axis=-1),
            valid=self.valid,
        )


class _Reader:
    """Bounds-checked cursor over a byte buffer"""

    def __init__(self, data: bytes | memoryview):
        self._data = memoryview(data)
        self.offset = 0

    @property
    def remaining(self) -> int:
        return len(self._data) - self.offset

    def take(self, size: int, section: str) -> bytes:
        if size > self.remaining:
            raise TruncatedDataError(section, size, self.remaining)
        chunk = self._data[self.offset : self.offset + size].tobytes()
        self.offset += size
        return chunk

    def varint(self, section: str) -> int:
        if self.remaining == 0:
            raise TruncatedDataError(section, 1, 0)
        try:
            value, self.offset = varint_decode(self._data, self.offset)
        except FrameDecodeError as e:
            if self.remaining < MAX_VARINT_BYTES and all(
                byte & 0x80 for byte in self._data[self.offset :]
            ):
                raise TruncatedDataError(section, self.remaining + 1, self.remaining) from e
            raise
        return value


def _deflate(data: bytes, level: int) -> bytes:
    if not data:
        return b""
    compressor = zlib.compressobj(level, zlib.DEFLATED, -15)
    return compressor.compress(data) + compressor.flush()


def _inflate(payload: bytes, limit: int, section: str) -> bytes:
    if not payload:
        return b""
    decompressor = zlib.decompressobj(-15)
    try:
        inflated = decompressor.decompress(payload, limit + 1)
    except zlib.error as e:
        raise DeflateError(f"{section} payload is not valid deflate data - {e}") from e
    if len(inflated) > limit:
        raise DeflateError(f"{section} payload inflates beyond {limit} bytes")
    if not decompressor.eof:
        raise DeflateError(f"{section} payload ends before the deflate stream does")
    if decompressor.unused_data:
        raise DeflateError(f"{section} payload has {len(decompressor.unused_data)} bytes after its stream")
    return inflated


def encode_quantized(quantized: QuantizedImage, level: int = DEFAULT_DEFLATE_LEVEL) -> bytes:
    """Container bytes for an already quantized image"""
    height, width = quantized.geometry.shape
    if height > MAX_DIMENSION or width > MAX_DIMENSION:
        raise HeaderOverflowError(f"Image {height}x{width} exceeds the {MAX_DIMENSION} pixel header limit")
    if quantized.valid.shape != (height, width):
        raise HeaderOverflowError(
            f"Validity mask {quantized.valid.shape} does not match geometry {(height, width)}"
        )
    if not 0 <= level <= 9:
        raise HeaderOverflowError(f"Deflate level must be within 0-9 not {level}")

    header = FrameHeader(
        sensor_id=quantized.geometry.sensor_id,
        return_index=quantized.return_index,
        deflate_level=level,
        height=height,
        width=width,
        steps=tuple(channel.step for channel in quantized.channels),
        rotation=quantized.frame_rotation,
    )
    sections = [header.pack(), np.packbits(quantized.valid.ravel(), bitorder="little").tobytes()]

    for name, channel in zip(CHANNEL_NAMES, quantized.channels, strict=True):
        residual_bytes = encode_varints(zigzag_array(predict_encode(channel).residuals))
        payload = _deflate(residual_bytes, level)
        logger.debug(f"{name} : {len(residual_bytes)} varint bytes -> {len(payload)} deflated")
        sections.append(varint_encode(len(payload)))
        sections.append(payload)

    return b"".join(sections)


def encode_frame(
    img: RangeImage,
    profile: QuantizationProfile | None = None,
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0),
    level: int = DEFAULT_DEFLATE_LEVEL,
) -> bytes:
    """Quantize, predict, zigzag, varint and deflate every channel of an image

    Args:
        img (RangeImage): Image to compress.
        profile (QuantizationProfile, optional): Lattice steps. Defaults to the stock profile.
        rotation (tuple[float, float, float], optional): Frame yaw, pitch, roll in radians.
        level (int, optional): Deflate level recorded in the header. Defaults to DEFAULT_DEFLATE_LEVEL.

    Raises:
        QuantizationError: A valid pixel cannot be quantized.
        HeaderOverflowError: The image cannot be described by the header.

    Returns:
        bytes: Container bytes, identical for identical inputs
    """
    if img.valid.shape != img.geometry.shape:
        raise HeaderOverflowError(
            f"Validity mask {img.valid.shape} does not match geometry {img.geometry.shape}"
        )
    return encode_quantized(quantize_image(img, profile, rotation), level=level)


def _parse_header(reader: _Reader) -> FrameHeader:
    magic = reader.take(4, "magic")
    if magic != FRAME_MAGIC:
        raise BadMagicError(f"Expected frame magic {FRAME_MAGIC!r}, found {magic!r}")

    version = reader.take(1, "header")[0]
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(version)

    fields = _FIXED_HEADER.unpack(magic + bytes([version]) + reader.take(HEADER_SIZE - 5, "header"))
    _, _, sensor_id, return_index, level, height, width = fields[:7]
    steps, rotation = fields[7:13], fields[13:16]

    if sensor_id not in SensorName.map().values():
        raise CorruptHeaderError(f"Unknown sensor id {sensor_id}")
    if return_index not in (ReturnIndex.FIRST, ReturnIndex.SECOND):
        raise CorruptHeaderError(f"Unknown return index {return_index}")
    if level > 9:
        raise CorruptHeaderError(f"Deflate level {level} is out of range")
    if (height, width) != sensor_shape(SensorName(sensor_id)):
        raise CorruptHeaderError(
            f"{SensorName(sensor_id).name} frames are {sensor_shape(SensorName(sensor_id))}, "
            f"header says {(height, width)}"
        )
    if not all(math.isfinite(step) and step > 0 for step in steps):
        raise CorruptHeaderError(f"Quantization steps must be finite and positive - {steps}")
    if not all(math.isfinite(angle) for angle in rotation):
        raise CorruptHeaderError(f"Frame rotation must be finite - {rotation}")

    return FrameHeader(
        sensor_id=SensorName(sensor_id),
        return_index=ReturnIndex(return_index),
        deflate_level=level,
        height=height,
        width=width,
        steps=tuple(steps),
        rotation=tuple(rotation),
        version=version,
    )


def decode_frame(data: bytes | memoryview) -> DecodedFrame:
    """Recover the six quantized channels, the validity mask and the header

    Raises:
        BadMagicError, UnsupportedVersionError, TruncatedDataError, CorruptHeaderError,
        DeflateError, VarintError, ResidualCountMismatchError, TrailingDataError.
    """
    reader = _Reader(data)
    header = _parse_header(reader)
    sections = {"header": HEADER_SIZE}

    num_pixels = header.num_pixels
    bitmap_size = (num_pixels + 7) // 8
    bitmap = np.frombuffer(reader.take(bitmap_size, "validity bitmap"), dtype=np.uint8)
    bits = np.unpackbits(bitmap, bitorder="little")
    if bits[num_pixels:].any():
        raise CorruptHeaderError("Validity bitmap padding bits are not zero")
    valid = bits[:num_pixels].astype(bool).reshape(header.height, header.width)
    sections["bitmap"] = bitmap_size

    num_valid = int(np.count_nonzero(valid))
    channels = []
    residual_byte_counts = {}
    for name, step in zip(CHANNEL_NAMES, header.steps, strict=True):
        start = reader.offset
        payload_size = reader.varint(f"{name} length")
        payload = reader.take(payload_size, f"{name} payload")
        residual_bytes = _inflate(payload, num_valid * MAX_VARINT_BYTES, name)
        zigzagged = decode_varints(residual_bytes, expected=num_valid)
        stream = ResidualStream(unzigzag_array(zigzagged))
        channels.append(predict_decode(stream, valid, step=step))
        sections[name] = reader.offset - start
        residual_byte_counts[name] = len(residual_bytes)

    if reader.remaining:
        raise TrailingDataError(f"{reader.remaining} unexpected bytes after the last channel")

    return DecodedFrame(
        header=header,
        channels=tuple(channels),
        valid=valid,
        section_sizes=sections,
        residual_byte_counts=residual_byte_counts,
    )


def frame_section_sizes(data: bytes | memoryview) -> dict[str, int]:
    """Bytes taken by every section of a container without inflating the payloads"""
    reader = _Reader(data)
    header = _parse_header(reader)
    sections = {"header": HEADER_SIZE, "bitmap": (header.num_pixels + 7) // 8}
    reader.take(sections["bitmap"], "validity bitmap")
    for name in CHANNEL_NAMES:
        start = reader.offset
        reader.take(reader.varint(f"{name} length"), f"{name} payload")
        sections[name] = reader.offset - start
    if reader.remaining:
        raise TrailingDataError(f"{reader.remaining} unexpected bytes after the last channel")
    return sections


def encode_archive(frames: t.Iterable[bytes]) -> bytes:
    """Length-prefixed concatenation of encoded frames"""
    frames = list(frames)
    parts = [ARCHIVE_MAGIC, bytes([FORMAT_VERSION]), varint_encode(len(frames))]
    for frame in frames:
        parts.append(varint_encode(len(frame)))
        parts.append(frame)
    return b"".join(parts)


def split_archive(data: bytes | memoryview) -> list[bytes]:
    """Frame byte strings of an archive without decoding them

    Raises:
        BadMagicError, UnsupportedVersionError, TruncatedDataError, TrailingDataError
        ArchiveFrameError: Framing of a particular frame is broken.
    """
    reader = _Reader(data)
    magic = reader.take(4, "archive magic")
    if magic != ARCHIVE_MAGIC:
        raise BadMagicError(f"Expected archive magic {ARCHIVE_MAGIC!r}, found {magic!r}")
    version = reader.take(1, "archive header")[0]
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(version)

    frame_count = reader.varint("archive frame count")
    frames = []
    for frame_index in range(frame_count):
        try:
            size = reader.varint("frame length")
            frames.append(reader.take(size, "frame"))
        except FrameDecodeError as e:
            raise ArchiveFrameError(frame_index, e) from e

    if reader.remaining:
        raise TrailingDataError(f"{reader.remaining} unexpected bytes after frame {frame_count - 1}")
    return frames


def decode_archive(data: bytes | memoryview) -> list[DecodedFrame]:
    """Decode every frame of an archive, errors carry the frame index"""
    decoded = []
    for frame_index, frame in enumerate(split_archive(data)):
        try:
            decoded.append(decode_frame(frame))
        except FrameDecodeError as e:
            raise ArchiveFrameError(frame_index, e) from e
    return decoded


def raw_varint_size(quantized: QuantizedImage) -> int:
    """Bytes needed to store the zigzag varints of absolute lattice values, no prediction, no deflate"""
    return sum(len(encode_varints(zigzag_array(channel.valid_values))) for channel in quantized.channels)