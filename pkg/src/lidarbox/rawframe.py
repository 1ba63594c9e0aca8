"""Raw frame interchange format (`.lrf`), the uncompressed input of `lidarbox compress`.

    magic "WLRR" | version u8 | sensor_id u8 | return_index u8 | plane dtype u8 (4 = f32, 8 = f64)
    | height u16 | width u16 | inclination_min f64 | inclination_max f64 | yaw, pitch, roll f64
    | 6 planes of h*w little-endian floats in channel order | validity bitmap, row-major, LSB first
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from lidarbox.constants import (
    FORMAT_VERSION,
    NUM_CHANNELS,
    RAW_FRAME_EXTENSION,
    RAW_FRAME_MAGIC,
    Channel,
    ReturnIndex,
    SensorName,
)
from lidarbox.exceptions import RawFrameFormatError
from lidarbox.range_image import RangeImage, SensorGeometry

__all__ = [
    "RawFrame",
    "pack_raw_frame",
    "unpack_raw_frame",
    "read_raw_frame",
    "write_raw_frame",
    "list_raw_frames",
]

_RAW_HEADER = struct.Struct("<4sBBBBHH2d3d")

_DTYPES = {4: np.dtype("<f4"), 8: np.dtype("<f8")}


@dataclass(frozen=True, eq=False)
class RawFrame:
    image: RangeImage
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0)


def pack_raw_frame(
    img: RangeImage,
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0),
    dtype: np.dtype | str = "<f4",
) -> bytes:
    dtype = np.dtype(dtype).newbyteorder("<")
    if dtype.itemsize not in _DTYPES or dtype.kind != "f":
        raise ValueError(f"Planes are stored as f32 or f64 not {dtype}")
    geometry = img.geometry
    header = _RAW_HEADER.pack(
        RAW_FRAME_MAGIC,
        FORMAT_VERSION,
        int(geometry.sensor_id),
        int(img.return_index),
        dtype.itemsize,
        geometry.height,
        geometry.width,
        geometry.inclination_min,
        geometry.inclination_max,
        *rotation,
    )
    planes = [plane.astype(dtype).tobytes() for plane in img.channels()]
    bitmap = np.packbits(img.valid.ravel(), bitorder="little").tobytes()
    return b"".join([header, *planes, bitmap])


def unpack_raw_frame(data: bytes, source: str = "<bytes>") -> RawFrame:
    """Parse raw frame bytes

    Raises:
        RawFrameFormatError: Bad magic, unknown version or dtype, inconsistent geometry or wrong length.
    """
    if len(data) < _RAW_HEADER.size:
        raise RawFrameFormatError(f"{source} : too short for a raw frame header")
    (
        magic,
        version,
        sensor_id,
        return_index,
        itemsize,
        height,
        width,
        inclination_min,
        inclination_max,
        *rotation,
    ) = _RAW_HEADER.unpack_from(data)

    if magic != RAW_FRAME_MAGIC:
        raise RawFrameFormatError(f"{source} : not a raw frame (magic {magic!r})")
    if version != FORMAT_VERSION:
        raise RawFrameFormatError(f"{source} : unsupported raw frame version {version}")
    if itemsize not in _DTYPES:
        raise RawFrameFormatError(f"{source} : unknown plane dtype code {itemsize}")
    try:
        geometry = SensorGeometry(
            sensor_id=SensorName(sensor_id),
            height=height,
            width=width,
            inclination_min=inclination_min,
            inclination_max=inclination_max,
        )
        return_index = ReturnIndex(return_index)
    except (ValueError, ValidationError) as e:
        raise RawFrameFormatError(f"{source} : invalid geometry - {e}") from e

    num_pixels = height * width
    plane_size = num_pixels * itemsize
    expected = _RAW_HEADER.size + NUM_CHANNELS * plane_size + (num_pixels + 7) // 8
    if len(data) != expected:
        raise RawFrameFormatError(f"{source} : expected {expected} bytes, found {len(data)}")

    offset = _RAW_HEADER.size
    planes = []
    for _ in Channel:
        plane = np.frombuffer(data, dtype=_DTYPES[itemsize], count=num_pixels, offset=offset)
        planes.append(plane.astype(np.float64).reshape(height, width))
        offset += plane_size
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8, offset=offset), bitorder="little")
    valid = bits[:num_pixels].astype(bool).reshape(height, width)

    image = RangeImage(
        geometry=geometry,
        return_index=return_index,
        range=planes[Channel.RANGE],
        intensity=planes[Channel.INTENSITY],
        elongation=planes[Channel.ELONGATION],
        pose_translation=np.stack(planes[Channel.POSE_TX :], axis=-1),
        valid=valid,
    )
    return RawFrame(image=image, rotation=tuple(rotation))


def write_raw_frame(
    path: Path | str,
    img: RangeImage,
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0),
    dtype: np.dtype | str = "<f4",
) -> Path:
    path = Path(path)
    path.write_bytes(pack_raw_frame(img, rotation, dtype))
    return path


def read_raw_frame(path: Path | str) -> RawFrame:
    path = Path(path)
    return unpack_raw_frame(path.read_bytes(), source=str(path))


def list_raw_frames(directory: Path | str) -> list[Path]:
    """Raw frame files of a directory in name order"""
    return sorted(Path(directory).glob(f"*{RAW_FRAME_EXTENSION}"))
