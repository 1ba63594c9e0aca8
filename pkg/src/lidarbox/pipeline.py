"""Directory level compress and decompress built on the codec and the worker pool"""

import time
import typing as t
from pathlib import Path

from lidarbox import logger
from lidarbox.codec import (
    ArchiveFrameError,
    DecodedFrame,
    FrameDecodeError,
    decode_frame,
    encode_archive,
    encode_frame,
    frame_section_sizes,
    split_archive,
)
from lidarbox.config import CodecProfile
from lidarbox.constants import RAW_BYTES_PER_PIXEL, RAW_FRAME_EXTENSION, PointFrame
from lidarbox.exceptions import EmptyCorpusError, InvalidImageError
from lidarbox.models import CompressionStats
from lidarbox.parallel import ordered_map
from lidarbox.pointcloud import export_binary, export_csv, project, to_world
from lidarbox.range_image import validate_image
from lidarbox.rawframe import list_raw_frames, read_raw_frame, write_raw_frame

__all__ = [
    "compress_directory",
    "decompress_archive",
    "decode_archive_parallel",
    "archive_stats",
    "frame_filename",
]

POINT_EXPORTERS = {"binary": (export_binary, ".bin"), "csv": (export_csv, ".csv")}


def frame_filename(index: int, extension: str = RAW_FRAME_EXTENSION) -> str:
    return f"frame-{index:05d}{extension}"


def _compress_one(item: tuple[Path, CodecProfile]) -> tuple[bytes, int]:
    path, profile = item
    raw = read_raw_frame(path)
    violations = validate_image(raw.image)
    if violations:
        raise InvalidImageError(str(path), [str(violation) for violation in violations])
    encoded = encode_frame(
        raw.image, profile.quantization, rotation=raw.rotation, level=profile.deflate_level
    )
    logger.debug(f"{path.name} : {len(encoded)} bytes")
    return encoded, raw.image.geometry.height * raw.image.geometry.width


def _archive_overhead(archive: bytes, frames: list[bytes]) -> int:
    return len(archive) - sum(len(frame) for frame in frames)


def compress_directory(
    input_dir: Path | str, profile: CodecProfile | None = None, workers: int | None = None
) -> tuple[bytes, CompressionStats]:
    """Encode every raw frame of a directory, in name order, into one archive

    Raises:
        EmptyCorpusError: The directory holds no raw frames.
        RawFrameFormatError: A raw frame does not parse.
        InvalidImageError: A raw frame breaks the range image invariants.
        QuantizationError: A frame cannot be quantized.
    """
    profile = profile or CodecProfile()
    paths = list_raw_frames(input_dir)
    if not paths:
        raise EmptyCorpusError(f"no frames found in {input_dir}")

    started = time.perf_counter()
    results = ordered_map(_compress_one, [(path, profile) for path in paths], workers)
    frames = [encoded for encoded, _ in results]
    archive = encode_archive(frames)
    stats = CompressionStats(
        frames=len(frames),
        raw_bytes=sum(pixels for _, pixels in results) * RAW_BYTES_PER_PIXEL,
        compressed_bytes=len(archive),
        header_bytes=_archive_overhead(archive, frames),
    )
    for frame in frames:
        stats.add_sections(frame_section_sizes(frame))
    stats.wall_time_s = time.perf_counter() - started
    logger.info(f"Compressed {stats.frames} frames at ratio {stats.ratio:.2f}")
    return archive, stats


def _decode_one(item: tuple[int, bytes]) -> DecodedFrame:
    index, frame = item
    try:
        return decode_frame(frame)
    except FrameDecodeError as e:
        raise ArchiveFrameError(index, e) from e


def decode_archive_parallel(data: bytes, workers: int | None = None) -> list[DecodedFrame]:
    """`decode_archive` spread over the worker pool"""
    return ordered_map(_decode_one, list(enumerate(split_archive(data))), workers)


def decompress_archive(
    data: bytes,
    output_dir: Path | str,
    profile: CodecProfile | None = None,
    workers: int | None = None,
    points: bool = False,
    point_format: t.Literal["binary", "csv"] = "binary",
    point_frame: PointFrame = PointFrame.SENSOR,
) -> list[Path]:
    """Write every frame of an archive as a f64 raw frame, optionally with its point cloud

    Planes are written as f64 so that re-encoding with the same profile
    reproduces the archive byte for byte.

    Returns:
        list[Path]: Written files
    """
    profile = profile or CodecProfile()
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    exporter, extension = POINT_EXPORTERS[point_format]

    written = []
    for index, frame in enumerate(decode_archive_parallel(data, workers)):
        image = frame.to_range_image(profile.geometry(frame.header.sensor_id))
        written.append(
            write_raw_frame(output_dir / frame_filename(index), image, frame.frame_rotation, dtype="<f8")
        )
        if points:
            cloud = project(image)
            if PointFrame(point_frame) == PointFrame.WORLD:
                cloud = to_world(cloud, image, frame.frame_rotation)
            written.append(exporter(cloud, output_dir / frame_filename(index, extension)))

    logger.info(f"Decompressed {len(written)} files into {output_dir}")
    return written


def archive_stats(data: bytes, workers: int | None = None) -> CompressionStats:
    """CompressionStats of an existing archive, timing a full decode"""
    started = time.perf_counter()
    frames = split_archive(data)
    decoded = decode_archive_parallel(data, workers)
    stats = CompressionStats(
        frames=len(frames),
        raw_bytes=sum(frame.header.num_pixels for frame in decoded) * RAW_BYTES_PER_PIXEL,
        compressed_bytes=len(data),
        header_bytes=_archive_overhead(data, frames),
    )
    for frame in decoded:
        stats.add_sections(frame.section_sizes)
    stats.wall_time_s = time.perf_counter() - started
    return stats
