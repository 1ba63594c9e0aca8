"""Range image to point cloud conversion with per-pixel pose compensation"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lidarbox.constants import PointFrame
from lidarbox.exceptions import FrameMismatchError
from lidarbox.range_image import RangeImage, SensorGeometry

__all__ = [
    "PointCloud",
    "beam_angles",
    "spherical_to_cartesian",
    "project",
    "rotation_matrix",
    "to_world",
    "export_binary",
    "export_csv",
]

BINARY_RECORD = np.dtype([("x", "<f4"), ("y", "<f4"), ("z", "<f4"), ("intensity", "<f4")])
"""On-disk layout of a binary point export"""


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    """(N, 3) metres"""
    intensity: np.ndarray
    elongation: np.ndarray
    frame: PointFrame
    pixels: np.ndarray
    """(N, 2) row, column of the source pixel of each point"""

    def __len__(self) -> int:
        return int(self.points.shape[0])


def beam_angles(geometry: SensorGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Azimuth per column and inclination per row at pixel centres

    Column 0 looks backwards (azimuth pi) and azimuth decreases to the right.
    Row 0 sits at the top of the inclination span.
    """
    columns = np.arange(geometry.width, dtype=np.float64)
    rows = np.arange(geometry.height, dtype=np.float64)
    azimuth = np.pi - (columns + 0.5) * (2 * np.pi / geometry.width)
    span = geometry.inclination_max - geometry.inclination_min
    inclination = geometry.inclination_max - (rows + 0.5) * span / geometry.height
    return azimuth, inclination


def spherical_to_cartesian(ranges: np.ndarray, azimuth: np.ndarray, inclination: np.ndarray) -> np.ndarray:
    """(N, 3) points from range, azimuth and inclination arrays"""
    cos_phi = np.cos(inclination)
    return np.stack(
        [
            ranges * cos_phi * np.cos(azimuth),
            ranges * cos_phi * np.sin(azimuth),
            ranges * np.sin(inclination),
        ],
        axis=-1,
    )


def project(img: RangeImage) -> PointCloud:
    """One sensor-frame point per valid pixel, in row-major order"""
    azimuth, inclination = beam_angles(img.geometry)
    rows, cols = np.nonzero(img.valid)
    points = spherical_to_cartesian(img.range[rows, cols], azimuth[cols], inclination[rows])
    return PointCloud(
        points=points,
        intensity=img.intensity[rows, cols].copy(),
        elongation=img.elongation[rows, cols].copy(),
        frame=PointFrame.SENSOR,
        pixels=np.stack([rows, cols], axis=-1),
    )


def rotation_matrix(rotation: tuple[float, float, float]) -> np.ndarray:
    """Rz(yaw) @ Ry(pitch) @ Rx(roll)"""
    yaw, pitch, roll = rotation
    cy, sy = np.cos(yaw), np.sin(yaw)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cr, sr = np.cos(roll), np.sin(roll)
    rz = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cp, 0.0, sp], [0.0, 1.0, 0.0], [-sp, 0.0, cp]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cr, -sr], [0.0, sr, cr]])
    return rz @ ry @ rx


def to_world(pc: PointCloud, img: RangeImage, frame_rotation: tuple[float, float, float]) -> PointCloud:
    """Rotate by the frame rotation then translate each point by its pixel's pose

    Raises:
        FrameMismatchError: The cloud is not in the sensor frame.
    """
    if pc.frame != PointFrame.SENSOR:
        raise FrameMismatchError(f"Expected a {PointFrame.SENSOR} frame cloud, got {pc.frame}")
    translation = img.pose_translation[pc.pixels[:, 0], pc.pixels[:, 1]]
    points = pc.points @ rotation_matrix(frame_rotation).T + translation
    return PointCloud(
        points=points,
        intensity=pc.intensity,
        elongation=pc.elongation,
        frame=PointFrame.WORLD,
        pixels=pc.pixels,
    )


def export_binary(pc: PointCloud, path: Path | str) -> Path:
    """Little-endian (x, y, z, intensity) f32 records"""
    path = Path(path)
    records = np.empty(len(pc), dtype=BINARY_RECORD)
    records["x"], records["y"], records["z"] = pc.points.T
    records["intensity"] = pc.intensity
    path.write_bytes(records.tobytes())
    return path


def export_csv(pc: PointCloud, path: Path | str) -> Path:
    path = Path(path)
    table = np.column_stack([pc.points, pc.intensity, pc.elongation])
    np.savetxt(path, table, fmt="%.6f", delimiter=",", header="x,y,z,intensity,elongation", comments="")
    return path
