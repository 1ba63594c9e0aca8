from pathlib import Path

import numpy as np

from lidarbox.constants import ReturnIndex, SensorName
from lidarbox.range_image import RangeImage, default_geometry

project_dir = Path(__file__).parent.parent

assets_dir = project_dir / "assets" / "data"

SEED = 7


def random_image(
    seed: int = SEED,
    sensor: SensorName = SensorName.FRONT_LEFT,
    return_index: ReturnIndex = ReturnIndex.FIRST,
    invalid_fraction: float = 0.2,
) -> RangeImage:
    """Well-formed image with uniform random channels"""
    rng = np.random.default_rng(seed)
    geometry = default_geometry(sensor)
    shape = geometry.shape
    return RangeImage(
        geometry=geometry,
        return_index=return_index,
        range=rng.uniform(0.5, 75.0, shape),
        intensity=rng.uniform(0.0, 1.0, shape),
        elongation=rng.uniform(0.0, 0.5, shape),
        pose_translation=rng.uniform(-100.0, 100.0, (*shape, 3)),
        valid=rng.random(shape) >= invalid_fraction,
    )


def constant_image(sensor: SensorName = SensorName.TOP, value: float = 10.0) -> RangeImage:
    """Every pixel valid and every channel flat"""
    geometry = default_geometry(sensor)
    shape = geometry.shape
    return RangeImage(
        geometry=geometry,
        return_index=ReturnIndex.FIRST,
        range=np.full(shape, value),
        intensity=np.full(shape, 0.3),
        elongation=np.full(shape, 0.1),
        pose_translation=np.full((*shape, 3), 1.5),
        valid=np.ones(shape, dtype=bool),
    )


def with_invalid_noise(img: RangeImage, seed: int = SEED) -> RangeImage:
    """Same image with garbage written into every invalid pixel"""
    rng = np.random.default_rng(seed)
    invalid = ~img.valid

    def scramble(plane: np.ndarray) -> np.ndarray:
        noise = rng.uniform(-1e6, 1e6, plane.shape)
        mask = invalid if plane.ndim == 2 else invalid[..., None]
        return np.where(mask, noise, plane)

    return RangeImage(
        geometry=img.geometry,
        return_index=img.return_index,
        range=scramble(img.range),
        intensity=scramble(img.intensity),
        elongation=scramble(img.elongation),
        pose_translation=scramble(img.pose_translation),
        valid=img.valid,
    )
