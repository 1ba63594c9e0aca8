"""In-memory range-image data model, channel semantics, validity masking and
quantization onto integer lattices.

```python
import numpy as np
from lidarbox.range_image import quantize_channel, dequantize_channel

q = quantize_channel(np.array([[10.0032]]), np.array([[True]]), 0.005)
print(q.values)  # [[2001]]
print(dequantize_channel(q))  # [[10.005]]
```
"""

import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lidarbox.constants import (
    DEFAULT_ELONGATION_STEP,
    DEFAULT_INCLINATIONS,
    DEFAULT_INTENSITY_STEP,
    DEFAULT_POSE_ROTATION_STEP,
    DEFAULT_POSE_TRANSLATION_STEP,
    DEFAULT_RANGE_STEP,
    MAX_QUANTIZED_MAGNITUDE,
    SIDE_SENSOR_SHAPE,
    TOP_SENSOR_SHAPE,
    Channel,
    ReturnIndex,
    SensorName,
)
from lidarbox.exceptions import QuantizationError
from lidarbox.helpers import assert_instance, first_true_index, round_half_away_from_zero

__all__ = [
    "SensorGeometry",
    "QuantizationProfile",
    "RangeImage",
    "QuantizedChannel",
    "QuantizedImage",
    "Violation",
    "default_geometry",
    "sensor_shape",
    "quantize_channel",
    "dequantize_channel",
    "quantize_image",
    "dequantize_image",
    "quantize_rotation",
    "validate_image",
]


def sensor_shape(sensor_id: SensorName) -> tuple[int, int]:
    """(height, width) every range image of that sensor has"""
    return TOP_SENSOR_SHAPE if sensor_id == SensorName.TOP else SIDE_SENSOR_SHAPE


class SensorGeometry(BaseModel):
    """Pixel grid and beam inclination span of one sensor"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sensor_id: SensorName
    height: int
    width: int
    inclination_min: float
    """Radians, inclination of the bottom row edge"""
    inclination_max: float
    """Radians, inclination of the top row edge"""

    @model_validator(mode="after")
    def validate_geometry(self) -> "SensorGeometry":
        if (self.height, self.width) != sensor_shape(self.sensor_id):
            raise ValueError(
                f"{self.sensor_id.name} sensor must be {sensor_shape(self.sensor_id)} "
                f"not {(self.height, self.width)}"
            )
        if not (math.isfinite(self.inclination_min) and math.isfinite(self.inclination_max)):
            raise ValueError("Inclination bounds must be finite")
        if self.inclination_min >= self.inclination_max:
            raise ValueError("inclination_min must be less than inclination_max")
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)


def default_geometry(sensor_id: SensorName) -> SensorGeometry:
    """Geometry with the placeholder inclination bounds"""
    height, width = sensor_shape(sensor_id)
    inclination_min, inclination_max = DEFAULT_INCLINATIONS[SensorName(sensor_id)]
    return SensorGeometry(
        sensor_id=sensor_id,
        height=height,
        width=width,
        inclination_min=inclination_min,
        inclination_max=inclination_max,
    )


class QuantizationProfile(BaseModel):
    """Lattice steps per channel"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    range_step: float = Field(default=DEFAULT_RANGE_STEP, gt=0, allow_inf_nan=False)
    intensity_step: float = Field(default=DEFAULT_INTENSITY_STEP, gt=0, allow_inf_nan=False)
    elongation_step: float = Field(default=DEFAULT_ELONGATION_STEP, gt=0, allow_inf_nan=False)
    pose_translation_step: float = Field(default=DEFAULT_POSE_TRANSLATION_STEP, gt=0, allow_inf_nan=False)
    pose_rotation_step: float = Field(default=DEFAULT_POSE_ROTATION_STEP, gt=0, allow_inf_nan=False)

    def channel_steps(self) -> tuple[float, ...]:
        """Steps in `Channel` order"""
        return (
            self.range_step,
            self.intensity_step,
            self.elongation_step,
            self.pose_translation_step,
            self.pose_translation_step,
            self.pose_translation_step,
        )


def _readonly(array: np.ndarray, dtype) -> np.ndarray:
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RangeImage:
    """One sensor, one return, one frame.

    Grids are stored read-only. Construction performs no validation so that
    malformed images can still be reported on by `validate_image`.
    """

    geometry: SensorGeometry
    return_index: ReturnIndex
    range: np.ndarray
    intensity: np.ndarray
    elongation: np.ndarray
    pose_translation: np.ndarray
    """(h, w, 3) vehicle position when each pixel was captured"""
    valid: np.ndarray

    def __post_init__(self):
        assert_instance(self.geometry, SensorGeometry, "geometry")
        object.__setattr__(self, "return_index", ReturnIndex(self.return_index))
        for name in ("range", "intensity", "elongation", "pose_translation"):
            object.__setattr__(self, name, _readonly(getattr(self, name), np.float64))
        object.__setattr__(self, "valid", _readonly(self.valid, bool))

    @property
    def shape(self) -> tuple[int, int]:
        return self.geometry.shape

    @property
    def num_valid(self) -> int:
        return int(np.count_nonzero(self.valid))

    def channel(self, channel: Channel) -> np.ndarray:
        """Single (h, w) plane of a channel"""
        match Channel(channel):
            case Channel.RANGE:
                return self.range
            case Channel.INTENSITY:
                return self.intensity
            case Channel.ELONGATION:
                return self.elongation
            case other:
                return self.pose_translation[..., other - Channel.POSE_TX]

    def channels(self) -> list[np.ndarray]:
        return [self.channel(channel) for channel in Channel]


@dataclass(frozen=True)
class QuantizedChannel:
    """Integer lattice representation of one channel"""

    values: np.ndarray
    step: float
    valid: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values, np.int64))
        object.__setattr__(self, "valid", _readonly(self.valid, bool))
        object.__setattr__(self, "step", float(self.step))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantizedChannel):
            return NotImplemented
        return (
            self.step == other.step
            and np.array_equal(self.valid, other.valid)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @property
    def valid_values(self) -> np.ndarray:
        """Valid entries in row-major scan order"""
        return self.values[self.valid]


@dataclass(frozen=True, eq=False)
class QuantizedImage:
    """All six channels of a range image on their lattices plus the frame rotation"""

    geometry: SensorGeometry
    return_index: ReturnIndex
    channels: tuple[QuantizedChannel, ...]
    valid: np.ndarray
    rotation: tuple[int, int, int] = (0, 0, 0)
    """Yaw, pitch, roll as multiples of `rotation_step`"""
    rotation_step: float = DEFAULT_POSE_ROTATION_STEP

    @property
    def frame_rotation(self) -> tuple[float, float, float]:
        """Dequantized yaw, pitch, roll in radians"""
        return tuple(value * self.rotation_step for value in self.rotation)


@dataclass(frozen=True)
class Violation:
    """A broken RangeImage invariant"""

    invariant: str
    pixel: tuple[int, int] | None = None
    detail: str = field(default="")

    def __str__(self) -> str:
        location = f" at pixel {self.pixel}" if self.pixel is not None else ""
        return f"{self.invariant}{location}{' - ' + self.detail if self.detail else ''}"


def quantize_channel(channel: np.ndarray, mask: np.ndarray, step: float) -> QuantizedChannel:
    """Map valid entries to `round_half_away_from_zero(v / step)`, invalid ones to 0

    Raises:
        QuantizationError: Non-positive step, shape mismatch, non-finite or out of range valid entry.
    """
    if not (step > 0 and math.isfinite(step)):
        raise QuantizationError(f"Quantization step must be a positive finite number not {step!r}")

    channel = np.asarray(channel, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if channel.shape != mask.shape:
        raise QuantizationError(f"Channel shape {channel.shape} does not match mask shape {mask.shape}")

    non_finite = mask & ~np.isfinite(channel)
    if non_finite.any():
        pixel = first_true_index(non_finite)
        raise QuantizationError(f"Non-finite value at valid pixel {pixel}", pixel=pixel)

    scaled = np.where(mask, channel / step, 0.0)
    overflow = np.abs(scaled) >= MAX_QUANTIZED_MAGNITUDE
    if overflow.any():
        pixel = first_true_index(overflow)
        raise QuantizationError(f"Value at pixel {pixel} overflows the lattice at step {step}", pixel=pixel)

    return QuantizedChannel(values=round_half_away_from_zero(scaled).astype(np.int64), step=step, valid=mask)


def dequantize_channel(q: QuantizedChannel) -> np.ndarray:
    """Valid entries become `values * step`, invalid entries 0.0"""
    return np.where(q.valid, q.values.astype(np.float64) * q.step, 0.0)


def quantize_rotation(rotation: tuple[float, float, float], step: float) -> tuple[int, int, int]:
    """Snap a yaw, pitch, roll triple to the rotation lattice"""
    values = np.asarray(rotation, dtype=np.float64)
    if values.shape != (3,) or not np.isfinite(values).all():
        raise QuantizationError(f"Frame rotation must be three finite angles not {rotation!r}")
    return tuple(int(v) for v in round_half_away_from_zero(values / step))


def quantize_image(
    img: RangeImage,
    profile: QuantizationProfile | None = None,
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> QuantizedImage:
    """Quantize all six channels of an image under one profile"""
    profile = profile or QuantizationProfile()
    channels = tuple(
        quantize_channel(plane, img.valid, step)
        for plane, step in zip(img.channels(), profile.channel_steps(), strict=True)
    )
    return QuantizedImage(
        geometry=img.geometry,
        return_index=img.return_index,
        channels=channels,
        valid=img.valid,
        rotation=quantize_rotation(rotation, profile.pose_rotation_step),
        rotation_step=profile.pose_rotation_step,
    )


def dequantize_image(quantized: QuantizedImage) -> RangeImage:
    """RangeImage holding the lattice values of every channel"""
    planes = [dequantize_channel(channel) for channel in quantized.channels]
    return RangeImage(
        geometry=quantized.geometry,
        return_index=quantized.return_index,
        range=planes[Channel.RANGE],
        intensity=planes[Channel.INTENSITY],
        elongation=planes[Channel.ELONGATION],
        pose_translation=np.stack(planes[Channel.POSE_TX :], axis=-1),
        valid=quantized.valid,
    )


def _pixel_violations(invariant: str, broken: np.ndarray) -> list[Violation]:
    return [
        Violation(invariant=invariant, pixel=(int(row), int(col))) for row, col in np.argwhere(broken)
    ]


def validate_image(img: RangeImage) -> list[Violation]:
    """Every RangeImage invariant that does not hold. Empty when the image is well formed."""
    expected = img.geometry.shape
    violations = []
    grids = {
        "range": img.range,
        "intensity": img.intensity,
        "elongation": img.elongation,
        "valid": img.valid,
    }
    for name, grid in grids.items():
        if grid.shape != expected:
            violations.append(
                Violation(
                    invariant="dimension mismatch", detail=f"{name} is {grid.shape}, expected {expected}"
                )
            )
    if img.pose_translation.shape != (*expected, 3):
        violations.append(
            Violation(
                invariant="dimension mismatch",
                detail=f"pose_translation is {img.pose_translation.shape}, expected {(*expected, 3)}",
            )
        )
    if violations:
        # Per-pixel checks need aligned grids
        return violations

    valid = img.valid
    with np.errstate(invalid="ignore"):
        violations.extend(
            _pixel_violations("range > 0", valid & ~(np.isfinite(img.range) & (img.range > 0)))
        )
        violations.extend(
            _pixel_violations("intensity >= 0", valid & ~(np.isfinite(img.intensity) & (img.intensity >= 0)))
        )
        violations.extend(
            _pixel_violations(
                "elongation >= 0", valid & ~(np.isfinite(img.elongation) & (img.elongation >= 0))
            )
        )
        violations.extend(
            _pixel_violations(
                "pose_translation finite", valid & ~np.isfinite(img.pose_translation).all(axis=-1)
            )
        )
    return violations
