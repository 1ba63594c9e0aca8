"""YAML configuration : codec profiles and match thresholds.

A codec profile looks like :

```yaml
quantization:
  range_step: 0.005
  intensity_step: 0.01
deflate_level: 9
sensors:
  TOP:
    inclination_min: -0.31
    inclination_max: 0.04
```

A thresholds file :

```yaml
horizons:
  3: {lateral: 1.0, longitudinal: 2.0}
  5: {lateral: 1.8, longitudinal: 3.6}
  8: {lateral: 3.0, longitudinal: 6.0}
speed_scaling: {low_speed: 1.4, min_scale: 0.5}
```
"""

import typing as t
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lidarbox import logger
from lidarbox.constants import DEFAULT_DEFLATE_LEVEL, SensorName
from lidarbox.exceptions import ConfigurationError
from lidarbox.metrics import MatchThresholds
from lidarbox.range_image import QuantizationProfile, SensorGeometry, default_geometry

__all__ = ["InclinationOverride", "CodecProfile", "load_profile", "load_thresholds"]


class InclinationOverride(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    inclination_min: float = Field(allow_inf_nan=False)
    inclination_max: float = Field(allow_inf_nan=False)

    @model_validator(mode="after")
    def validate_span(self) -> "InclinationOverride":
        if self.inclination_min >= self.inclination_max:
            raise ValueError("inclination_min must be less than inclination_max")
        return self


class CodecProfile(BaseModel):
    """Everything `compress` needs besides the frames"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    quantization: QuantizationProfile = Field(default_factory=QuantizationProfile)
    deflate_level: int = Field(default=DEFAULT_DEFLATE_LEVEL, ge=0, le=9)
    sensors: dict[SensorName, InclinationOverride] = Field(default_factory=dict)

    @field_validator("sensors", mode="before")
    @classmethod
    def validate_sensor_names(cls, value: t.Any) -> t.Any:
        """Accept sensor names such as `TOP` as keys"""
        if not isinstance(value, dict):
            return value
        names = SensorName.map()
        resolved = {}
        for key, override in value.items():
            if isinstance(key, str) and key.upper() in names:
                key = names[key.upper()]
            resolved[key] = override
        return resolved

    def geometry(self, sensor_id: SensorName) -> SensorGeometry:
        """Geometry of a sensor with any inclination override applied"""
        geometry = default_geometry(sensor_id)
        override = self.sensors.get(SensorName(sensor_id))
        if override is None:
            return geometry
        return SensorGeometry(
            sensor_id=geometry.sensor_id,
            height=geometry.height,
            width=geometry.width,
            inclination_min=override.inclination_min,
            inclination_max=override.inclination_max,
        )


ModelT = t.TypeVar("ModelT", bound=BaseModel)


def _load(path: Path | str, model: type[ModelT]) -> ModelT:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigurationError(f"Unable to read {path} - {e}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"{path} is not valid YAML - {e}") from e

    try:
        loaded = model.model_validate(data or {})
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ConfigurationError(f"{path} : {location} - {first['msg']}") from e
    logger.debug(f"Loaded {model.__name__} from {path}")
    return loaded


def load_profile(path: Path | str | None = None) -> CodecProfile:
    """Codec profile from a YAML file, the stock profile when `path` is None

    Raises:
        ConfigurationError: Unreadable file or invalid content.
    """
    if path is None:
        return CodecProfile()
    return _load(path, CodecProfile)


def load_thresholds(path: Path | str | None = None) -> MatchThresholds:
    """Match thresholds from a YAML file, the stock thresholds when `path` is None

    Raises:
        ConfigurationError: Unreadable file or invalid content.
    """
    if path is None:
        return MatchThresholds()
    return _load(path, MatchThresholds)
