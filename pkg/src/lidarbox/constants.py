"""This module stores constant variables"""

import os
from enum import IntEnum, StrEnum

from lidarbox import logger


class SensorName(IntEnum):
    """LiDAR sensors mapped to the ids written into frame headers"""

    TOP = 1
    FRONT_LEFT = 2
    FRONT_RIGHT = 3
    SIDE_LEFT = 4
    SIDE_RIGHT = 5

    @classmethod
    def map(cls) -> dict[str, int]:
        """Sensor names mapped to their int representatives"""
        resp = {}
        for entry in cls:
            resp[entry.name] = entry.value
        return resp


class ReturnIndex(IntEnum):
    """Which LiDAR pulse return a range image holds"""

    FIRST = 0
    SECOND = 1


class Channel(IntEnum):
    """Range-image channels in container order"""

    RANGE = 0
    INTENSITY = 1
    ELONGATION = 2
    POSE_TX = 3
    POSE_TY = 4
    POSE_TZ = 5


class PointFrame(StrEnum):
    """Coordinate frame of a point cloud"""

    SENSOR = "sensor"
    WORLD = "world"


class AgentType(StrEnum):
    VEHICLE = "vehicle"
    PEDESTRIAN = "pedestrian"
    CYCLIST = "cyclist"


class SplitTag(StrEnum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


CHANNEL_NAMES = tuple(channel.name.lower() for channel in Channel)
"""range, intensity, elongation, pose_tx, pose_ty, pose_tz"""

NUM_CHANNELS = len(Channel)

TOP_SENSOR_SHAPE = (64, 2650)
"""Height and width of the top sensor range image"""

SIDE_SENSOR_SHAPE = (116, 150)
"""Height and width of every non-top sensor range image"""

DEFAULT_INCLINATIONS: dict[SensorName, tuple[float, float]] = {
    SensorName.TOP: (-0.31, 0.04),
    SensorName.FRONT_LEFT: (-1.0, 0.3),
    SensorName.FRONT_RIGHT: (-1.0, 0.3),
    SensorName.SIDE_LEFT: (-1.0, 0.3),
    SensorName.SIDE_RIGHT: (-1.0, 0.3),
}
"""Placeholder beam inclination bounds in radians, overridable via profile"""

# Quantization

DEFAULT_RANGE_STEP = 0.005
"""Metres"""

DEFAULT_INTENSITY_STEP = 0.01

DEFAULT_ELONGATION_STEP = 0.01

DEFAULT_POSE_TRANSLATION_STEP = 0.0001
"""Metres"""

DEFAULT_POSE_ROTATION_STEP = 0.001
"""Radians"""

MAX_QUANTIZED_MAGNITUDE = 2**62
"""Lattice values must stay clear of int64 overflow after delta prediction"""

# Container

FRAME_MAGIC = b"WLRF"

ARCHIVE_MAGIC = b"WLRA"

FORMAT_VERSION = 1

DEFAULT_DEFLATE_LEVEL = 6

MAX_DIMENSION = 2**16 - 1
"""Height and width are stored as u16"""

MAX_VARINT_BYTES = 10
"""A 64-bit value never needs more than 10 base-128 groups"""

RAW_FRAME_MAGIC = b"WLRR"

RAW_FRAME_EXTENSION = ".lrf"

RAW_BYTES_PER_PIXEL = NUM_CHANNELS * 4
"""Raw-float accounting baseline : 6 channels x 32-bit float"""

# Motion forecasting

TIMESTEP_SECONDS = 0.1

NUM_HISTORY_STEPS = 11
"""10 past states plus the current one"""

NUM_FUTURE_STEPS = 80

NUM_TIMESTEPS = NUM_HISTORY_STEPS + NUM_FUTURE_STEPS

CURRENT_STEP_INDEX = NUM_HISTORY_STEPS - 1

NUM_CANDIDATES = 6
"""K trajectories per prediction target"""

HORIZON_SECONDS = (3, 5, 8)

HORIZON_STEPS = {3: 30, 5: 50, 8: 80}
"""Horizon in seconds mapped to the number of future steps"""

SPLIT_FRACTIONS = {SplitTag.TRAIN: 0.70, SplitTag.VAL: 0.15, SplitTag.TEST: 0.15}

DEFAULT_LATERAL_THRESHOLDS = {3: 1.0, 5: 1.8, 8: 3.0}

DEFAULT_LONGITUDINAL_THRESHOLDS = {3: 2.0, 5: 3.6, 8: 6.0}

DEFAULT_LOW_SPEED = 1.4
"""m/s at and above which thresholds are not scaled down"""

DEFAULT_MIN_SCALE = 0.5

SCENARIO_FILE_FORMAT = "lidarbox-scenarios"

PREDICTION_FILE_FORMAT = "lidarbox-predictions"

RECORD_FILE_VERSION = 1

# Runtime

ENVIRONMENT_WORKERS_KEY = "LIDARBOX_WORKERS"
"""User declares default worker count as environment variable using this key"""

DEFAULT_WORKERS = int(os.getenv(ENVIRONMENT_WORKERS_KEY) or os.cpu_count() or 1)
"""Frame-level worker pool size"""

logger.debug(f"Default worker count - {DEFAULT_WORKERS}")
