"""Seeded synthetic corpora : forecasting scenarios with closed-form futures,
piecewise-smooth street range images for codec benchmarking and baseline
prediction sets.
"""

import math
import typing as t

import numpy as np

from lidarbox import logger
from lidarbox.constants import (
    CURRENT_STEP_INDEX,
    NUM_CANDIDATES,
    NUM_HISTORY_STEPS,
    NUM_TIMESTEPS,
    SPLIT_FRACTIONS,
    TIMESTEP_SECONDS,
    AgentType,
    ReturnIndex,
    SensorName,
    SplitTag,
)
from lidarbox.pointcloud import beam_angles
from lidarbox.range_image import RangeImage, SensorGeometry, default_geometry
from lidarbox.rawframe import RawFrame
from lidarbox.scenario import (
    AgentPrediction,
    AgentState,
    AgentTrack,
    Scenario,
    ScenarioPredictions,
    ScoredTrajectory,
)

__all__ = [
    "MOTION_KINDS",
    "split_tags",
    "constant_velocity_states",
    "constant_turn_rate_states",
    "stop_and_go_states",
    "gen_synthetic",
    "iter_frames",
    "gen_frames",
    "oracle_predictions",
    "constant_velocity_predictions",
]

MOTION_KINDS = ("cv", "ctrv", "stop")
"""Constant velocity, constant turn rate and velocity, stop and go"""

AGENT_SPEEDS = {
    AgentType.VEHICLE: (4.0, 15.0),
    AgentType.PEDESTRIAN: (0.3, 1.8),
    AgentType.CYCLIST: (2.0, 6.0),
}
"""m/s range of the initial speed per agent type"""

OCCLUSION_PROBABILITY = 0.2

CV_HYPOTHESES = (
    (1.0, 0.0, 0.4),
    (0.8, 0.0, 0.15),
    (1.2, 0.0, 0.15),
    (1.0, 0.1, 0.1),
    (1.0, -0.1, 0.1),
    (0.5, 0.0, 0.1),
)
"""Speed factor, yaw offset in radians and confidence of every constant velocity candidate"""

SENSOR_HEIGHT = 2.0
"""Metres above the ground plane"""

MAX_RANGE = 75.0

WALL_HEIGHT = 8.0

BOX_SIZE = (4.5, 1.9, 1.6)

RANGE_NOISE = 0.01

INTENSITY_NOISE = 0.02

DROPOUT_PROBABILITY = 0.03

SURFACE_INTENSITY = (0.12, 0.35, 0.8)
"""Ground, walls, boxes"""

_TIMES = (np.arange(NUM_TIMESTEPS) - CURRENT_STEP_INDEX) * TIMESTEP_SECONDS
"""Seconds relative to the current state"""


def split_tags(n_scenarios: int, rng: np.random.Generator) -> list[SplitTag]:
    """Shuffled split tags : floor(15%) val, floor(15%) test, the rest train"""
    num_val = math.floor(n_scenarios * SPLIT_FRACTIONS[SplitTag.VAL])
    num_test = math.floor(n_scenarios * SPLIT_FRACTIONS[SplitTag.TEST])
    tags = (
        [SplitTag.TRAIN] * (n_scenarios - num_val - num_test)
        + [SplitTag.VAL] * num_val
        + [SplitTag.TEST] * num_test
    )
    return [tags[i] for i in rng.permutation(n_scenarios)]


def _states(x, y, heading, velocity_x, velocity_y) -> list[AgentState]:
    columns = np.broadcast_arrays(x, y, heading, velocity_x, velocity_y)
    return [
        AgentState(x=px, y=py, heading=h, velocity_x=vx, velocity_y=vy, valid=True)
        for px, py, h, vx, vy in zip(*(column.tolist() for column in columns))
    ]


def constant_velocity_states(
    position: tuple[float, float], velocity: tuple[float, float]
) -> list[AgentState]:
    """91 states where position = position + velocity * t"""
    vx, vy = velocity
    heading = math.atan2(vy, vx)
    return _states(position[0] + vx * _TIMES, position[1] + vy * _TIMES, heading, vx, vy)


def constant_turn_rate_states(
    position: tuple[float, float], heading: float, speed: float, turn_rate: float
) -> list[AgentState]:
    """91 states on a circular arc, `turn_rate` in rad/s must be non-zero"""
    headings = heading + turn_rate * _TIMES
    radius = speed / turn_rate
    x = position[0] + radius * (np.sin(headings) - math.sin(heading))
    y = position[1] - radius * (np.cos(headings) - math.cos(heading))
    return _states(x, y, headings, speed * np.cos(headings), speed * np.sin(headings))


def stop_and_go_states(
    position: tuple[float, float], heading: float, speed: float, deceleration: float, dwell: float
) -> list[AgentState]:
    """Brake to a stop, wait `dwell` seconds then accelerate again at the same rate"""
    stop_time = speed / deceleration
    restart = stop_time + dwell
    stop_distance = speed**2 / (2 * deceleration)
    braking = _TIMES <= stop_time
    waiting = (_TIMES > stop_time) & (_TIMES <= restart)
    distance = np.select(
        [braking, waiting],
        [speed * _TIMES - deceleration * _TIMES**2 / 2, stop_distance],
        stop_distance + deceleration * (_TIMES - restart) ** 2 / 2,
    )
    speeds = np.select(
        [braking, waiting], [speed - deceleration * _TIMES, 0.0], deceleration * (_TIMES - restart)
    )
    cos_h, sin_h = math.cos(heading), math.sin(heading)
    return _states(
        position[0] + distance * cos_h,
        position[1] + distance * sin_h,
        heading,
        speeds * cos_h,
        speeds * sin_h,
    )


def _occlude(states: list[AgentState], rng: np.random.Generator) -> list[AgentState]:
    """Invalidate a short run of future states"""
    start = int(rng.integers(NUM_HISTORY_STEPS, NUM_TIMESTEPS))
    length = int(rng.integers(1, 10))
    hidden = AgentState(x=0.0, y=0.0, heading=0.0, velocity_x=0.0, velocity_y=0.0, valid=False)
    return [hidden if start <= index < start + length else state for index, state in enumerate(states)]


def _agent_track(
    scenario_index: int, agent_index: int, rng: np.random.Generator
) -> AgentTrack:
    agent_types = list(AgentType)
    agent_type = agent_types[(scenario_index + agent_index) % len(agent_types)]
    kind = MOTION_KINDS[agent_index % len(MOTION_KINDS)]
    position = (float(rng.uniform(-50, 50)), float(rng.uniform(-50, 50)))
    heading = float(rng.uniform(-math.pi, math.pi))
    speed = float(rng.uniform(*AGENT_SPEEDS[agent_type]))

    match kind:
        case "cv":
            velocity = (speed * math.cos(heading), speed * math.sin(heading))
            states = constant_velocity_states(position, velocity)
        case "ctrv":
            turn_rate = float(rng.uniform(0.05, 0.3) * rng.choice((-1.0, 1.0)))
            states = constant_turn_rate_states(position, heading, speed, turn_rate)
        case _:
            deceleration = float(rng.uniform(1.0, 3.0))
            dwell = float(rng.uniform(0.5, 2.0))
            states = stop_and_go_states(position, heading, speed, deceleration, dwell)

    if rng.random() < OCCLUSION_PROBABILITY:
        states = _occlude(states, rng)
    return AgentTrack(agent_id=f"agent-{agent_index:02d}-{kind}", agent_type=agent_type, states=states)


def gen_synthetic(seed: int, n_scenarios: int, agents_per_scene: int = 4) -> list[Scenario]:
    """Deterministic scenario corpus

    Agents cycle through constant velocity, constant turn rate and stop and go
    motion, their ids end with the motion kind. The first half of the agents
    of every scenario (at least one) are prediction targets.

    Args:
        seed (int): Random seed.
        n_scenarios (int): Number of scenarios, positive.
        agents_per_scene (int, optional): Tracks per scenario. Defaults to 4.
    """
    if n_scenarios <= 0 or agents_per_scene <= 0:
        raise ValueError("Scenario and agent counts must be positive")
    rng = np.random.default_rng(seed)
    tags = split_tags(n_scenarios, rng)
    num_targets = max(1, agents_per_scene // 2)

    corpus = []
    for scenario_index, tag in enumerate(tags):
        tracks = [_agent_track(scenario_index, agent_index, rng) for agent_index in range(agents_per_scene)]
        corpus.append(
            Scenario(
                scenario_id=f"scenario-{scenario_index:05d}",
                split_tag=tag,
                tracks=tracks,
                prediction_targets=[track.agent_id for track in tracks[:num_targets]],
            )
        )
    logger.info(f"Generated {n_scenarios} scenarios with {agents_per_scene} agents each")
    return corpus


def _scored(waypoints: np.ndarray, confidence: float) -> ScoredTrajectory:
    return ScoredTrajectory(confidence=confidence, waypoints=[tuple(point) for point in waypoints.tolist()])


def oracle_predictions(corpus: list[Scenario]) -> list[ScenarioPredictions]:
    """Ground truth futures copied into every candidate with confidence 1"""
    predictions = []
    for scenario in corpus:
        entries = []
        for track in scenario.target_tracks():
            trajectory = _scored(track.future_positions(), 1.0)
            entries.append(
                AgentPrediction(agent_id=track.agent_id, trajectories=[trajectory] * NUM_CANDIDATES)
            )
        predictions.append(ScenarioPredictions(scenario_id=scenario.scenario_id, predictions=entries))
    return predictions


def constant_velocity_predictions(corpus: list[Scenario]) -> list[ScenarioPredictions]:
    """Extrapolate the current velocity under a few speed and yaw variations"""
    future_times = _TIMES[NUM_HISTORY_STEPS:, None]
    predictions = []
    for scenario in corpus:
        entries = []
        for track in scenario.target_tracks():
            current = track.current_state
            origin = np.array([current.x, current.y])
            trajectories = []
            for factor, yaw, confidence in CV_HYPOTHESES:
                cos_y, sin_y = math.cos(yaw), math.sin(yaw)
                velocity = factor * np.array(
                    [
                        cos_y * current.velocity_x - sin_y * current.velocity_y,
                        sin_y * current.velocity_x + cos_y * current.velocity_y,
                    ]
                )
                trajectories.append(_scored(origin + future_times * velocity, confidence))
            entries.append(AgentPrediction(agent_id=track.agent_id, trajectories=trajectories))
        predictions.append(ScenarioPredictions(scenario_id=scenario.scenario_id, predictions=entries))
    return predictions


def _street_boxes(rng: np.random.Generator, half_width: float, count: int, travel: float) -> np.ndarray:
    """(count, 2, 3) lower and upper corners of parked and moving vehicles"""
    lanes = np.array([-half_width + 1.5, -3.5, 3.5, half_width - 1.5])
    length, width, height = BOX_SIZE
    centres_x = rng.uniform(-60.0, 60.0 + travel, count)
    centres_y = rng.choice(lanes, count) + rng.uniform(-0.3, 0.3, count)
    lower = np.stack([centres_x - length / 2, centres_y - width / 2, np.full(count, -SENSOR_HEIGHT)], axis=-1)
    upper = np.stack(
        [centres_x + length / 2, centres_y + width / 2, np.full(count, height - SENSOR_HEIGHT)], axis=-1
    )
    return np.stack([lower, upper], axis=1)


def _cast(directions: np.ndarray, boxes: np.ndarray, half_width: float) -> tuple[np.ndarray, np.ndarray]:
    """Distance to the first surface along every ray and the surface index hit"""
    dx, dy, dz = directions[..., 0], directions[..., 1], directions[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        ground = np.where(dz < 0, -SENSOR_HEIGHT / dz, np.inf)
        wall = np.where(dy != 0, half_width / np.abs(dy), np.inf)
    # rays pass over the walls
    wall = np.where(wall * dz <= WALL_HEIGHT - SENSOR_HEIGHT, wall, np.inf)

    inverse = 1.0 / directions
    box = np.full(dx.shape, np.inf)
    for lower, upper in boxes:
        near = lower * inverse
        far = upper * inverse
        t_near = np.minimum(near, far).max(axis=-1)
        t_far = np.maximum(near, far).min(axis=-1)
        hit = (t_near <= t_far) & (t_near > 0)
        box = np.where(hit, np.minimum(box, t_near), box)

    distances = np.stack([ground, wall, box])
    return distances.min(axis=0), distances.argmin(axis=0)


def iter_frames(
    seed: int,
    count: int,
    sensor: SensorName = SensorName.TOP,
    return_index: ReturnIndex = ReturnIndex.FIRST,
    geometry: SensorGeometry | None = None,
) -> t.Iterator[RawFrame]:
    """Piecewise-smooth street scans from a vehicle driving down a walled street

    The scene holds a ground plane, two facades and box-shaped vehicles. Range
    carries gaussian noise, pixels drop out at random and the pose translation
    follows the vehicle through the scan.
    """
    if count <= 0:
        raise ValueError("Frame count must be positive")
    rng = np.random.default_rng(seed)
    geometry = geometry or default_geometry(sensor)
    azimuth, inclination = beam_angles(geometry)
    cos_inc = np.cos(inclination)[:, None]
    directions = np.stack(
        np.broadcast_arrays(
            cos_inc * np.cos(azimuth)[None, :],
            cos_inc * np.sin(azimuth)[None, :],
            np.sin(inclination)[:, None],
        ),
        axis=-1,
    )
    directions = np.where(np.abs(directions) < 1e-12, 1e-12, directions)

    half_width = float(rng.uniform(8.0, 15.0))
    speed = float(rng.uniform(3.0, 12.0))
    yaw = float(rng.uniform(-math.pi, math.pi))
    yaw_rate = float(rng.uniform(-0.05, 0.05))
    travel = speed * TIMESTEP_SECONDS * count
    boxes = _street_boxes(rng, half_width, int(rng.integers(6, 15)), travel)
    # sweep time of every column within a frame
    sweep = np.arange(geometry.width) / geometry.width * TIMESTEP_SECONDS

    for frame_index in range(count):
        advanced = speed * TIMESTEP_SECONDS * frame_index
        shifted = boxes - np.array([advanced, 0.0, 0.0])
        ranges, surface = _cast(directions, shifted, half_width)
        ranges = ranges + rng.normal(0.0, RANGE_NOISE, ranges.shape)
        dropped = rng.random(ranges.shape) < DROPOUT_PROBABILITY
        valid = np.isfinite(ranges) & (ranges <= MAX_RANGE) & ~dropped

        intensity = np.take(SURFACE_INTENSITY, surface) + rng.normal(0.0, INTENSITY_NOISE, ranges.shape)
        intensity = np.clip(intensity, 0.0, None)
        elongation = 0.002 * np.where(valid, ranges, 0.0)

        frame_yaw = yaw + yaw_rate * TIMESTEP_SECONDS * frame_index
        heading = np.array([math.cos(frame_yaw), math.sin(frame_yaw), 0.0])
        along = advanced + speed * sweep
        pose_translation = np.broadcast_to(along[None, :, None] * heading, (*geometry.shape, 3))

        image = RangeImage(
            geometry=geometry,
            return_index=return_index,
            range=np.where(valid, ranges, 0.0),
            intensity=np.where(valid, intensity, 0.0),
            elongation=elongation,
            pose_translation=np.where(valid[..., None], pose_translation, 0.0),
            valid=valid,
        )
        yield RawFrame(image=image, rotation=(frame_yaw, 0.0, 0.0))

    logger.debug(f"Generated {count} {geometry.sensor_id.name} frames from seed {seed}")


def gen_frames(
    seed: int,
    count: int,
    sensor: SensorName = SensorName.TOP,
    return_index: ReturnIndex = ReturnIndex.FIRST,
    geometry: SensorGeometry | None = None,
) -> list[RawFrame]:
    """All frames of `iter_frames` at once"""
    return list(iter_frames(seed, count, sensor, return_index, geometry))
