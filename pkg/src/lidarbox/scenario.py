"""Motion-forecasting scenarios, prediction sets and their record files.

A track holds 91 states at 10 Hz : indices 0..10 are the history including
the current state (index 10), indices 11..90 the 8 s future.
"""

import typing as t
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, ValidationInfo, field_validator

from lidarbox._bases import BaseRecordFile
from lidarbox.constants import (
    CURRENT_STEP_INDEX,
    NUM_CANDIDATES,
    NUM_FUTURE_STEPS,
    NUM_HISTORY_STEPS,
    NUM_TIMESTEPS,
    PREDICTION_FILE_FORMAT,
    SCENARIO_FILE_FORMAT,
    AgentType,
    SplitTag,
)
from lidarbox.exceptions import RecordFormatError

__all__ = [
    "AgentState",
    "AgentTrack",
    "Scenario",
    "ScoredTrajectory",
    "AgentPrediction",
    "ScenarioPredictions",
    "ScenarioFile",
    "PredictionFile",
    "read_scenarios",
    "write_scenarios",
    "read_predictions",
    "write_predictions",
]


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class AgentState(_Record):
    x: FiniteFloat
    """Metres"""
    y: FiniteFloat
    heading: FiniteFloat
    """Radians"""
    velocity_x: FiniteFloat
    """m/s"""
    velocity_y: FiniteFloat
    valid: bool

    @property
    def speed(self) -> float:
        return float(np.hypot(self.velocity_x, self.velocity_y))


class AgentTrack(_Record):
    agent_id: str = Field(min_length=1)
    agent_type: AgentType
    states: tuple[AgentState, ...] = Field(min_length=NUM_TIMESTEPS, max_length=NUM_TIMESTEPS)

    @property
    def current_state(self) -> AgentState:
        return self.states[CURRENT_STEP_INDEX]

    def positions(self) -> np.ndarray:
        """(91, 2) x, y of every state"""
        return np.array([(state.x, state.y) for state in self.states], dtype=np.float64)

    def headings(self) -> np.ndarray:
        return np.array([state.heading for state in self.states], dtype=np.float64)

    def valid_mask(self) -> np.ndarray:
        return np.array([state.valid for state in self.states], dtype=bool)

    def future_positions(self) -> np.ndarray:
        """(80, 2) ground truth future"""
        return self.positions()[NUM_HISTORY_STEPS:]

    def future_valid(self) -> np.ndarray:
        return self.valid_mask()[NUM_HISTORY_STEPS:]

    def future_headings(self) -> np.ndarray:
        return self.headings()[NUM_HISTORY_STEPS:]


class Scenario(_Record):
    scenario_id: str = Field(min_length=1)
    split_tag: SplitTag
    tracks: tuple[AgentTrack, ...]
    prediction_targets: tuple[str, ...] = ()

    @field_validator("tracks")
    @classmethod
    def validate_unique_agents(cls, tracks: tuple[AgentTrack, ...]) -> tuple[AgentTrack, ...]:
        seen = set()
        for track in tracks:
            if track.agent_id in seen:
                raise ValueError(f"Duplicate agent_id '{track.agent_id}'")
            seen.add(track.agent_id)
        return tracks

    @field_validator("prediction_targets")
    @classmethod
    def validate_targets(cls, targets: tuple[str, ...], info: ValidationInfo) -> tuple[str, ...]:
        if len(set(targets)) != len(targets):
            raise ValueError("Prediction targets must not repeat")
        # tracks failed validation, its own error is reported
        if "tracks" not in info.data:
            return targets
        tracks = {track.agent_id: track for track in info.data["tracks"]}
        for agent_id in targets:
            if agent_id not in tracks:
                raise ValueError(f"Prediction target '{agent_id}' has no track")
            if not tracks[agent_id].current_state.valid:
                raise ValueError(f"Prediction target '{agent_id}' has an invalid current state")
        return targets

    def track(self, agent_id: str) -> AgentTrack:
        for track in self.tracks:
            if track.agent_id == agent_id:
                return track
        raise KeyError(agent_id)

    def target_tracks(self) -> list[AgentTrack]:
        return [self.track(agent_id) for agent_id in self.prediction_targets]


class ScoredTrajectory(_Record):
    confidence: float = Field(ge=0, le=1, allow_inf_nan=False)
    waypoints: tuple[tuple[FiniteFloat, FiniteFloat], ...] = Field(
        min_length=NUM_FUTURE_STEPS, max_length=NUM_FUTURE_STEPS
    )
    """x, y at every future step"""

    def as_array(self) -> np.ndarray:
        return np.array(self.waypoints, dtype=np.float64)


class AgentPrediction(_Record):
    agent_id: str = Field(min_length=1)
    trajectories: tuple[ScoredTrajectory, ...] = Field(min_length=NUM_CANDIDATES, max_length=NUM_CANDIDATES)

    def waypoints(self) -> np.ndarray:
        """(K, 80, 2)"""
        return np.stack([trajectory.as_array() for trajectory in self.trajectories])

    def confidences(self) -> np.ndarray:
        return np.array([trajectory.confidence for trajectory in self.trajectories], dtype=np.float64)


class ScenarioPredictions(_Record):
    scenario_id: str = Field(min_length=1)
    predictions: tuple[AgentPrediction, ...]


class ScenarioFile(BaseRecordFile[Scenario]):
    format_name = SCENARIO_FILE_FORMAT
    record_model = Scenario

    def record_error(self, record_index: int, field: str, message: str) -> RecordFormatError:
        return RecordFormatError(record_index, field, f"{self.path} : {message}")


class PredictionFile(BaseRecordFile[ScenarioPredictions]):
    format_name = PREDICTION_FILE_FORMAT
    record_model = ScenarioPredictions

    def record_error(self, record_index: int, field: str, message: str) -> RecordFormatError:
        return RecordFormatError(record_index, field, f"{self.path} : {message}")


def read_scenarios(path: Path | str) -> list[Scenario]:
    """Load a scenario corpus

    Raises:
        RecordFormatError: Header or a record violates the schema.
    """
    return ScenarioFile(path).read()


def write_scenarios(scenarios: t.Iterable[Scenario], path: Path | str) -> Path:
    file = ScenarioFile(path)
    file.write(scenarios)
    return file.path


def read_predictions(path: Path | str) -> list[ScenarioPredictions]:
    return PredictionFile(path).read()


def write_predictions(predictions: t.Iterable[ScenarioPredictions], path: Path | str) -> Path:
    file = PredictionFile(path)
    file.write(predictions)
    return file.path
