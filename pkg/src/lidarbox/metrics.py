"""Motion-forecasting metrics : minADE, Miss Rate and mAP per agent type at
the 3 s, 5 s and 8 s horizons, plus report rendering.

Trajectory arrays follow the (K, steps, 2) convention, ground truth (steps, 2).
A horizon of `h` seconds is evaluated at future index `HORIZON_STEPS[h] - 1`.
"""

import typing as t
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lidarbox import logger
from lidarbox.constants import (
    DEFAULT_LATERAL_THRESHOLDS,
    DEFAULT_LONGITUDINAL_THRESHOLDS,
    DEFAULT_LOW_SPEED,
    DEFAULT_MIN_SCALE,
    HORIZON_SECONDS,
    HORIZON_STEPS,
    AgentType,
    SplitTag,
)
from lidarbox.exceptions import DanglingReferenceError
from lidarbox.helpers import assert_membership
from lidarbox.scenario import Scenario, ScenarioPredictions

__all__ = [
    "HorizonThresholds",
    "SpeedScaling",
    "MatchThresholds",
    "ForecastSample",
    "MetricsRow",
    "MetricsSummary",
    "MetricsReport",
    "min_ade",
    "is_match",
    "miss_rate",
    "average_precision",
    "mean_average_precision",
    "build_samples",
    "evaluate",
    "format_table",
    "format_summary_table",
]


class HorizonThresholds(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    lateral: float = Field(gt=0, allow_inf_nan=False)
    """Metres, across the ground truth heading"""
    longitudinal: float = Field(gt=0, allow_inf_nan=False)
    """Metres, along the ground truth heading"""


class SpeedScaling(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    low_speed: float = Field(default=DEFAULT_LOW_SPEED, gt=0, allow_inf_nan=False)
    """m/s at and above which thresholds apply unscaled"""
    min_scale: float = Field(default=DEFAULT_MIN_SCALE, gt=0, le=1)
    """Threshold multiplier for an agent at rest"""


def _default_horizons() -> dict[int, HorizonThresholds]:
    return {
        horizon: HorizonThresholds(
            lateral=DEFAULT_LATERAL_THRESHOLDS[horizon],
            longitudinal=DEFAULT_LONGITUDINAL_THRESHOLDS[horizon],
        )
        for horizon in HORIZON_SECONDS
    }


class MatchThresholds(BaseModel):
    """Lateral and longitudinal match thresholds per horizon with low-speed scaling"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    horizons: dict[int, HorizonThresholds] = Field(default_factory=_default_horizons)
    speed_scaling: SpeedScaling = Field(default_factory=SpeedScaling)

    @model_validator(mode="after")
    def validate_horizons(self) -> "MatchThresholds":
        if sorted(self.horizons) != list(HORIZON_SECONDS):
            raise ValueError(f"Thresholds are needed for exactly the horizons {HORIZON_SECONDS}")
        ordered = [self.horizons[horizon] for horizon in HORIZON_SECONDS]
        for shorter, longer in zip(ordered, ordered[1:]):
            if longer.lateral < shorter.lateral or longer.longitudinal < shorter.longitudinal:
                raise ValueError("Thresholds must not decrease with the horizon")
        return self

    def scale(self, speed: float) -> float:
        """min_scale at rest rising linearly to 1 at low_speed"""
        scaling = self.speed_scaling
        if speed >= scaling.low_speed:
            return 1.0
        fraction = max(speed, 0.0) / scaling.low_speed
        return scaling.min_scale + (1.0 - scaling.min_scale) * fraction


def _check_horizon(horizon: int) -> int:
    assert_membership(horizon, HORIZON_SECONDS, "Horizon")
    return HORIZON_STEPS[horizon]


def min_ade(
    trajectories: np.ndarray,
    gt: np.ndarray,
    horizon_steps: int,
    gt_valid: np.ndarray | None = None,
) -> float | None:
    """Best mean displacement over the first `horizon_steps` future steps

    Args:
        trajectories (np.ndarray): (K, steps, 2) candidates.
        gt (np.ndarray): (steps, 2) ground truth.
        horizon_steps (int): One of 30, 50, 80.
        gt_valid (np.ndarray, optional): (steps,) validity, invalid steps are skipped.

    Returns:
        float | None: Metres, None when no ground truth step is valid within the horizon
    """
    assert_membership(horizon_steps, HORIZON_STEPS.values(), "Horizon steps")
    trajectories = np.asarray(trajectories, dtype=np.float64)[:, :horizon_steps]
    gt = np.asarray(gt, dtype=np.float64)[:horizon_steps]
    if gt_valid is None:
        valid = np.ones(len(gt), dtype=bool)
    else:
        valid = np.asarray(gt_valid, dtype=bool)[:horizon_steps]
    if not valid.any():
        return None
    errors = np.linalg.norm(trajectories[:, valid] - gt[valid], axis=-1)
    return float(errors.mean(axis=-1).min())


def _match_mask(
    points: np.ndarray, gt_point: np.ndarray, gt_heading: float, limits: HorizonThresholds, scale: float
) -> np.ndarray:
    displacement = np.asarray(points, dtype=np.float64) - np.asarray(gt_point, dtype=np.float64)
    cos_h, sin_h = np.cos(gt_heading), np.sin(gt_heading)
    longitudinal = displacement[..., 0] * cos_h + displacement[..., 1] * sin_h
    lateral = -displacement[..., 0] * sin_h + displacement[..., 1] * cos_h
    return (np.abs(longitudinal) <= scale * limits.longitudinal) & (np.abs(lateral) <= scale * limits.lateral)


def is_match(
    pred_point: t.Sequence[float],
    gt_point: t.Sequence[float],
    gt_heading: float,
    horizon: int,
    initial_speed: float,
    thresholds: MatchThresholds | None = None,
) -> bool:
    """Whether a predicted position lies within the scaled thresholds of the ground truth

    The displacement is split along and across the ground truth heading.
    """
    _check_horizon(horizon)
    thresholds = thresholds or MatchThresholds()
    return bool(
        _match_mask(
            pred_point, gt_point, gt_heading, thresholds.horizons[horizon], thresholds.scale(initial_speed)
        )
    )


@dataclass(frozen=True, eq=False)
class ForecastSample:
    """One prediction target aligned with its ground truth"""

    scenario_id: str
    agent_id: str
    agent_type: AgentType
    trajectories: np.ndarray
    """(K, 80, 2)"""
    confidences: np.ndarray
    gt: np.ndarray
    """(80, 2) future positions"""
    gt_valid: np.ndarray
    gt_heading: np.ndarray
    initial_speed: float

    def evaluable(self, horizon: int) -> bool:
        """The ground truth is valid at the horizon step"""
        return bool(self.gt_valid[HORIZON_STEPS[horizon] - 1])

    def candidate_matches(self, horizon: int, thresholds: MatchThresholds) -> np.ndarray:
        """(K,) IsMatch of every candidate at the horizon step"""
        index = HORIZON_STEPS[horizon] - 1
        return _match_mask(
            self.trajectories[:, index],
            self.gt[index],
            float(self.gt_heading[index]),
            thresholds.horizons[horizon],
            thresholds.scale(self.initial_speed),
        )

    def top_detection(self, horizon: int, thresholds: MatchThresholds) -> tuple[float, bool]:
        """Highest confidence and whether it matches

        Candidates tied at the highest confidence count as one detection, a hit
        when any of them matches.
        """
        best = float(np.max(self.confidences))
        tied = np.asarray(self.confidences) == best
        return best, bool(self.candidate_matches(horizon, thresholds)[tied].any())


def miss_rate(
    samples: t.Sequence[ForecastSample],
    horizon: int,
    thresholds: MatchThresholds | None = None,
    joint: bool = False,
) -> float | None:
    """Fraction of evaluation units where every candidate misses

    Marginal mode treats each agent as a unit. Joint mode groups agents by
    scenario : candidate k misses when any agent of the scenario fails to match
    with its own candidate k.

    Returns:
        float | None: None when no agent is valid at the horizon
    """
    _check_horizon(horizon)
    thresholds = thresholds or MatchThresholds()
    units: dict[t.Any, list[np.ndarray]] = defaultdict(list)
    for position, sample in enumerate(samples):
        if not sample.evaluable(horizon):
            continue
        key = sample.scenario_id if joint else position
        units[key].append(~sample.candidate_matches(horizon, thresholds))

    if not units:
        return None
    misses = 0
    for key, candidate_misses in units.items():
        if len({len(m) for m in candidate_misses}) != 1:
            raise ValueError(f"Unit {key!r} mixes candidate counts, joint evaluation needs aligned K")
        misses += int(np.logical_or.reduce(candidate_misses).all())
    return misses / len(units)


def _envelope_area(recall: np.ndarray, precision: np.ndarray) -> float:
    """Area under the all-point interpolated precision-recall curve"""
    mrec = np.concatenate(([0.0], recall, [1.0]))
    mpre = np.concatenate(([0.0], precision, [0.0]))
    # precision envelope
    mpre = np.maximum.accumulate(mpre[::-1])[::-1]

    steps = np.flatnonzero(mrec[1:] != mrec[:-1])
    starts, ends, levels = mrec[steps], mrec[steps + 1], mpre[steps + 1]
    # merge runs of equal precision so a flat envelope integrates exactly
    keep = np.concatenate(([True], levels[1:] != levels[:-1]))
    run_starts = starts[keep]
    run_ends = np.concatenate((run_starts[1:], ends[-1:]))
    return float(np.sum((run_ends - run_starts) * levels[keep]))


def average_precision(
    samples: t.Sequence[ForecastSample], horizon: int, thresholds: MatchThresholds | None = None
) -> float | None:
    """AP of one group of agents

    Each agent contributes its highest-confidence candidate as a single
    detection, a true positive when it matches at the horizon. Detections are
    ranked by confidence, ties by (scenario_id, agent_id).

    Returns:
        float | None: None when no agent is valid at the horizon
    """
    _check_horizon(horizon)
    thresholds = thresholds or MatchThresholds()
    scored = []
    for sample in samples:
        if not sample.evaluable(horizon):
            continue
        confidence, hit = sample.top_detection(horizon, thresholds)
        scored.append((-confidence, sample.scenario_id, sample.agent_id, hit))

    if not scored:
        return None
    scored.sort(key=lambda entry: entry[:3])
    true_positives = np.cumsum([entry[3] for entry in scored], dtype=np.float64)
    detections = np.arange(1, len(scored) + 1, dtype=np.float64)
    recall = true_positives / len(scored)
    precision = true_positives / detections
    return _envelope_area(recall, precision)


def mean_average_precision(
    samples: t.Sequence[ForecastSample], horizon: int, thresholds: MatchThresholds | None = None
) -> float | None:
    """Mean of the per agent type APs over the types present"""
    by_type: dict[AgentType, list[ForecastSample]] = defaultdict(list)
    for sample in samples:
        by_type[sample.agent_type].append(sample)
    scores = [
        score
        for agent_type in AgentType
        if (score := average_precision(by_type.get(agent_type, []), horizon, thresholds)) is not None
    ]
    if not scores:
        return None
    return float(np.mean(scores))


def build_samples(
    corpus: t.Sequence[Scenario],
    predictions: t.Sequence[ScenarioPredictions],
    split: SplitTag | None = None,
) -> list[ForecastSample]:
    """Align every prediction target with its prediction

    Raises:
        DanglingReferenceError: Unknown or duplicated references, or targets left without a prediction.
    """
    scenarios: dict[str, Scenario] = {}
    duplicated = []
    for scenario in corpus:
        if scenario.scenario_id in scenarios:
            duplicated.append(scenario.scenario_id)
        scenarios[scenario.scenario_id] = scenario
    if duplicated:
        raise DanglingReferenceError(duplicated, "Duplicate scenario ids in corpus")

    offending = []
    predicted: dict[tuple[str, str], t.Any] = {}
    seen_scenarios = set()
    for entry in predictions:
        if entry.scenario_id not in scenarios:
            offending.append(entry.scenario_id)
            continue
        if entry.scenario_id in seen_scenarios:
            offending.append(entry.scenario_id)
            continue
        seen_scenarios.add(entry.scenario_id)
        targets = set(scenarios[entry.scenario_id].prediction_targets)
        for prediction in entry.predictions:
            key = (entry.scenario_id, prediction.agent_id)
            if prediction.agent_id not in targets or key in predicted:
                offending.append("/".join(key))
                continue
            predicted[key] = prediction
    if offending:
        raise DanglingReferenceError(offending, "Dangling or duplicate prediction references")

    samples = []
    missing = []
    for scenario in corpus:
        if split is not None and scenario.split_tag != split:
            continue
        for track in scenario.target_tracks():
            prediction = predicted.get((scenario.scenario_id, track.agent_id))
            if prediction is None:
                missing.append(f"{scenario.scenario_id}/{track.agent_id}")
                continue
            samples.append(
                ForecastSample(
                    scenario_id=scenario.scenario_id,
                    agent_id=track.agent_id,
                    agent_type=track.agent_type,
                    trajectories=prediction.waypoints(),
                    confidences=prediction.confidences(),
                    gt=track.future_positions(),
                    gt_valid=track.future_valid(),
                    gt_heading=track.future_headings(),
                    initial_speed=track.current_state.speed,
                )
            )
    if missing:
        raise DanglingReferenceError(missing, "Prediction targets without predictions")
    return samples


class MetricsRow(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    agent_type: AgentType
    horizon: int
    """Seconds"""
    num_agents: int
    """Agents valid at the horizon step"""
    min_ade: float | None = None
    miss_rate: float | None = None
    mean_average_precision: float | None = None


class MetricsSummary(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    min_ade: float | None = None
    miss_rate: float | None = None
    mean_average_precision: float | None = None


METRIC_FIELDS = ("min_ade", "miss_rate", "mean_average_precision")


def _mean_or_none(values: t.Iterable[float | None]) -> float | None:
    present = [value for value in values if value is not None]
    return float(np.mean(present)) if present else None


class MetricsReport(BaseModel):
    """All three metrics per (agent type, horizon)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    num_scenarios: int
    split: SplitTag | None = None
    rows: tuple[MetricsRow, ...]

    def row(self, agent_type: AgentType, horizon: int) -> MetricsRow:
        for row in self.rows:
            if row.agent_type == agent_type and row.horizon == horizon:
                return row
        raise KeyError((agent_type, horizon))

    def average(self, horizon: int) -> MetricsSummary:
        """Cross-category average at one horizon"""
        rows = [row for row in self.rows if row.horizon == horizon]
        return MetricsSummary(
            **{name: _mean_or_none(getattr(row, name) for row in rows) for name in METRIC_FIELDS}
        )

    def overall(self) -> MetricsSummary:
        """Cross-category averages further averaged over 3, 5 and 8 s"""
        averages = [self.average(horizon) for horizon in HORIZON_SECONDS]
        return MetricsSummary(
            **{name: _mean_or_none(getattr(summary, name) for summary in averages) for name in METRIC_FIELDS}
        )


def evaluate(
    corpus: t.Sequence[Scenario],
    predictions: t.Sequence[ScenarioPredictions],
    thresholds: MatchThresholds | None = None,
    split: SplitTag | None = None,
) -> MetricsReport:
    """minADE, Miss Rate and mAP per agent type at every horizon

    Agents whose ground truth is invalid at a horizon step are left out of that horizon.

    Args:
        corpus (t.Sequence[Scenario]): Scenarios holding the ground truth.
        predictions (t.Sequence[ScenarioPredictions]): One entry per scenario.
        thresholds (MatchThresholds, optional): IsMatch configuration. Defaults to the stock thresholds.
        split (SplitTag, optional): Evaluate only scenarios of that split.

    Raises:
        DanglingReferenceError: Predictions and scenarios do not line up.
    """
    thresholds = thresholds or MatchThresholds()
    samples = build_samples(corpus, predictions, split)
    num_scenarios = len({sample.scenario_id for sample in samples})
    logger.info(f"Evaluating {len(samples)} targets across {num_scenarios} scenarios")

    rows = []
    for horizon in HORIZON_SECONDS:
        steps = HORIZON_STEPS[horizon]
        for agent_type in AgentType:
            group = [s for s in samples if s.agent_type == agent_type and s.evaluable(horizon)]
            ades = [min_ade(s.trajectories, s.gt, steps, s.gt_valid) for s in group]
            rows.append(
                MetricsRow(
                    agent_type=agent_type,
                    horizon=horizon,
                    num_agents=len(group),
                    min_ade=_mean_or_none(ades),
                    miss_rate=miss_rate(group, horizon, thresholds),
                    mean_average_precision=average_precision(group, horizon, thresholds),
                )
            )
    return MetricsReport(num_scenarios=num_scenarios, split=split, rows=tuple(rows))


def _cell(value: float | None) -> str:
    return "-" if value is None else f"{value:.4f}"


def format_table(report: MetricsReport) -> str:
    """Machine-readable CSV, one line per agent type, horizon and metric"""
    lines = ["agent_type,horizon_s,metric,value,num_agents"]
    for row in report.rows:
        for name in METRIC_FIELDS:
            value = getattr(row, name)
            cell = "" if value is None else repr(value)
            lines.append(f"{row.agent_type},{row.horizon},{name},{cell},{row.num_agents}")
    return "\n".join(lines) + "\n"


def format_summary_table(report: MetricsReport, label: str = "predictions", horizon: int = 8) -> str:
    """Aligned columns : minADE, MR and mAP for vehicles, pedestrians and cyclists at one horizon"""
    _check_horizon(horizon)
    headings = ("minADE", "MR", "mAP")
    cell_width = 8
    group_width = cell_width * len(headings)
    label_width = max(len("Model"), len(label))

    title = "Model".ljust(label_width) + "".join(
        f" | {agent_type.name.capitalize():<{group_width}}" for agent_type in AgentType
    )
    metric_names = " " * label_width + "".join(
        " | " + "".join(f"{heading:<{cell_width}}" for heading in headings) for _ in AgentType
    )
    values = label.ljust(label_width)
    for agent_type in AgentType:
        row = report.row(agent_type, horizon)
        cells = (row.min_ade, row.miss_rate, row.mean_average_precision)
        values += " | " + "".join(f"{_cell(value):<{cell_width}}" for value in cells)

    lines = [f"Marginal metrics at {horizon}s", title, metric_names, "-" * len(title), values]
    return "\n".join(line.rstrip() for line in lines) + "\n"
