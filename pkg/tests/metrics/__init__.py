import numpy as np

from lidarbox.constants import HORIZON_STEPS, NUM_CANDIDATES, NUM_FUTURE_STEPS, AgentType
from lidarbox.metrics import ForecastSample, MatchThresholds


def random_samples(seed: int, max_agents: int = 5, scenarios: int = 2) -> list[ForecastSample]:
    """Small instance : gt random walks, candidates scattered around the gt"""
    rng = np.random.default_rng(seed)
    agent_types = list(AgentType)
    samples = []
    for index in range(int(rng.integers(1, max_agents + 1))):
        steps = rng.normal(0.0, 1.0, (NUM_FUTURE_STEPS, 2)) + rng.normal(0.0, 1.0, 2)
        gt = np.cumsum(steps, axis=0)
        spread = rng.uniform(0.1, 6.0)
        trajectories = gt[None] + rng.normal(0.0, spread, (NUM_CANDIDATES, NUM_FUTURE_STEPS, 2))
        gt_valid = rng.random(NUM_FUTURE_STEPS) >= 0.1
        samples.append(
            ForecastSample(
                scenario_id=f"scenario-{int(rng.integers(0, scenarios))}",
                agent_id=f"agent-{index}",
                agent_type=agent_types[int(rng.integers(0, len(agent_types)))],
                trajectories=trajectories,
                confidences=rng.random(NUM_CANDIDATES),
                gt=gt,
                gt_valid=gt_valid,
                gt_heading=rng.uniform(-np.pi, np.pi, NUM_FUTURE_STEPS),
                initial_speed=float(rng.uniform(0.0, 3.0)),
            )
        )
    return samples


def brute_min_ade(sample: ForecastSample, horizon: int) -> float | None:
    best = None
    for k in range(len(sample.trajectories)):
        total, count = 0.0, 0
        for t in range(HORIZON_STEPS[horizon]):
            if not sample.gt_valid[t]:
                continue
            dx = sample.trajectories[k, t, 0] - sample.gt[t, 0]
            dy = sample.trajectories[k, t, 1] - sample.gt[t, 1]
            total += float(np.sqrt(dx * dx + dy * dy))
            count += 1
        if count == 0:
            return None
        best = total / count if best is None else min(best, total / count)
    return best


def brute_is_match(sample: ForecastSample, k: int, horizon: int, thresholds: MatchThresholds) -> bool:
    t = HORIZON_STEPS[horizon] - 1
    offset = complex(*(sample.trajectories[k, t] - sample.gt[t]))
    along_and_across = offset * complex(np.cos(-sample.gt_heading[t]), np.sin(-sample.gt_heading[t]))
    scaling = thresholds.speed_scaling
    scale = float(np.interp(sample.initial_speed, [0.0, scaling.low_speed], [scaling.min_scale, 1.0]))
    limits = thresholds.horizons[horizon]
    return (
        abs(along_and_across.real) <= scale * limits.longitudinal
        and abs(along_and_across.imag) <= scale * limits.lateral
    )


def brute_miss_rate(samples, horizon: int, thresholds: MatchThresholds) -> float | None:
    evaluable = [s for s in samples if s.gt_valid[HORIZON_STEPS[horizon] - 1]]
    if not evaluable:
        return None
    missed = 0
    for sample in evaluable:
        if not any(brute_is_match(sample, k, horizon, thresholds) for k in range(len(sample.trajectories))):
            missed += 1
    return missed / len(evaluable)


def brute_average_precision(samples, horizon: int, thresholds: MatchThresholds) -> float | None:
    """Sweep every distinct confidence as a threshold, then take the all-point envelope"""
    evaluable = [s for s in samples if s.gt_valid[HORIZON_STEPS[horizon] - 1]]
    if not evaluable:
        return None
    detections = []
    for sample in evaluable:
        best = max(sample.confidences)
        tied = [k for k in range(len(sample.confidences)) if sample.confidences[k] == best]
        detections.append((best, any(brute_is_match(sample, k, horizon, thresholds) for k in tied)))

    curve = []
    for threshold in sorted({confidence for confidence, _ in detections}, reverse=True):
        kept = [hit for confidence, hit in detections if confidence >= threshold]
        curve.append((sum(kept) / len(evaluable), sum(kept) / len(kept)))

    area, previous_recall = 0.0, 0.0
    for index, (recall, _) in enumerate(curve):
        if recall > previous_recall:
            envelope = max(precision for _, precision in curve[index:])
            area += (recall - previous_recall) * envelope
            previous_recall = recall
    return area
