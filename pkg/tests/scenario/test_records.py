import json

import pytest
from pydantic import ValidationError

from lidarbox.constants import (
    NUM_TIMESTEPS,
    PREDICTION_FILE_FORMAT,
    SCENARIO_FILE_FORMAT,
    AgentType,
    SplitTag,
)
from lidarbox.exceptions import RecordFormatError
from lidarbox.scenario import (
    AgentPrediction,
    AgentState,
    AgentTrack,
    Scenario,
    ScoredTrajectory,
    read_predictions,
    read_scenarios,
    write_predictions,
    write_scenarios,
)
from lidarbox.synthetic import constant_velocity_predictions, gen_synthetic

STILL = AgentState(x=1.0, y=2.0, heading=0.0, velocity_x=0.0, velocity_y=0.0, valid=True)

HIDDEN = AgentState(x=0.0, y=0.0, heading=0.0, velocity_x=0.0, velocity_y=0.0, valid=False)


def track(agent_id="a", states=None) -> AgentTrack:
    return AgentTrack(
        agent_id=agent_id, agent_type=AgentType.VEHICLE, states=states or [STILL] * NUM_TIMESTEPS
    )


def write_lines(path, header: dict, records: list[dict]):
    lines = [json.dumps(header)] + [json.dumps(record) for record in records]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_scenario_round_trip(tmp_path):
    corpus = gen_synthetic(seed=5, n_scenarios=100, agents_per_scene=3)
    path = write_scenarios(corpus, tmp_path / "scenes.jsonl")
    assert read_scenarios(path) == corpus


def test_prediction_round_trip(tmp_path):
    predictions = constant_velocity_predictions(gen_synthetic(seed=6, n_scenarios=10))
    path = write_predictions(predictions, tmp_path / "predictions.jsonl")
    assert read_predictions(path) == predictions


def test_header_line(tmp_path):
    path = write_scenarios(gen_synthetic(seed=1, n_scenarios=2), tmp_path / "scenes.jsonl")
    header = json.loads(path.read_text().splitlines()[0])
    assert header == {"format": SCENARIO_FILE_FORMAT, "version": 1}


def test_short_track_names_the_field(tmp_path):
    record = Scenario(scenario_id="s", split_tag=SplitTag.TRAIN, tracks=[track()]).model_dump(mode="json")
    record["tracks"][0]["states"] = record["tracks"][0]["states"][:90]
    path = write_lines(tmp_path / "short.jsonl", {"format": SCENARIO_FILE_FORMAT, "version": 1}, [record])
    with pytest.raises(RecordFormatError) as excinfo:
        read_scenarios(path)
    assert excinfo.value.record_index == 0
    assert excinfo.value.field.startswith("tracks.0.states")


def test_second_record_index(tmp_path):
    good = Scenario(scenario_id="s", split_tag=SplitTag.VAL, tracks=[track()]).model_dump(mode="json")
    bad = dict(good, split_tag="holdout")
    path = write_lines(tmp_path / "bad.jsonl", {"format": SCENARIO_FILE_FORMAT, "version": 1}, [good, bad])
    with pytest.raises(RecordFormatError) as excinfo:
        read_scenarios(path)
    assert excinfo.value.record_index == 1
    assert excinfo.value.field == "split_tag"


def test_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(RecordFormatError) as excinfo:
        read_scenarios(path)
    assert excinfo.value.record_index == -1


@pytest.mark.parametrize(
    argnames=["header"],
    argvalues=[
        [{"format": PREDICTION_FILE_FORMAT, "version": 1}],
        [{"format": SCENARIO_FILE_FORMAT, "version": 2}],
        [["not", "a", "header"]],
    ],
)
def test_wrong_header(tmp_path, header):
    path = tmp_path / "header.jsonl"
    path.write_text(json.dumps(header) + "\n")
    with pytest.raises(RecordFormatError) as excinfo:
        read_scenarios(path)
    assert excinfo.value.field.startswith("header")


def test_header_only_file_is_an_empty_corpus(tmp_path):
    path = write_scenarios([], tmp_path / "none.jsonl")
    assert read_scenarios(path) == []


def test_target_needs_valid_current_state():
    states = [STILL] * NUM_TIMESTEPS
    states[10] = HIDDEN
    with pytest.raises(ValidationError):
        Scenario(
            scenario_id="s", split_tag=SplitTag.TEST, tracks=[track(states=states)], prediction_targets=["a"]
        )


@pytest.mark.parametrize(
    argnames=["tracks", "targets"],
    argvalues=[
        [[track("a"), track("a")], []],
        [[track("a")], ["b"]],
        [[track("a")], ["a", "a"]],
    ],
)
def test_scenario_references(tracks, targets):
    with pytest.raises(ValidationError):
        Scenario(scenario_id="s", split_tag=SplitTag.TRAIN, tracks=tracks, prediction_targets=targets)


def test_prediction_shape():
    trajectory = ScoredTrajectory(confidence=0.5, waypoints=[(0.0, 0.0)] * 80)
    with pytest.raises(ValidationError):
        AgentPrediction(agent_id="a", trajectories=[trajectory] * 5)
    with pytest.raises(ValidationError):
        ScoredTrajectory(confidence=1.5, waypoints=[(0.0, 0.0)] * 80)
    with pytest.raises(ValidationError):
        ScoredTrajectory(confidence=0.5, waypoints=[(0.0, 0.0)] * 79)
    assert AgentPrediction(agent_id="a", trajectories=[trajectory] * 6).waypoints().shape == (6, 80, 2)


def test_non_finite_state_rejected():
    with pytest.raises(ValidationError):
        AgentState(x=float("nan"), y=0.0, heading=0.0, velocity_x=0.0, velocity_y=0.0, valid=True)
