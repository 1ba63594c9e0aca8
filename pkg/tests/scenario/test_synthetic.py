import collections

import numpy as np
import pytest

from lidarbox.constants import CURRENT_STEP_INDEX, NUM_TIMESTEPS, AgentType, SplitTag
from lidarbox.range_image import validate_image
from lidarbox.synthetic import (
    constant_turn_rate_states,
    constant_velocity_states,
    gen_frames,
    gen_synthetic,
    split_tags,
    stop_and_go_states,
)


def test_split_fractions():
    counts = collections.Counter(split_tags(1000, np.random.default_rng(0)))
    assert counts == {SplitTag.TRAIN: 700, SplitTag.VAL: 150, SplitTag.TEST: 150}


def test_small_corpus_split_rounds_down():
    counts = collections.Counter(split_tags(10, np.random.default_rng(0)))
    assert counts[SplitTag.VAL] == 1 and counts[SplitTag.TEST] == 1
    assert counts[SplitTag.TRAIN] == 8


def test_same_seed_same_corpus():
    assert gen_synthetic(seed=3, n_scenarios=5) == gen_synthetic(seed=3, n_scenarios=5)
    assert gen_synthetic(seed=3, n_scenarios=5) != gen_synthetic(seed=4, n_scenarios=5)


def test_constant_velocity_is_closed_form():
    states = constant_velocity_states((1.0, 2.0), (3.0, -4.0))
    assert len(states) == NUM_TIMESTEPS
    current = states[CURRENT_STEP_INDEX]
    assert (current.x, current.y) == pytest.approx((1.0, 2.0))
    last = states[-1]
    assert (last.x, last.y) == pytest.approx((1.0 + 3.0 * 8, 2.0 - 4.0 * 8))
    first = states[0]
    assert (first.x, first.y) == pytest.approx((1.0 - 3.0, 2.0 + 4.0))
    assert current.speed == pytest.approx(5.0)


def test_constant_turn_rate_keeps_speed_and_radius():
    states = constant_turn_rate_states((0.0, 0.0), heading=0.0, speed=5.0, turn_rate=0.25)
    assert all(state.speed == pytest.approx(5.0) for state in states)
    centre = np.array([0.0, 5.0 / 0.25])
    radii = [np.hypot(state.x - centre[0], state.y - centre[1]) for state in states]
    assert np.allclose(radii, 20.0)
    assert states[CURRENT_STEP_INDEX].x == pytest.approx(0.0)


def test_stop_and_go_comes_to_rest():
    states = stop_and_go_states((0.0, 0.0), heading=0.0, speed=4.0, deceleration=2.0, dwell=1.0)
    # stops 2 s after the current step, waits 1 s
    resting = states[CURRENT_STEP_INDEX + 21 : CURRENT_STEP_INDEX + 30]
    assert all(state.speed == pytest.approx(0.0, abs=1e-9) for state in resting)
    assert all(state.x == pytest.approx(4.0) for state in resting)
    assert states[-1].speed > 0


def test_corpus_shape():
    corpus = gen_synthetic(seed=11, n_scenarios=30, agents_per_scene=4)
    assert len({scenario.scenario_id for scenario in corpus}) == 30
    for scenario in corpus:
        assert len(scenario.tracks) == 4
        assert len(scenario.prediction_targets) == 2
        for target in scenario.target_tracks():
            assert target.current_state.valid
    types = {track.agent_type for scenario in corpus for track in scenario.target_tracks()}
    assert types == set(AgentType)


@pytest.mark.parametrize(argnames=["n_scenarios", "agents"], argvalues=[[0, 4], [3, 0]])
def test_counts_must_be_positive(n_scenarios, agents):
    with pytest.raises(ValueError):
        gen_synthetic(seed=0, n_scenarios=n_scenarios, agents_per_scene=agents)


def test_street_frames_are_well_formed():
    frames = gen_frames(seed=2, count=2)
    for frame in frames:
        assert validate_image(frame.image) == []
        assert 0.5 < frame.image.num_valid / frame.image.valid.size < 1.0
    assert frames[0].rotation != frames[1].rotation


def test_street_frames_are_seeded():
    first = gen_frames(seed=3, count=1)[0].image
    second = gen_frames(seed=3, count=1)[0].image
    assert np.array_equal(first.range, second.range)
    assert np.array_equal(first.valid, second.valid)
