import numpy as np
import pytest

from lidarbox.constants import Channel, SensorName
from lidarbox.exceptions import QuantizationError
from lidarbox.helpers import round_half_away_from_zero
from lidarbox.range_image import (
    QuantizationProfile,
    QuantizedChannel,
    dequantize_channel,
    dequantize_image,
    quantize_channel,
    quantize_image,
    quantize_rotation,
)
from tests import random_image, with_invalid_noise

ONE_PIXEL = np.array([[True]])


@pytest.mark.parametrize(
    argnames=["value", "step", "expected"],
    argvalues=[
        [10.0032, 0.005, 2001],
        [0.0, 0.005, 0],
        [1.25, 0.5, 3],
        [-1.25, 0.5, -3],
        [0.75, 0.5, 2],
        [-0.2, 0.5, 0],
    ],
)
def test_quantize_value(value, step, expected):
    q = quantize_channel(np.array([[value]]), ONE_PIXEL, step)
    assert q.values[0, 0] == expected


def test_round_half_away_from_zero():
    values = np.array([0.5, 1.5, 2.5, -0.5, -1.5, -2.5, 0.49, -0.49])
    assert round_half_away_from_zero(values).tolist() == [1, 2, 3, -1, -2, -3, 0, 0]


def test_dequantize_value():
    q = QuantizedChannel(values=np.array([[2001, 0]]), step=0.005, valid=np.array([[True, True]]))
    assert dequantize_channel(q).tolist() == pytest.approx([[10.005, 0.0]])


def test_invalid_entries_become_zero():
    channel = np.array([[3.0, np.nan, 4.0]])
    mask = np.array([[True, False, True]])
    q = quantize_channel(channel, mask, 0.5)
    assert q.values.tolist() == [[6, 0, 8]]
    assert dequantize_channel(q).tolist() == [[3.0, 0.0, 4.0]]


@pytest.mark.parametrize(
    argnames=["step"],
    argvalues=[[0.0], [-0.005], [float("nan")], [float("inf")]],
)
def test_reject_bad_step(step):
    with pytest.raises(QuantizationError):
        quantize_channel(np.ones((2, 2)), np.ones((2, 2), dtype=bool), step)


@pytest.mark.parametrize(
    argnames=["bad_value"],
    argvalues=[[np.nan], [np.inf], [-np.inf]],
)
def test_reject_non_finite_valid_entry(bad_value):
    channel = np.ones((3, 4))
    channel[2, 1] = bad_value
    with pytest.raises(QuantizationError) as excinfo:
        quantize_channel(channel, np.ones((3, 4), dtype=bool), 0.01)
    assert excinfo.value.pixel == (2, 1)


def test_reject_shape_mismatch():
    with pytest.raises(QuantizationError):
        quantize_channel(np.ones((2, 3)), np.ones((3, 2), dtype=bool), 0.01)


@pytest.mark.parametrize(argnames=["seed"], argvalues=[[1], [2], [3]])
def test_range_error_bound(seed):
    rng = np.random.default_rng(seed)
    channel = rng.uniform(0.0, 75.0, (64, 2650))
    mask = rng.random(channel.shape) >= 0.1
    error = np.abs(dequantize_channel(quantize_channel(channel, mask, 0.005)) - channel)[mask]
    assert error.max() <= 0.0025 * (1 + 1e-9)


@pytest.mark.parametrize(
    argnames=["sensor"],
    argvalues=[[sensor] for sensor in SensorName],
)
def test_every_channel_error_bound(sensor):
    img = random_image(seed=int(sensor), sensor=sensor)
    profile = QuantizationProfile()
    restored = dequantize_image(quantize_image(img, profile))
    for channel, step in zip(Channel, profile.channel_steps()):
        error = np.abs(restored.channel(channel) - img.channel(channel))[img.valid]
        assert error.max() <= step / 2 * (1 + 1e-9), channel.name


@pytest.mark.parametrize(argnames=["step"], argvalues=[[0.005], [0.01], [0.0001], [0.37]])
def test_lattice_idempotence(step):
    rng = np.random.default_rng(11)
    channel = rng.normal(0.0, 50.0, (116, 150))
    mask = rng.random(channel.shape) >= 0.3
    q = quantize_channel(channel, mask, step)
    assert quantize_channel(dequantize_channel(q), mask, step) == q


def test_invalid_pixels_do_not_change_quantization():
    img = random_image(seed=5)
    noisy = with_invalid_noise(img)
    original = quantize_image(img)
    scrambled = quantize_image(noisy)
    assert original.channels == scrambled.channels


def test_quantize_rotation():
    assert quantize_rotation((1.25, -0.75, 0.0), 0.5) == (3, -2, 0)
    with pytest.raises(QuantizationError):
        quantize_rotation((0.0, float("nan"), 0.0), 0.001)


def test_frame_rotation_on_lattice():
    quantized = quantize_image(random_image(), rotation=(1.23456, 0.0, -0.5))
    assert quantized.rotation == (1235, 0, -500)
    assert quantized.frame_rotation == pytest.approx((1.235, 0.0, -0.5))


def test_profile_rejects_non_positive_step():
    with pytest.raises(ValueError):
        QuantizationProfile(range_step=0)
