import struct

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from lidarbox.codec import (
    HEADER_SIZE,
    BadMagicError,
    CorruptHeaderError,
    FrameDecodeError,
    HeaderOverflowError,
    TrailingDataError,
    TruncatedDataError,
    UnsupportedVersionError,
    decode_frame,
    encode_frame,
    encode_quantized,
    frame_section_sizes,
    raw_varint_size,
)
from lidarbox.constants import (
    CHANNEL_NAMES,
    FORMAT_VERSION,
    FRAME_MAGIC,
    RAW_BYTES_PER_PIXEL,
    ReturnIndex,
    SensorName,
)
from lidarbox.range_image import QuantizationProfile, quantize_image
from lidarbox.synthetic import gen_frames
from tests import constant_image, random_image, with_invalid_noise

SENSOR_RETURNS = [[sensor, index] for sensor in SensorName for index in ReturnIndex]

SMALL_FRAME = encode_frame(random_image(seed=3, sensor=SensorName.SIDE_RIGHT))


def assert_lossless(img, profile=None, rotation=(0.0, 0.0, 0.0)):
    expected = quantize_image(img, profile, rotation)
    decoded = decode_frame(encode_frame(img, profile, rotation))
    assert np.array_equal(decoded.valid, img.valid)
    assert decoded.channels == expected.channels
    assert decoded.frame_rotation == expected.frame_rotation
    return decoded


@pytest.mark.parametrize(argnames=["sensor", "return_index"], argvalues=SENSOR_RETURNS)
@settings(max_examples=100, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    invalid_fraction=st.floats(min_value=0.0, max_value=1.0),
)
def test_lossless_on_random_frames(sensor, return_index, seed, invalid_fraction):
    img = random_image(seed, sensor, return_index, invalid_fraction)
    decoded = assert_lossless(img, rotation=(0.1, -0.02, 0.003))
    assert decoded.header.sensor_id == sensor
    assert decoded.header.return_index == return_index


@pytest.mark.parametrize(argnames=["sensor"], argvalues=[[sensor] for sensor in SensorName])
def test_lossless_on_street_frames(sensor):
    frame = gen_frames(seed=int(sensor), count=1, sensor=sensor)[0]
    assert_lossless(frame.image, rotation=frame.rotation)


def test_custom_profile_steps_are_recorded():
    profile = QuantizationProfile(range_step=0.02, intensity_step=0.5)
    decoded = assert_lossless(random_image(), profile)
    assert decoded.header.steps == profile.channel_steps()


def test_deterministic_bytes():
    img = random_image(seed=9)
    assert encode_frame(img) == encode_frame(img)


def test_invalid_pixels_do_not_change_bytes():
    img = random_image(seed=10)
    assert encode_frame(img) == encode_frame(with_invalid_noise(img))


def test_header_layout():
    img = random_image(sensor=SensorName.SIDE_LEFT, return_index=ReturnIndex.SECOND)
    data = encode_frame(img, rotation=(0.5, 0.0, 0.0), level=9)
    assert HEADER_SIZE == 84
    magic, version, sensor_id, return_index, level, height, width = struct.unpack_from("<4sBBBBHH", data)
    assert magic == FRAME_MAGIC
    assert version == FORMAT_VERSION
    assert (sensor_id, return_index, level) == (4, 1, 9)
    assert (height, width) == (116, 150)
    steps_and_rotation = struct.unpack_from("<9d", data, 12)
    assert steps_and_rotation[:6] == QuantizationProfile().channel_steps()
    assert steps_and_rotation[6:] == pytest.approx((0.5, 0.0, 0.0))


def test_bitmap_is_row_major_lsb_first():
    img = random_image(sensor=SensorName.FRONT_RIGHT)
    data = encode_frame(img)
    bitmap = np.frombuffer(data, dtype=np.uint8, count=116 * 150 // 8, offset=HEADER_SIZE)
    flat = img.valid.ravel()
    assert (bitmap[0] & 1) == flat[0]
    assert ((bitmap[0] >> 1) & 1) == flat[1]
    assert ((bitmap[1] >> 7) & 1) == flat[15]


def test_all_invalid_frame_has_empty_payloads():
    img = random_image(invalid_fraction=1.0)
    data = encode_frame(img)
    assert len(data) == HEADER_SIZE + 116 * 150 // 8 + len(CHANNEL_NAMES)
    decoded = decode_frame(data)
    assert not decoded.valid.any()
    assert all(size == 1 for name, size in decoded.section_sizes.items() if name in CHANNEL_NAMES)


def test_section_sizes_cover_the_frame():
    decoded = decode_frame(SMALL_FRAME)
    assert sum(decoded.section_sizes.values()) == len(SMALL_FRAME)
    assert frame_section_sizes(SMALL_FRAME) == decoded.section_sizes


def test_level_out_of_range():
    with pytest.raises(HeaderOverflowError):
        encode_frame(random_image(), level=10)


def test_mask_shape_must_match_geometry():
    img = random_image()
    quantized = quantize_image(img)
    broken = type(quantized)(
        geometry=quantized.geometry,
        return_index=quantized.return_index,
        channels=quantized.channels,
        valid=np.ones((3, 3), dtype=bool),
    )
    with pytest.raises(HeaderOverflowError):
        encode_quantized(broken)


def test_constant_frames_compress_well():
    img = constant_image(SensorName.TOP)
    data = encode_frame(img)
    assert img.geometry.height * img.geometry.width * RAW_BYTES_PER_PIXEL / len(data) >= 50


def test_residuals_beat_absolute_values_on_street_frames():
    for frame in gen_frames(seed=21, count=3):
        quantized = quantize_image(frame.image, rotation=frame.rotation)
        assert len(encode_quantized(quantized)) < raw_varint_size(quantized)


def patched(data: bytes, offset: int, value: bytes) -> bytes:
    return data[:offset] + value + data[offset + len(value) :]


@pytest.mark.parametrize(
    argnames=["data", "error"],
    argvalues=[
        [b"", TruncatedDataError],
        [b"WLR", TruncatedDataError],
        [patched(SMALL_FRAME, 0, b"XLRF"), BadMagicError],
        [patched(SMALL_FRAME, 4, b"\x02"), UnsupportedVersionError],
        [patched(SMALL_FRAME, 5, b"\x09"), CorruptHeaderError],
        [patched(SMALL_FRAME, 6, b"\x05"), CorruptHeaderError],
        [patched(SMALL_FRAME, 7, b"\x0a"), CorruptHeaderError],
        [patched(SMALL_FRAME, 8, struct.pack("<H", 64)), CorruptHeaderError],
        [patched(SMALL_FRAME, 12, struct.pack("<d", 0.0)), CorruptHeaderError],
        [patched(SMALL_FRAME, 60, struct.pack("<d", float("nan"))), CorruptHeaderError],
        [SMALL_FRAME[:HEADER_SIZE], TruncatedDataError],
        [SMALL_FRAME[:-1], TruncatedDataError],
        [SMALL_FRAME + b"\x00", TrailingDataError],
    ],
)
def test_typed_decode_errors(data, error):
    with pytest.raises(error):
        decode_frame(data)


@settings(max_examples=1000, deadline=None)
@given(cut=st.integers(min_value=0, max_value=len(SMALL_FRAME) - 1))
def test_truncation_is_always_reported(cut):
    with pytest.raises(FrameDecodeError):
        decode_frame(SMALL_FRAME[:cut])


@settings(max_examples=2000, deadline=None)
@given(
    offset=st.integers(min_value=0, max_value=len(SMALL_FRAME) - 1),
    value=st.integers(min_value=0, max_value=255),
)
def test_single_byte_mutation_never_crashes(offset, value):
    try:
        decoded = decode_frame(patched(SMALL_FRAME, offset, bytes([value])))
    except FrameDecodeError:
        return
    assert decoded.valid.shape == (decoded.header.height, decoded.header.width)


@settings(max_examples=500, deadline=None)
@given(garbage=st.binary(min_size=0, max_size=4096))
def test_random_bytes_after_magic(garbage):
    with pytest.raises(FrameDecodeError):
        decode_frame(FRAME_MAGIC + bytes([FORMAT_VERSION]) + garbage)
