import numpy as np
import pytest

from lidarbox.constants import RAW_FRAME_MAGIC, SensorName
from lidarbox.exceptions import RawFrameFormatError
from lidarbox.rawframe import (
    list_raw_frames,
    pack_raw_frame,
    read_raw_frame,
    unpack_raw_frame,
    write_raw_frame,
)
from tests import random_image


def test_f64_planes_are_exact():
    img = random_image(sensor=SensorName.SIDE_LEFT)
    raw = unpack_raw_frame(pack_raw_frame(img, (0.1, -0.2, 0.3), dtype="<f8"))
    assert raw.rotation == (0.1, -0.2, 0.3)
    assert raw.image.geometry == img.geometry
    assert raw.image.return_index == img.return_index
    for original, restored in zip(img.channels(), raw.image.channels()):
        assert np.array_equal(original, restored)
    assert np.array_equal(raw.image.valid, img.valid)


def test_f32_planes_round_to_single_precision():
    img = random_image(sensor=SensorName.FRONT_RIGHT)
    raw = unpack_raw_frame(pack_raw_frame(img))
    assert np.array_equal(raw.image.range, img.range.astype(np.float32).astype(np.float64))


def test_f16_planes_are_refused():
    with pytest.raises(ValueError):
        pack_raw_frame(random_image(), dtype="<f2")


@pytest.mark.parametrize(
    argnames=["mutate"],
    argvalues=[
        [lambda data: b"XXXX" + data[4:]],
        [lambda data: data[:4] + bytes([9]) + data[5:]],
        [lambda data: data[:7] + bytes([2]) + data[8:]],
        [lambda data: data[:5] + bytes([42]) + data[6:]],
        [lambda data: data[:-1]],
        [lambda data: data + b"\x00"],
        [lambda data: data[:20]],
    ],
)
def test_malformed_raw_frames(mutate):
    data = pack_raw_frame(random_image())
    assert data.startswith(RAW_FRAME_MAGIC)
    with pytest.raises(RawFrameFormatError):
        unpack_raw_frame(mutate(data))


def test_files_are_listed_in_name_order(tmp_path):
    img = random_image()
    for name in ("frame-00002.lrf", "frame-00000.lrf", "frame-00001.lrf"):
        write_raw_frame(tmp_path / name, img)
    (tmp_path / "notes.txt").write_text("skip me")
    assert [path.name for path in list_raw_frames(tmp_path)] == [
        "frame-00000.lrf",
        "frame-00001.lrf",
        "frame-00002.lrf",
    ]
    assert read_raw_frame(tmp_path / "frame-00001.lrf").image.num_valid == img.num_valid
