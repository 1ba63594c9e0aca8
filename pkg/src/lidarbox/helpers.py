"""
This module provide functions for performing common and frequently required tasks
across the package.
"""

import typing as t

import numpy as np

from lidarbox.constants import DEFAULT_WORKERS


def assert_membership(value: t.Any, elements: t.Iterable, identity="Value"):
    """Asserts value is a member of elements

    Args:
        value (t.Any): member to be checked against.
        elements (t.Iterable): Iterables of members.
        identity (str, optional): Defaults to "Value".
    """
    assert value in elements, f"{identity} '{value}' is not one of {elements}"


def assert_instance(obj: object, class_or_tuple, name: str = "Parameter") -> t.NoReturn:
    """assert obj an instance of class_or_tuple"""

    assert isinstance(obj, class_or_tuple), (
        f"{name} value needs to be an instance of/any of {class_or_tuple} not {type(obj)}"
    )


def round_half_away_from_zero(values: np.ndarray) -> np.ndarray:
    """Nearest integer, ties going away from zero (numpy's `rint` rounds ties to even)"""
    truncated = np.trunc(values)
    # x - trunc(x) is exact in binary floating point
    return truncated + np.where(np.abs(values - truncated) >= 0.5, np.sign(values), 0.0)


def first_true_index(mask: np.ndarray) -> tuple[int, ...] | None:
    """Index of the first set element of a boolean array in row-major order"""
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(flat[0], mask.shape))


def resolve_workers(workers: int | None) -> int:
    """Clamp a requested worker count, falling back to the default"""
    if workers is None or workers < 1:
        return max(1, DEFAULT_WORKERS)
    return workers


def get_filesize_string(size_in_bytes: int) -> str:
    """Human readable file size such as `1.50 MB`"""
    size = float(size_in_bytes)
    for unit in ("B", "KB", "MB", "GB"):
        if size < 1024 or unit == "GB":
            return f"{size:.2f} {unit}" if unit != "B" else f"{int(size)} B"
        size /= 1024
    return f"{size:.2f} GB"
