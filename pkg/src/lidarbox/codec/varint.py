"""Zigzag mapping and base-128 varints (protobuf flavour : least significant group
first, continuation flag in the MSB of every byte but the last).

Scalar helpers serve headers and archive framing, the array helpers serve
residual streams.
"""

import numpy as np

from lidarbox.codec.exceptions import ResidualCountMismatchError, VarintError
from lidarbox.constants import MAX_VARINT_BYTES

__all__ = [
    "zigzag",
    "unzigzag",
    "varint_encode",
    "varint_decode",
    "zigzag_array",
    "unzigzag_array",
    "encode_varints",
    "decode_varints",
]

_UINT64_LIMIT = 1 << 64

_SHIFTS = np.arange(MAX_VARINT_BYTES, dtype=np.uint64) * np.uint64(7)


def zigzag(n: int) -> int:
    """2n for n >= 0, -2n - 1 for n < 0"""
    return 2 * n if n >= 0 else -2 * n - 1


def unzigzag(u: int) -> int:
    return (u >> 1) if not u & 1 else -((u + 1) >> 1)


def varint_encode(u: int) -> bytes:
    """Encode an unsigned integer below 2**64"""
    if not 0 <= u < _UINT64_LIMIT:
        raise ValueError(f"Varint value out of range - {u}")
    values = bytearray()
    while True:
        part = u & 0x7F
        u >>= 7
        if u:
            values.append(part | 0x80)
        else:
            values.append(part)
            return bytes(values)


def varint_decode(data: bytes | memoryview, offset: int = 0) -> tuple[int, int]:
    """Decode one varint starting at `offset`

    Returns:
        tuple[int, int]: Value and the offset just past it

    Raises:
        VarintError: Unterminated, over-long or above 64 bits.
    """
    value = 0
    for count in range(MAX_VARINT_BYTES):
        index = offset + count
        if index >= len(data):
            raise VarintError(f"Unterminated varint at offset {offset}")
        byte = data[index]
        value |= (byte & 0x7F) << (7 * count)
        if not byte & 0x80:
            if value >= _UINT64_LIMIT:
                raise VarintError(f"Varint at offset {offset} exceeds 64 bits")
            return value, index + 1
    raise VarintError(f"Varint at offset {offset} is longer than {MAX_VARINT_BYTES} bytes")


def zigzag_array(values: np.ndarray) -> np.ndarray:
    """Vectorised zigzag of int64 values into uint64"""
    values = np.asarray(values, dtype=np.int64)
    return ((values << 1) ^ (values >> 63)).view(np.uint64)


def unzigzag_array(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.uint64)
    return ((values >> np.uint64(1)) ^ (np.uint64(0) - (values & np.uint64(1)))).view(np.int64)


def encode_varints(values: np.ndarray) -> bytes:
    """Concatenated varints of an array of unsigned values"""
    values = np.asarray(values, dtype=np.uint64).ravel()
    if values.size == 0:
        return b""

    groups = ((values[:, None] >> _SHIFTS[None, :]) & np.uint64(0x7F)).astype(np.uint8)
    # Number of 7-bit groups per value, at least one
    lengths = np.ones(values.size, dtype=np.int64)
    for count in range(1, MAX_VARINT_BYTES):
        lengths += (values >> _SHIFTS[count]) > 0

    columns = np.arange(MAX_VARINT_BYTES)[None, :]
    groups[columns < (lengths[:, None] - 1)] |= 0x80
    return groups[columns < lengths[:, None]].tobytes()


def decode_varints(data: bytes, expected: int | None = None) -> np.ndarray:
    """Split a buffer of concatenated varints into uint64 values

    Raises:
        VarintError: Buffer ends mid-varint, a varint is over-long or above 64 bits.
    """
    buffer = np.frombuffer(data, dtype=np.uint8)
    if buffer.size == 0:
        return np.zeros(0, dtype=np.uint64)

    terminal = (buffer & 0x80) == 0
    if not terminal[-1]:
        raise VarintError("Residual stream ends inside a varint")

    ends = np.flatnonzero(terminal)
    starts = np.concatenate(([0], ends[:-1] + 1))
    lengths = ends - starts + 1
    if lengths.max() > MAX_VARINT_BYTES:
        raise VarintError(f"Varint longer than {MAX_VARINT_BYTES} bytes in residual stream")

    # Tenth group may only carry the 64th bit
    ten_byte = lengths == MAX_VARINT_BYTES
    if ten_byte.any() and (buffer[ends[ten_byte]] > 1).any():
        raise VarintError("Varint exceeds 64 bits in residual stream")

    positions = np.arange(buffer.size) - np.repeat(starts, lengths)
    shifted = (buffer & 0x7F).astype(np.uint64) << _SHIFTS[positions]
    values = np.bitwise_or.reduceat(shifted, starts)
    if expected is not None and values.size != expected:
        raise ResidualCountMismatchError(expected, int(values.size))
    return values
