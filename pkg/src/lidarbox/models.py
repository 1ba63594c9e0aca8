"""
Pydantic models for corpus level statistics.
"""

from pydantic import BaseModel, ConfigDict, Field, computed_field

from lidarbox.constants import CHANNEL_NAMES


class CompressionStats(BaseModel):
    """Size accounting of an archive against the raw float baseline
    (6 channels x 32-bit float per pixel)
    """

    model_config = ConfigDict(extra="forbid")

    frames: int = Field(ge=0)
    raw_bytes: int = Field(ge=0)
    compressed_bytes: int = Field(ge=0)
    """Exact archive size"""
    header_bytes: int = 0
    """Frame headers plus archive framing"""
    bitmap_bytes: int = 0
    channel_bytes: dict[str, int] = Field(default_factory=lambda: dict.fromkeys(CHANNEL_NAMES, 0))
    """Compressed section bytes per channel, length prefixes included"""
    wall_time_s: float = 0.0

    @computed_field
    @property
    def ratio(self) -> float:
        return self.raw_bytes / self.compressed_bytes if self.compressed_bytes else 0.0

    @computed_field
    @property
    def throughput_mb_s(self) -> float:
        """Raw megabytes handled per second"""
        return self.raw_bytes / 1e6 / self.wall_time_s if self.wall_time_s > 0 else 0.0

    def add_sections(self, sections: dict[str, int]) -> None:
        """Accumulate the section sizes of one frame"""
        self.header_bytes += sections["header"]
        self.bitmap_bytes += sections["bitmap"]
        for name in CHANNEL_NAMES:
            self.channel_bytes[name] += sections[name]

    def to_key_values(self) -> list[str]:
        """`key=value` lines, channels as `channel.<name>=bytes`"""
        lines = [
            f"frames={self.frames}",
            f"raw_bytes={self.raw_bytes}",
            f"compressed_bytes={self.compressed_bytes}",
            f"ratio={self.ratio:.4f}",
            f"header_bytes={self.header_bytes}",
            f"bitmap_bytes={self.bitmap_bytes}",
        ]
        lines.extend(f"channel.{name}={size}" for name, size in self.channel_bytes.items())
        lines.append(f"wall_time_s={self.wall_time_s:.4f}")
        lines.append(f"throughput_mb_s={self.throughput_mb_s:.2f}")
        return lines
