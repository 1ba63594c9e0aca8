"""Contains non-essential cli-commands"""

from pathlib import Path

import click
import rich
from rich.table import Table

from lidarbox.cli.helpers import command_context_settings, echo_lines, prepare_start
from lidarbox.constants import CHANNEL_NAMES
from lidarbox.helpers import get_filesize_string
from lidarbox.pipeline import archive_stats, decode_archive_parallel


@click.command(context_settings=command_context_settings)
@click.argument("archive", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-J", "--json", is_flag=True, help="Output details in json format")
@click.option(
    "-V",
    "--verbose",
    count=True,
    help="Show more detailed interactive texts",
    default=0,
)
@click.option(
    "-Q",
    "--quiet",
    is_flag=True,
    help="Disable showing interactive texts on the progress (logs)",
)
def inspect_command(archive: Path, json: bool, **start_kwargs):
    """Show the header and section sizes of every frame of an archive"""
    prepare_start(**start_kwargs)
    frames = decode_archive_parallel(archive.read_bytes(), workers=1)

    if json:
        details = [
            dict(
                index=index,
                sensor=frame.header.sensor_id.name,
                return_index=frame.header.return_index.name,
                deflate_level=frame.header.deflate_level,
                height=frame.header.height,
                width=frame.header.width,
                valid_pixels=int(frame.valid.sum()),
                steps=dict(zip(CHANNEL_NAMES, frame.header.steps)),
                rotation=list(frame.frame_rotation),
                section_sizes=frame.section_sizes,
                residual_byte_counts=frame.residual_byte_counts,
            )
            for index, frame in enumerate(frames)
        ]
        rich.print_json(data=dict(details=details), indent=4)
        return

    table = Table(title=f"{archive.name} - {len(frames)} frames", show_lines=True)
    table.add_column("No.", style="white", justify="center")
    table.add_column("Sensor", style="cyan")
    table.add_column("Return", style="cyan")
    table.add_column("Shape", justify="center")
    table.add_column("Valid", justify="right")
    for name in CHANNEL_NAMES:
        table.add_column(name, justify="right")
    table.add_column("Size", style="green", justify="right")

    for index, frame in enumerate(frames):
        header = frame.header
        table.add_row(
            str(index),
            header.sensor_id.name,
            header.return_index.name,
            f"{header.height}x{header.width}",
            str(int(frame.valid.sum())),
            *(str(frame.section_sizes[name]) for name in CHANNEL_NAMES),
            get_filesize_string(sum(frame.section_sizes.values())),
        )
    rich.print(table)


@click.command(context_settings=command_context_settings)
@click.argument("archive", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "-w",
    "--workers",
    type=click.IntRange(1),
    help="Number of worker processes [default : LIDARBOX_WORKERS or processor count]",
)
@click.option(
    "-V",
    "--verbose",
    count=True,
    help="Show more detailed interactive texts",
    default=0,
)
@click.option(
    "-Q",
    "--quiet",
    is_flag=True,
    help="Disable showing interactive texts on the progress (logs)",
)
def stats_command(archive: Path, workers: int | None, **start_kwargs):
    """Compression statistics of an existing archive"""
    prepare_start(**start_kwargs)
    echo_lines(archive_stats(archive.read_bytes(), workers).to_key_values())
