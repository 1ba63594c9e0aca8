"""Contains the actual console commands"""

import logging
import os
import sys
from pathlib import Path

import click

from lidarbox import __version__
from lidarbox.cli.extras import inspect_command, stats_command
from lidarbox.cli.helpers import (
    command_context_settings,
    echo_lines,
    prepare_start,
    show_any_help,
)
from lidarbox.config import load_profile, load_thresholds
from lidarbox.constants import HORIZON_SECONDS, PointFrame, ReturnIndex, SensorName, SplitTag
from lidarbox.metrics import evaluate, format_summary_table, format_table
from lidarbox.pipeline import compress_directory, decompress_archive, frame_filename
from lidarbox.rawframe import write_raw_frame
from lidarbox.scenario import read_predictions, read_scenarios, write_predictions, write_scenarios
from lidarbox.synthetic import constant_velocity_predictions, gen_frames, gen_synthetic, oracle_predictions

__all__ = [
    "compress_command",
    "decompress_command",
    "eval_command",
    "gen_command",
    "inspect_command",
    "stats_command",
]

DEBUG = os.getenv("DEBUG", "0") == "1"

BASELINES = {"oracle": oracle_predictions, "cv": constant_velocity_predictions}


@click.group()
@click.version_option(version=__version__)
def lidarbox():
    """Compress LiDAR range images and score motion forecasts. envvar-prefix : LIDARBOX"""


@click.command(context_settings=command_context_settings)
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("output", type=click.Path(dir_okay=False, writable=True, path_type=Path))
@click.option(
    "-p",
    "--profile",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML codec profile : quantization steps, deflate level, sensor inclinations",
)
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
@click.help_option("-h", "--help")
def compress_command(
    input_dir: Path, output: Path, profile: Path | None, workers: int | None, **start_kwargs
):
    """Compress the raw frames (*.lrf) of a directory into one archive"""
    prepare_start(**start_kwargs)
    archive, stats = compress_directory(input_dir, load_profile(profile), workers)
    output.write_bytes(archive)
    logging.info(f"Saved archive to {output}")
    echo_lines(stats.to_key_values())


@click.command(context_settings=command_context_settings)
@click.argument("archive", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("output_dir", type=click.Path(file_okay=False, path_type=Path))
@click.option(
    "-p",
    "--profile",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML codec profile, its sensor inclinations drive point projection",
)
@click.option(
    "-P",
    "--points",
    is_flag=True,
    help="Also export the point cloud of every frame",
)
@click.option(
    "-f",
    "--format",
    "point_format",
    type=click.Choice(["binary", "csv"]),
    default="binary",
    show_default=True,
    help="Point cloud export format",
)
@click.option(
    "-F",
    "--frame",
    "point_frame",
    type=click.Choice([frame.value for frame in PointFrame]),
    default=PointFrame.SENSOR.value,
    show_default=True,
    help="Coordinate frame of exported points",
)
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
@click.help_option("-h", "--help")
def decompress_command(
    archive: Path,
    output_dir: Path,
    profile: Path | None,
    points: bool,
    point_format: str,
    point_frame: str,
    workers: int | None,
    **start_kwargs,
):
    """Expand an archive into raw frames, optionally with point clouds"""
    prepare_start(**start_kwargs)
    written = decompress_archive(
        archive.read_bytes(),
        output_dir,
        load_profile(profile),
        workers,
        points=points,
        point_format=point_format,
        point_frame=PointFrame(point_frame),
    )
    echo_lines([str(path) for path in written])


@click.command(context_settings=command_context_settings)
@click.argument("scenarios", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("predictions", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "-t",
    "--thresholds",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML match thresholds per horizon and speed scaling",
)
@click.option(
    "-s",
    "--split",
    type=click.Choice([tag.value for tag in SplitTag]),
    help="Evaluate the scenarios of this split only",
)
@click.option(
    "-f",
    "--format",
    "output_format",
    type=click.Choice(["summary", "table", "json"]),
    default="summary",
    show_default=True,
    help="Aligned summary at 8 s, CSV rows or the full report in json",
)
@click.option(
    "-l",
    "--label",
    default="predictions",
    show_default=True,
    help="Row label of the summary",
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
@click.help_option("-h", "--help")
def eval_command(
    scenarios: Path,
    predictions: Path,
    thresholds: Path | None,
    split: str | None,
    output_format: str,
    label: str,
    **start_kwargs,
):
    """Score predictions against scenarios : minADE, Miss Rate and mAP"""
    prepare_start(**start_kwargs)
    report = evaluate(
        read_scenarios(scenarios),
        read_predictions(predictions),
        load_thresholds(thresholds),
        split=SplitTag(split) if split else None,
    )
    match output_format:
        case "json":
            click.echo(report.model_dump_json(indent=2))
        case "table":
            click.echo(format_table(report), nl=False)
        case _:
            click.echo(format_summary_table(report, label=label), nl=False)
            for horizon in HORIZON_SECONDS:
                average = report.average(horizon)
                click.echo(
                    f"average@{horizon}s minADE={average.min_ade} MR={average.miss_rate} "
                    f"mAP={average.mean_average_precision}"
                )


@click.command(context_settings=command_context_settings)
@click.argument("kind", type=click.Choice(["scenes", "frames", "predictions"]))
@click.argument("output", type=click.Path(path_type=Path))
@click.option(
    "-S",
    "--seed",
    type=click.IntRange(0, 2**64 - 1),
    default=0,
    show_default=True,
    help="Random seed",
)
@click.option(
    "-c",
    "--count",
    type=click.IntRange(1),
    default=10,
    show_default=True,
    help="Number of scenarios or frames",
)
@click.option(
    "-a",
    "--agents",
    type=click.IntRange(1),
    default=4,
    show_default=True,
    help="Agents per scenario",
)
@click.option(
    "-s",
    "--sensor",
    type=click.Choice(list(SensorName.map().keys()), case_sensitive=False),
    default=SensorName.TOP.name,
    show_default=True,
    help="Sensor of generated frames",
)
@click.option(
    "-r",
    "--return-index",
    type=click.Choice([entry.name for entry in ReturnIndex], case_sensitive=False),
    default=ReturnIndex.FIRST.name,
    show_default=True,
    help="Return of generated frames",
)
@click.option(
    "--scenarios",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Scenario file to predict for (predictions kind)",
)
@click.option(
    "-b",
    "--baseline",
    type=click.Choice(list(BASELINES)),
    default="cv",
    show_default=True,
    help="Predictor used for the predictions kind",
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
@click.help_option("-h", "--help")
def gen_command(
    kind: str,
    output: Path,
    seed: int,
    count: int,
    agents: int,
    sensor: str,
    return_index: str,
    scenarios: Path | None,
    baseline: str,
    **start_kwargs,
):
    """Generate a synthetic corpus : scenario file, raw frame directory or prediction file"""
    prepare_start(**start_kwargs)
    match kind:
        case "scenes":
            write_scenarios(gen_synthetic(seed, count, agents), output)
            echo_lines([str(output)])
        case "frames":
            output.mkdir(parents=True, exist_ok=True)
            frames = gen_frames(seed, count, SensorName[sensor.upper()], ReturnIndex[return_index.upper()])
            echo_lines(
                [
                    str(write_raw_frame(output / frame_filename(index), frame.image, frame.rotation))
                    for index, frame in enumerate(frames)
                ]
            )
        case _:
            if scenarios is None:
                raise click.UsageError("The predictions kind needs --scenarios")
            write_predictions(BASELINES[baseline](read_scenarios(scenarios)), output)
            echo_lines([str(output)])


def main(args: list[str] | None = None):
    """Entry point"""
    try:
        lidarbox.add_command(compress_command, "compress")
        lidarbox.add_command(decompress_command, "decompress")
        lidarbox.add_command(eval_command, "eval")
        lidarbox.add_command(gen_command, "gen")
        lidarbox.add_command(inspect_command, "inspect")
        lidarbox.add_command(stats_command, "stats")
        lidarbox.main(args=args, prog_name="lidarbox", standalone_mode=False)

    except Exception as e:
        exception_msg = str(e)

        if isinstance(e, click.ClickException):
            e.show()
        elif DEBUG:
            logging.exception(e)
        elif bool(exception_msg):
            logging.error(exception_msg)
        sys.exit(show_any_help(e, exception_msg))

    sys.exit(0)


if __name__ == "__main__":
    main()
