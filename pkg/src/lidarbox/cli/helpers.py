"""Contain support functions and constant variables"""

import logging

import click

from lidarbox import __repo__
from lidarbox.codec import ArchiveFrameError, BadMagicError, FrameDecodeError
from lidarbox.constants import RAW_FRAME_EXTENSION
from lidarbox.exceptions import (
    ConfigurationError,
    DanglingReferenceError,
    EmptyCorpusError,
    InvalidImageError,
    LidarboxDataError,
    QuantizationError,
    RecordFormatError,
)

command_context_settings = dict(auto_envvar_prefix="LIDARBOX")

USAGE_ERROR_EXIT_CODE = 1

DATA_ERROR_EXIT_CODE = 2


def prepare_start(quiet: bool = False, verbose: int = 0) -> None:
    """Set up logging for the commandline

    - `-V` INFO with timestamps, `-VV` DEBUG, `-Q` errors only.
    """
    if verbose > 2:
        verbose = 2
    logging.basicConfig(
        format=("[%(asctime)s] : %(levelname)s - %(message)s" if verbose else "[%(module)s] %(message)s"),
        datefmt="%d-%b-%Y %H:%M:%S",
        level=(
            logging.ERROR
            if quiet
            # -V -> INFO, -VV -> DEBUG
            else (30 - (verbose * 10))
            if verbose > 0
            else logging.INFO
        ),
    )


def echo_lines(lines: list[str]) -> None:
    """Machine-readable output goes to stdout, one entry per line"""
    for line in lines:
        click.echo(line)


def show_any_help(exception: Exception, exception_msg: str) -> int:
    """Process exception and suggest solution if exists.

    Args:
        exception (Exception): Exact exception encountered.
        exception_msg (str): Exception message

    Returns:
        int: Exit status code
    """
    if isinstance(exception, click.ClickException):
        return USAGE_ERROR_EXIT_CODE

    if isinstance(exception, EmptyCorpusError):
        logging.info(
            f"Compression reads raw frames named '*{RAW_FRAME_EXTENSION}'. "
            "Run 'lidarbox gen frames' to get some."
        )

    elif isinstance(exception, ArchiveFrameError):
        logging.info(f"Frame {exception.frame_index} of the archive is damaged.")

    elif isinstance(exception, InvalidImageError):
        logging.info("Valid pixels need a positive range and non-negative intensity and elongation.")

    elif isinstance(exception, BadMagicError):
        logging.info("The input does not look like a lidarbox archive.")

    elif isinstance(exception, QuantizationError) and exception.pixel is not None:
        logging.info(
            f"Check the raw frame around pixel {exception.pixel} or loosen the quantization profile."
        )

    elif isinstance(exception, DanglingReferenceError):
        logging.info(
            f"{len(exception.offending_ids)} references do not line up. "
            "Predictions must cover every prediction target of the evaluated scenarios exactly once."
        )

    elif isinstance(exception, RecordFormatError):
        logging.info("Record files start with a JSON header line followed by one JSON record per line.")

    elif isinstance(exception, ConfigurationError):
        logging.info(f"Configuration files are YAML, see {__repo__}#configuration")

    if isinstance(exception, (LidarboxDataError, FrameDecodeError)):
        return DATA_ERROR_EXIT_CODE

    if not isinstance(exception, (ValueError, AssertionError, ConfigurationError)):
        logging.info(f"Incase the error persist then feel free to submit the issue at {__repo__}/issues/new")

    return USAGE_ERROR_EXIT_CODE
