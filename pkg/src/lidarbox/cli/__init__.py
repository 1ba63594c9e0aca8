"""Commandline module"""

from lidarbox.cli.interface import main

__all__ = ["main"]
