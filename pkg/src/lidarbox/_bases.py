"""
This module contains base classes for the entire package
"""

import json
import typing as t
from abc import ABC, abstractmethod
from pathlib import Path

from pydantic import BaseModel, ValidationError

from lidarbox import logger
from lidarbox.constants import RECORD_FILE_VERSION


class BaseLidarboxException(Exception):
    """Base class for all exceptions of this package"""


ModelT = t.TypeVar("ModelT", bound=BaseModel)


class BaseRecordFile(ABC, t.Generic[ModelT]):
    """Newline-delimited record file : one JSON header line followed by one
    JSON record per line.

    Subclasses declare the `format_name` written into the header and the
    pydantic `record_model` every line is validated against.
    """

    format_name: str
    record_model: type[ModelT]

    def __init__(self, path: Path | str):
        self.path = Path(path)

    def __repr__(self) -> str:
        return f"<{self.__module__}.{self.__class__.__name__} path='{self.path}'>"

    @abstractmethod
    def record_error(self, record_index: int, field: str, message: str) -> Exception:
        """Exception to raise for a malformed record"""
        raise NotImplementedError("Function needs to be implemented in subclass.")

    def header(self) -> dict[str, t.Any]:
        return {"format": self.format_name, "version": RECORD_FILE_VERSION}

    def write(self, records: t.Iterable[ModelT]) -> int:
        """Write the header and all records.

        Returns:
            int: Number of records written
        """
        count = 0
        with open(self.path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(self.header(), separators=(",", ":")) + "\n")
            for record in records:
                fh.write(record.model_dump_json() + "\n")
                count += 1
        logger.debug(f"Wrote {count} {self.format_name} records to {self.path}")
        return count

    def _check_header(self, line: str) -> None:
        try:
            header = json.loads(line)
        except json.JSONDecodeError as e:
            raise self.record_error(-1, "header", f"header is not valid JSON - {e}") from e

        if not isinstance(header, dict) or header.get("format") != self.format_name:
            raise self.record_error(-1, "header.format", f"expected format '{self.format_name}'")

        if header.get("version") != RECORD_FILE_VERSION:
            raise self.record_error(
                -1, "header.version", f"unsupported version {header.get('version')!r}"
            )

    def __iter__(self) -> t.Iterator[ModelT]:
        with open(self.path, encoding="utf-8") as fh:
            header_line = fh.readline()
            if not header_line:
                raise self.record_error(-1, "header", "file is empty")
            self._check_header(header_line)

            for record_index, line in enumerate(fh):
                if not line.strip():
                    continue
                try:
                    yield self.record_model.model_validate_json(line)
                except ValidationError as e:
                    first = e.errors()[0]
                    field = ".".join(str(part) for part in first["loc"]) or "<record>"
                    raise self.record_error(record_index, field, first["msg"]) from e

    def read(self) -> list[ModelT]:
        return list(self)
