# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""CSV result writer."""

import csv
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from dnscm.formats.base import FormatWriter


def format_cell(value: Any) -> Any:
    """
    Render a cell so that reruns produce identical bytes.

    Floats use ``repr`` (shortest round-tripping form), fractions their
    ``p/q`` form.
    """
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, Fraction):
        return str(value)
    return value


class CSVWriter(FormatWriter):
    """Streaming CSV writer with a fixed column order."""

    def __init__(
        self,
        file_path: str,
        columns: Optional[List[str]] = None,
        delimiter: str = ",",
        encoding: str = "utf-8",
    ):
        """
        Initialize CSV writer.

        Args:
            file_path: Path to the output CSV file
            columns: Column names (inferred from the first row if omitted)
            delimiter: CSV delimiter (default: comma)
            encoding: File encoding (default: utf-8)
        """
        self.file_path = file_path
        self.columns = list(columns or [])
        self.delimiter = delimiter
        self.encoding = encoding
        self.file_handle: Optional[Any] = None
        self.writer: Optional[csv.DictWriter] = None
        self._header_written = False

    def _open(self) -> None:
        if self.file_handle is not None:
            return
        Path(self.file_path).parent.mkdir(parents=True, exist_ok=True)
        self.file_handle = open(self.file_path, "w", encoding=self.encoding, newline="")

    def _ensure_header(self) -> None:
        self._open()
        if self.writer is None:
            self.writer = csv.DictWriter(
                self.file_handle,
                fieldnames=self.columns,
                delimiter=self.delimiter,
                extrasaction="raise",
                lineterminator="\n",
            )
        if not self._header_written:
            self.writer.writeheader()
            self._header_written = True

    def write_header(self, columns: List[str]) -> None:
        if self._header_written:
            if list(columns) != self.columns:
                raise ValueError(f"Header already written as {self.columns}, got {list(columns)}")
            return
        self.columns = list(columns)
        self._ensure_header()

    def write_row(self, row: Dict[str, Any]) -> None:
        if not self.columns:
            # Infer columns from first row
            self.columns = list(row.keys())
        self._ensure_header()
        assert self.writer is not None
        self.writer.writerow({key: format_cell(value) for key, value in row.items()})

    def close(self) -> None:
        """Close the writer; a writer with columns but no rows still gets its header."""
        if self.columns and not self._header_written:
            self._ensure_header()
        if self.file_handle is not None:
            self.file_handle.flush()
            self.file_handle.close()
            self.file_handle = None
            self.writer = None
