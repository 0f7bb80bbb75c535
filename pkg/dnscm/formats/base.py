# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Base class for result writers."""

from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List


class FormatWriter(ABC):
    """Abstract base class for result writers (tables and plots)."""

    @abstractmethod
    def write_header(self, columns: List[str]) -> None:
        """
        Declare the columns of the rows that follow.

        Args:
            columns: List of column names
        """
        pass

    @abstractmethod
    def write_row(self, row: Dict[str, Any]) -> None:
        """
        Write a single row.

        Args:
            row: Dictionary representing a row, with column names as keys
        """
        pass

    @abstractmethod
    def close(self) -> None:
        """Close the writer and flush any buffered data."""
        pass

    def write_rows(self, rows: Iterable[Dict[str, Any]]) -> int:
        """Write every row and return how many were written."""
        count = 0
        for row in rows:
            self.write_row(row)
            count += 1
        return count

    def __enter__(self) -> "FormatWriter":
        """Context manager entry."""
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        """Context manager exit."""
        self.close()
