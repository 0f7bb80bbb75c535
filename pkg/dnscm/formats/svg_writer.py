# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""SVG line-plot writer (requires matplotlib)."""

from pathlib import Path
from typing import Any, Dict, List, Optional

from dnscm.formats.base import FormatWriter


def _require_matplotlib() -> Any:
    try:
        import matplotlib
    except ImportError:
        raise ValueError(
            "SVG output requires matplotlib. Install with: pip install dnscm[plot]"
        )
    return matplotlib


class SVGPlotWriter(FormatWriter):
    """
    Collect rows and render them as a line plot on close.

    The first header column is the x axis; every other column is drawn as one
    series. Output carries no timestamp and a fixed id salt, so identical
    rows give identical files.
    """

    def __init__(
        self,
        file_path: str,
        title: str = "",
        xlabel: Optional[str] = None,
        ylabel: str = "",
        labels: Optional[Dict[str, str]] = None,
    ):
        """
        Initialize SVG writer.

        Args:
            file_path: Path to the output SVG file
            title: Plot title
            xlabel: x axis label (default: the x column name)
            ylabel: y axis label
            labels: Legend label per series column (default: the column name)
        """
        _require_matplotlib()
        self.file_path = file_path
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.labels = labels or {}
        self.columns: List[str] = []
        self.rows: List[Dict[str, Any]] = []
        self._closed = False

    def write_header(self, columns: List[str]) -> None:
        if len(columns) < 2:
            raise ValueError("A line plot needs an x column and at least one series")
        self.columns = list(columns)

    def write_row(self, row: Dict[str, Any]) -> None:
        if not self.columns:
            self.write_header(list(row.keys()))
        self.rows.append(row)

    def close(self) -> None:
        """Render the collected rows."""
        if self._closed:
            return
        self._closed = True
        if not self.columns:
            return

        matplotlib = _require_matplotlib()
        from matplotlib.figure import Figure

        x_column, series = self.columns[0], self.columns[1:]
        xs = [float(row[x_column]) for row in self.rows]

        figure = Figure(figsize=(6.4, 4.0))
        axes = figure.subplots()
        for column in series:
            axes.plot(xs, [float(row[column]) for row in self.rows], label=self.labels.get(column, column))
        axes.set_title(self.title)
        axes.set_xlabel(self.xlabel or x_column)
        axes.set_ylabel(self.ylabel)
        axes.legend()

        Path(self.file_path).parent.mkdir(parents=True, exist_ok=True)
        with matplotlib.rc_context({"svg.hashsalt": "dnscm", "svg.fonttype": "none"}):
            figure.savefig(self.file_path, format="svg", metadata={"Date": None})
