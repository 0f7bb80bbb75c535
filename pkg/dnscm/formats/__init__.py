# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Writers for experiment results."""

from dnscm.formats.base import FormatWriter
from dnscm.formats.csv_writer import CSVWriter, format_cell
from dnscm.formats.svg_writer import SVGPlotWriter

__all__ = [
    "FormatWriter",
    "CSVWriter",
    "SVGPlotWriter",
    "format_cell",
]
