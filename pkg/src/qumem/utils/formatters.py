"""Output formatters for qumem."""

import csv
import io
import json
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from ..models.results import OutputFormat, ResultTable


def format_float(x: float) -> str:
    """17 significant digits, locale independent."""
    return format(x, '.17g')


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


class OutputFormatter:
    """Base class for output formatters."""

    def format(self, table: ResultTable) -> str:
        """Format a result table."""
        raise NotImplementedError


class CSVFormatter(OutputFormatter):
    """CSV output formatter."""

    def format(self, table: ResultTable) -> str:
        """Header row, then one line per row, '\\n' line endings."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buffer.getvalue()


class JSONFormatter(OutputFormatter):
    """JSON output formatter."""

    def format(self, table: ResultTable) -> str:
        """List of row objects, keys in column order."""
        records = [
            {column: _json_value(value) for column, value in zip(table.columns, row)}
            for row in table.rows
        ]
        return json.dumps(records, indent=2, ensure_ascii=False) + "\n"


class FormatterFactory:
    """Factory for creating output formatters."""

    _formatters = {
        OutputFormat.CSV: CSVFormatter,
        OutputFormat.JSON: JSONFormatter,
    }

    @classmethod
    def get_formatter(cls, format_type: OutputFormat) -> OutputFormatter:
        """Get formatter for the specified format."""
        formatter_class = cls._formatters.get(format_type)
        if formatter_class is None:
            raise ValueError(f"Unsupported output format: {format_type}")

        return formatter_class()


def format_table(
    table: ResultTable,
    format_type: OutputFormat,
    output_file: Optional[Path] = None,
) -> str:
    """Format a table and optionally save it to file."""
    formatter = FormatterFactory.get_formatter(format_type)
    formatted = formatter.format(table)

    if output_file:
        output_file.parent.mkdir(parents=True, exist_ok=True)
        # newline='' keeps '\n' on every platform
        with open(output_file, 'w', encoding='utf-8', newline='') as f:
            f.write(formatted)

    return formatted
