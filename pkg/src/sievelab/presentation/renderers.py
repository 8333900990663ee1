"""
Output renderers for reports.

Renderers take structured data from sections and format it for the
terminal (Rich) or as plain text.
"""

import io
from typing import Any

from rich.console import Console
from rich.table import Table
from rich.text import Text


class RichTableRenderer:
    """
    Renderer using Rich for terminal output.

    Features:
    - Colored tables with borders
    - Automatic column width adjustment
    """

    def __init__(self, console: Console | None = None) -> None:
        # record=True lets render_report export the styled output as text;
        # the buffer keeps the recording off the terminal
        self.console = Console(record=True, file=io.StringIO(), width=120)
        self._live = console

    def render_section(self, section_name: str, section_data: dict[str, Any]) -> str:
        """Render a single section with Rich."""
        data_type = section_data.get("type")

        if data_type == "table":
            return self._capture(self._table(section_data))
        elif data_type == "key_value":
            return self._capture(*self._key_value_lines(section_data))
        elif data_type == "text":
            return section_data.get("text", "")
        else:
            return f"Unknown section type: {data_type}"

    def print_report(self, sections: list[tuple[str, dict[str, Any]]]) -> None:
        """Print the report to the terminal with full styling."""
        console = self._live or Console()

        for section_name, section_data in sections:
            console.print(f"\n{section_name}", style="bold cyan")
            console.print("─" * len(section_name), style="cyan")

            data_type = section_data.get("type")
            if data_type == "table":
                console.print(self._table(section_data))
            elif data_type == "key_value":
                for line in self._key_value_lines(section_data):
                    console.print(line)
            elif data_type == "text":
                console.print(section_data.get("text", ""))
            else:
                console.print(f"Unknown section type: {data_type}")

    def render_report(self, sections: list[tuple[str, dict[str, Any]]]) -> str:
        """Render the complete report to plain text (ANSI codes stripped)."""
        for section_name, section_data in sections:
            self.console.print(Text(f"\n{section_name}", style="bold cyan"))
            self.console.print(Text("─" * len(section_name), style="cyan"))
            self.console.print(self.render_section(section_name, section_data), markup=False)

        return self.console.export_text()

    def _table(self, data: dict[str, Any]) -> Table:
        table = Table(title=None, show_header=True, header_style="bold magenta")
        for header in data["headers"]:
            table.add_column(header)
        for row in data["rows"]:
            table.add_row(*[str(cell) for cell in row])
        return table

    def _key_value_lines(self, data: dict[str, Any]) -> list[Text]:
        lines = []
        for key, value in data["data"].items():
            line = Text()
            line.append(f"{key}: ", style="bold")
            line.append(str(value))
            lines.append(line)
        return lines

    def _capture(self, *renderables: Any) -> str:
        with self.console.capture() as capture:
            for item in renderables:
                self.console.print(item)
        return capture.get()


class PlainTextRenderer:
    """
    Plain text renderer.

    Simple ASCII tables for log files and piping to other tools.
    """

    def render_section(self, section_name: str, section_data: dict[str, Any]) -> str:
        """Render a single section as plain text."""
        data_type = section_data.get("type")

        if data_type == "table":
            return self._render_table(section_data)
        elif data_type == "key_value":
            return self._render_key_value(section_data)
        elif data_type == "text":
            return section_data.get("text", "")
        else:
            return f"Unknown section type: {data_type}"

    def render_report(self, sections: list[tuple[str, dict[str, Any]]]) -> str:
        """Render the complete report as plain text."""
        parts = []

        for section_name, section_data in sections:
            parts.append(f"\n{section_name}")
            parts.append("=" * len(section_name))
            parts.append(self.render_section(section_name, section_data))
            parts.append("")

        return "\n".join(parts)

    def _render_table(self, data: dict[str, Any]) -> str:
        """ASCII table with | and - borders, columns sized to their content."""
        headers = data["headers"]
        str_rows = [[str(cell) for cell in row] for row in data["rows"]]

        col_widths = []
        for i, header in enumerate(headers):
            width = len(header)
            for row in str_rows:
                if i < len(row):
                    width = max(width, len(row[i]))
            col_widths.append(width)

        lines = []
        header_cells = [h.ljust(w) for h, w in zip(headers, col_widths, strict=True)]
        lines.append("| " + " | ".join(header_cells) + " |")
        lines.append("|-" + "-|-".join("-" * w for w in col_widths) + "-|")

        for row in str_rows:
            padded = row + [""] * (len(headers) - len(row))
            cells = [cell.ljust(w) for cell, w in zip(padded, col_widths, strict=False)]
            lines.append("| " + " | ".join(cells) + " |")

        return "\n".join(lines)

    def _render_key_value(self, data: dict[str, Any]) -> str:
        if not data["data"]:
            return ""
        max_key_len = max(len(k) for k in data["data"])
        return "\n".join(f"{key.rjust(max_key_len)}: {value}" for key, value in data["data"].items())
