"""Rich-based progress and display helpers, plus log-level setup."""

from __future__ import annotations

import logging
import sys
from collections.abc import Sequence

import pandas as pd
import structlog
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from rankfraud.types.evaluation import EvalReport

console = Console()

_LEVELS = {"debug": logging.DEBUG, "info": logging.INFO, "warning": logging.WARNING, "error": logging.ERROR}


def _stderr_logger(*args: object) -> structlog.PrintLogger:
    # Looked up per call so redirected or captured stderr streams are honored.
    return structlog.PrintLogger(sys.stderr)


def configure_logging(level: str = "info") -> None:
    """Route structlog output to stderr, dropping events below ``level``."""
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(_LEVELS.get(level, logging.INFO)),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )


def stage_header(name: str, description: str) -> None:
    console.print()
    console.print(Panel(f"[bold]{description}[/bold]", title=f"Stage: {name}", border_style="blue"))


def create_progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    )


def eval_table_rows(reports: Sequence[EvalReport]) -> list[list[str]]:
    """One row per report: task, learner, FPR %, FNR %, accuracy %."""
    return [[r.task, r.learner, f"{r.fpr:.2f}", f"{r.fnr:.2f}", f"{r.accuracy:.2f}"] for r in reports]


EVAL_COLUMNS = ["Task", "Learner", "FPR %", "FNR %", "Accuracy %"]


def format_eval_table(reports: Sequence[EvalReport]) -> str:
    """Plain-text table for saving next to the JSON reports."""
    rows = [EVAL_COLUMNS, *eval_table_rows(reports)]
    widths = [max(len(row[i]) for row in rows) for i in range(len(EVAL_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths, strict=True)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def print_eval_table(reports: Sequence[EvalReport], title: str = "Cross-validation") -> None:
    table = Table(title=title, show_header=True, header_style="bold")
    for col in EVAL_COLUMNS:
        table.add_column(col, justify="left" if col in ("Task", "Learner") else "right")
    for row in eval_table_rows(reports):
        table.add_row(*row)
    console.print(table)


def print_frame(frame: pd.DataFrame, title: str, limit: int = 20) -> None:
    table = Table(title=title, show_header=True, header_style="bold")
    for col in frame.columns:
        table.add_column(str(col))
    for _, row in frame.head(limit).iterrows():
        table.add_row(*(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row.tolist()))
    console.print(table)
    if len(frame) > limit:
        console.print(f"  [dim]... {len(frame) - limit} more rows[/dim]")
