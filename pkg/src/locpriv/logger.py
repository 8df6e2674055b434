#!/usr/bin/env python3

import logging
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Iterator, List, Optional

TIME_FORMAT = '%Y-%m-%d %H:%M:%S'
CONSOLE_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'


class Logger:
    """Console logger that also keeps every message for a per-run log file.

    Stored lines read "<time> <indent>[LEVEL] <name>: <text>"; info messages
    carry the emitting component as "<source> - <text>".
    """

    def __init__(self, name: str, log_output: bool = False, level: int = logging.INFO) -> None:
        self.name: str = name
        self.logs: List[str] = []
        self.log_output: bool = log_output
        self.indent_level: int = 0
        self.indent_char: str = "  "

        # one stdlib logger per run name, never propagated to the root handlers
        self.logger: logging.Logger = logging.getLogger(f"locpriv.{name}")
        self.logger.setLevel(level)
        self.logger.propagate = False
        self.logger.handlers.clear()
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt=TIME_FORMAT))
        self.logger.addHandler(handler)

    @property
    def indent(self) -> str:
        return self.indent_char * self.indent_level

    def _emit(self, level: int, text: str) -> None:
        self.logger.log(level, f"{self.indent}{text}")
        stamp = datetime.now().strftime(TIME_FORMAT)
        line = f"{stamp} {self.indent}[{logging.getLevelName(level)}] {self.name}: {text}"
        self.logs.append(line)
        if self.log_output:
            print(line)

    def info(self, source: str, message: str) -> None:
        self._emit(logging.INFO, f"{source} - {message}")

    def warning(self, message: str) -> None:
        self._emit(logging.WARNING, message)

    def error(self, message: str) -> None:
        self._emit(logging.ERROR, message)

    def increase_indent(self) -> None:
        self.indent_level += 1

    def decrease_indent(self) -> None:
        self.indent_level = max(0, self.indent_level - 1)

    @contextmanager
    def section(self) -> Iterator["Logger"]:
        """Indents everything logged inside the block by one level"""
        self.increase_indent()
        try:
            yield self
        finally:
            self.decrease_indent()

    def flush(self) -> None:
        self.logs = []

    def print_logs_to_file(self, directory: Optional[Path] = None) -> Path:
        """Writes the stored lines to <directory>/<name>.log and returns that path"""
        file_path = Path(directory or ".") / f"{self.name}.log"
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_path.write_text("\n".join(self.logs), encoding="utf-8")
        return file_path
