"""
CLI display module for fptmc

Human-readable summaries go to stderr; stdout carries the JSON report.
"""

import logging
import sys

from colorama import Fore, Style, init

logger = logging.getLogger(__name__)


class Display:
    """
    CLI display handler for fptmc
    """

    def __init__(self, color_output=True, stream=None):
        """
        Initialize the display handler

        Args:
            color_output (bool, optional): Whether to use colored output. Defaults to True.
            stream (file, optional): Where to write. Defaults to sys.stderr.
        """
        self.color_output = color_output
        self.stream = stream if stream is not None else sys.stderr

        if self.color_output:
            init()
            self.COLORS = {
                'RESET': Style.RESET_ALL,
                'RED': Fore.RED,
                'GREEN': Fore.GREEN,
                'YELLOW': Fore.YELLOW,
                'CYAN': Fore.CYAN,
                'BOLD': Style.BRIGHT,
            }
        else:
            self.COLORS = {k: '' for k in ['RESET', 'RED', 'GREEN', 'YELLOW', 'CYAN', 'BOLD']}

    def _write(self, text):
        print(text, file=self.stream)

    def answer(self, report):
        """
        Display the outcome of a run

        Args:
            report (RunReport): Finished report
        """
        c = self.COLORS
        if report.answer is None:
            verdict = f"{c['CYAN']}DONE{c['RESET']}"
        elif report.answer:
            verdict = f"{c['GREEN']}YES{c['RESET']}"
        else:
            verdict = f"{c['RED']}NO{c['RESET']}"
        line = f"{c['BOLD']}{verdict}{c['RESET']}"
        if report.algorithm:
            line += f" via {c['YELLOW']}{report.algorithm}{c['RESET']}"
        if report.error_bound:
            line += f" (false-negative bound {report.error_bound:.3g})"
        self._write(line)
        for key, value in report.result.items():
            if isinstance(value, (dict, list)) and len(str(value)) > 120:
                continue
            self._write(f"  {key}: {c['CYAN']}{value}{c['RESET']}")
        for name, value in report.outputs.items():
            if "\n" in value:
                self._write(f"  {name}: inline in the report")
            else:
                self._write(f"  wrote {name}: {value}")

    def suite(self, name, passed, failed):
        """Result line of one verification suite."""
        c = self.COLORS
        color = c['GREEN'] if failed == 0 else c['RED']
        self._write(f"{c['BOLD']}{name}{c['RESET']}: {color}{passed} passed, {failed} failed{c['RESET']}")

    def error(self, message):
        """
        Display error message

        Args:
            message (str): Error message
        """
        self._write(f"{self.COLORS['RED']}Error: {message}{self.COLORS['RESET']}")

    def warning(self, message):
        self._write(f"{self.COLORS['YELLOW']}Warning: {message}{self.COLORS['RESET']}")

    def success(self, message):
        """
        Display success message

        Args:
            message (str): Success message
        """
        self._write(f"{self.COLORS['GREEN']}{message}{self.COLORS['RESET']}")

    def info(self, message):
        self._write(f"{self.COLORS['CYAN']}{message}{self.COLORS['RESET']}")
