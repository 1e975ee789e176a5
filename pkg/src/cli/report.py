"""
Machine-readable run reports
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from src.utils.errors import EXIT_NO, EXIT_YES


@dataclass
class RunReport:
    """
    Everything a command has to say about one run

    Keys are emitted in declaration order so that reports of identical runs
    compare equal byte for byte. Timings are only included on request.

    Args:
        command (list): The argument vector that was run
        algorithm (str): Name of the procedure that produced the answer
        seed (int): Seed in effect
    """

    command: list
    algorithm: str = ""
    seed: int = 0
    answer: bool | None = None
    result: dict = field(default_factory=dict)
    error_bound: float | None = None
    outputs: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @contextmanager
    def phase(self, name):
        """Time a block under ``name``."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    @property
    def exit_code(self) -> int:
        return EXIT_NO if self.answer is False else EXIT_YES

    def to_dict(self, include_timings=False) -> dict:
        data = {
            "command": self.command,
            "algorithm": self.algorithm,
            "seed": self.seed,
            "answer": self.answer,
            "result": self.result,
        }
        if self.error_bound is not None:
            data["error_bound"] = self.error_bound
        if self.outputs:
            data["outputs"] = self.outputs
        if include_timings:
            data["timings"] = self.timings
        return data

    def to_json(self, include_timings=False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, default=_jsonable)


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")
