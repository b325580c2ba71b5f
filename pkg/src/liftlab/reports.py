"""Machine-parseable condition reports.

Each checked condition prints as one line::

    condition=<name> measured=<value> threshold=<value> pass=<true|false>

Rationals print as ``p/q``; logarithms print exactly when rational and as a
9-significant-digit decimal otherwise; unbounded values print as ``inf``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .structure.exact import fmt

REPORT_SCHEMA = "liftlab.report/1"


@dataclass(frozen=True)
class Condition:
    name: str
    measured: object
    threshold: object
    passed: bool

    def line(self) -> str:
        return (f"condition={self.name} measured={fmt(self.measured)} "
                f"threshold={fmt(self.threshold)} pass={fmt(bool(self.passed))}")


@dataclass
class Report:
    conditions: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions)

    def add(self, name, measured, threshold, passed) -> Condition:
        c = Condition(name, measured, threshold, bool(passed))
        self.conditions.append(c)
        return c

    def get(self, name) -> Condition:
        return next(c for c in self.conditions if c.name == name)

    def lines(self) -> list:
        return [c.line() for c in self.conditions]

    def text(self) -> str:
        return "".join(l + "\n" for l in self.lines())


def new_report() -> Report:
    return Report([])


def parse_report_line(line: str) -> dict:
    return dict(part.split("=", 1) for part in line.split())
