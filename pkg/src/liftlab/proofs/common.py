from __future__ import annotations

from dataclasses import dataclass, field


class ProofError(ValueError):
    """Malformed proof text (as opposed to a well-formed but invalid proof)."""


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    step: int = None
    measures: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def reject(reason: str, step: int = None) -> Verdict:
    return Verdict(False, reason, step)


def parse_int(tok: str, line_no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ProofError(f"line {line_no}: expected an integer, got {tok!r}") from None


def content_lines(text: str):
    """(line number, tokens) for non-blank, non-comment lines."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c ") or line == "c" or line.startswith("#"):
            continue
        yield no, line.split()
