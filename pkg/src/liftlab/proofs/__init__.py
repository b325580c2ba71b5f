"""Proof objects, their text formats and verifiers."""

from .common import ProofError, Verdict

__all__ = ["ProofError", "Verdict"]
