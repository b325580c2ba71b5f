"""Gadget composition, proof verification and entropy tooling for
lifting experiments on small CNF formulas."""

__version__ = "0.1.0"
