"""Batch experiments and their CLI."""

from .summary import RunSummary, Table

__all__ = ["RunSummary", "Table"]
