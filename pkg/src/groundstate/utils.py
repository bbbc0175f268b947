"""Convenience helpers re-exported for workflow scripts."""

from __future__ import annotations

from .activespace import compute_valence_space_parameters

__all__ = ["compute_valence_space_parameters"]
