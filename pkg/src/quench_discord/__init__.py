"""Quench dynamics of the XY chain and geometric discord of neighbouring spins."""

from __future__ import annotations

__version__ = "0.1.0"
