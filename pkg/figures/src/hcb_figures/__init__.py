"""Offline figure scripts for hcb-noise preset outputs (CSV consumers only)."""

from .fig1 import make_fig1
from .fig2 import make_fig2
from .fig3 import make_fig3
from .loader import BadColumnsError, MissingInputError

__all__ = ["make_fig1", "make_fig2", "make_fig3",
           "MissingInputError", "BadColumnsError"]
