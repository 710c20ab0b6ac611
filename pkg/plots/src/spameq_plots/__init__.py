"""Figure rendering for spameq CSV output."""

from .render import FIGURE_IDS, render

__all__ = ["FIGURE_IDS", "render"]
