"""Offline figure renderer for the specmux CLI's CSV outputs."""

__version__ = "0.1.0"

from .render import FIGURE_IDS, FigureSpec, PlotDataError, render

__all__ = ["FIGURE_IDS", "FigureSpec", "PlotDataError", "render"]
