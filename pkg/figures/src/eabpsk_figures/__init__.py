"""Figure rendering for eabpsk experiment tables."""

from .render import FIGURE_KINDS, FigureSpec, SchemaError, read_table, render

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "read_table", "render"]
