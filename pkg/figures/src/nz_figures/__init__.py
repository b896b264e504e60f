"""Figure rendering for the nz CLI's CSV outputs."""

from .render import FigureJob, SchemaError, render

__all__ = ["FigureJob", "SchemaError", "render"]
