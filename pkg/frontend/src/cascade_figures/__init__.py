"""Render publication-style figures from simulation CSV exports.

Pure view layer: no physics is recomputed here.  Every recipe consumes only
the documented CSV schemas produced by the simulation CLI and renders a
deterministic image (fixed size and dpi, byte-stable across runs).
"""

__version__ = "0.1.0"

from .render import FigureRecipe, RecipeError, render, FIGURES

__all__ = ["FigureRecipe", "RecipeError", "render", "FIGURES", "__version__"]
