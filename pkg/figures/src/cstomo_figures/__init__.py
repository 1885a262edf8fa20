"""Dual-axis figure regeneration from experiment aggregate CSV files.

This package consumes only the documented aggregate.csv format produced by
the cstomo experiment runner; it never imports the runner itself.
"""

from cstomo_figures.plot import FigureSpec, build_figure, render

__version__ = "0.1.0"
