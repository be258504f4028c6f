"""Figure rendering for symcone experiment outputs."""

from .render import (
    FigureSpec,
    RenderError,
    discover_inputs,
    render_levelcurves,
    render_regret,
    render_svm2d,
)

__version__ = "0.1.0"
