from .io import SchemaError
from .render import KINDS, FigureSpec, render

__all__ = ["FigureSpec", "KINDS", "SchemaError", "render"]
__version__ = "0.1.0"
