"""Outer length billiards on strictly convex planar curves."""

from .errors import OLBError
from .geometry import Oval, parse_table
from .kernel import BACKEND
from .olbmap import orbit, step

__all__ = ["BACKEND", "OLBError", "Oval", "orbit", "parse_table", "step"]
__version__ = "0.1.0"
