"""
algcps: CPS translations between the linear and the algebraic lambda calculi
"""

__version__ = "0.1.0"
__author__ = "algcps contributors"

from .core import load_suite, run_suite
from .cps import Direction, colon, cps
from .harness import check_lemma
from .inverse import classify, invert
from .rewrite import Calculus, normalize, reachable
from .syntax import format_term, parse_term

__all__ = [
    "__version__",
    "__author__",
    "Calculus",
    "Direction",
    "check_lemma",
    "classify",
    "colon",
    "cps",
    "format_term",
    "invert",
    "load_suite",
    "normalize",
    "parse_term",
    "reachable",
    "run_suite",
]
