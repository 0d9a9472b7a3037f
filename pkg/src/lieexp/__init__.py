"""Exact arithmetic for exponential-polynomial Witt and Poisson Lie algebras.

Typical use::

    from lieexp import parse_signature, parse_element, bracket

    sig = parse_signature("H(1,1)")
    bracket(parse_element("e^{x1}*y1", sig), parse_element("x1^2", sig))
"""

from .brackets import bracket, divergence, hamiltonian_field, jacobi_residual
from .core import AlgebraSignature, Element
from .errors import LieExpError
from .grading import compare_h, compare_o, decompose, grade_key, stats
from .ideals import closure_saturate, simplicity_experiment
from .parsing import format_signature, parse_element, parse_signature, print_element
from .structure import center_probe, check_derivation, find_ad_diagonal, residue
from .window import TruncationCaps, Window

__version__ = "0.1.0"

__all__ = [
    "AlgebraSignature", "Element", "LieExpError", "TruncationCaps", "Window",
    "bracket", "center_probe", "check_derivation", "closure_saturate", "compare_h", "compare_o",
    "decompose", "divergence", "find_ad_diagonal", "format_signature", "grade_key",
    "hamiltonian_field", "jacobi_residual", "parse_element", "parse_signature", "print_element",
    "residue", "simplicity_experiment", "stats",
]
