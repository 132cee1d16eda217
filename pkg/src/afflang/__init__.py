"""An affine first-order language with inductive types.

Parser, typechecker, small-step interpreter, a denotational evaluator in
sets and partial functions, and property suites relating them.
"""
__version__ = "0.1.0"

from .interpreter import Configuration, run, step, trace
from .parser import parse_program, parse_term, parse_type, parse_value
from .printer import print_program, print_term, print_type, print_value
from .typecheck import TypingError, check_configuration, check_term, check_value

__all__ = [
    "Configuration", "run", "step", "trace",
    "parse_program", "parse_term", "parse_type", "parse_value",
    "print_program", "print_term", "print_type", "print_value",
    "TypingError", "check_configuration", "check_term", "check_value",
]
