"""Exhaustiveness and redundancy checking for GADT pattern matching."""

from .driver import CheckConfig, Diagnostic, check_match, check_program
from .syntax import parse_program, print_pattern

__all__ = ["CheckConfig", "Diagnostic", "check_match", "check_program",
           "parse_program", "print_pattern"]
