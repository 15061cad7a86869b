# SPDX-License-Identifier: Apache-2.0
"""Structural idiom matching and rewriting over a generic SSA IR."""

from ._smr import Error, Matcher, MatchResult, Module, parse_module, print_module, run

__all__ = [
    "Error",
    "Matcher",
    "MatchResult",
    "Module",
    "parse_module",
    "print_module",
    "run",
]
