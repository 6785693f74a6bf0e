"""Masking fault-tolerance distance between a nominal model and a faulty implementation."""

from .errors import (
    AlphabetClash, CompileError, InitialNotUnique, MalformedPlay, MaskDistError, ParseError,
    ResolveError, StateExplosion,
)
from .gcl import parse, parse_file, pretty_print
from .game import build_strong, build_weak
from .relations import bisimilar, masking_sim
from .semantics import (
    LTS, MASK, TAU, Fault, Label, Observable, augment_mask, compile_program, restrict, saturate,
)
from .solver import (
    STRONG, WEAK, DistanceReport, distance, extract_strategies, payoff, solve_layers, value,
    witness_trace,
)

__all__ = [
    "parse", "parse_file", "pretty_print", "compile_program",
    "LTS", "Label", "Observable", "Fault", "TAU", "MASK",
    "restrict", "augment_mask", "saturate",
    "build_strong", "build_weak",
    "solve_layers", "value", "extract_strategies", "witness_trace", "payoff", "distance",
    "DistanceReport", "STRONG", "WEAK",
    "masking_sim", "bisimilar",
    "MaskDistError", "ParseError", "ResolveError", "CompileError", "InitialNotUnique",
    "StateExplosion", "AlphabetClash", "MalformedPlay",
]
