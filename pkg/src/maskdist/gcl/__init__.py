"""Guarded-command modelling language: syntax tree, parser and printer."""

from .parser import parse, parse_file, resolve
from .printer import format_expr, pretty_print
from .syntax import (
    Action, ActionKind, And, Assignment, Const, Eq, InstanceDecl, MainBlock, Not,
    Or, Paren, ProcessDecl, Program, RunStmt, Var, VarDecl,
)

__all__ = [
    "parse", "parse_file", "resolve", "pretty_print", "format_expr",
    "Program", "ProcessDecl", "Action", "ActionKind", "Assignment", "VarDecl",
    "InstanceDecl", "RunStmt", "MainBlock",
    "Const", "Var", "Not", "And", "Or", "Eq", "Paren",
]
