"""Abstract syntax for guarded-command models.

Nodes are frozen dataclasses.  Every node carries a ``pos`` (line, column)
that is excluded from equality, so two programs compare equal whenever they
are structurally identical regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

Pos = Tuple[int, int]
NOPOS: Pos = (0, 0)


def _pos():
    return field(default=NOPOS, compare=False, repr=False)


# -- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: bool
    pos: Pos = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Not:
    operand: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Paren:
    inner: "Expr"
    pos: Pos = _pos()


Expr = (Const, Var, Not, And, Or, Eq, Paren)


def free_vars(expr) -> set:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Const):
        return set()
    if isinstance(expr, (Not, Paren)):
        return free_vars(expr.operand if isinstance(expr, Not) else expr.inner)
    return free_vars(expr.left) | free_vars(expr.right)


def substitute(expr, mapping):
    """Rename variables according to ``mapping`` (names not in it are kept)."""
    if isinstance(expr, Var):
        return Var(mapping.get(expr.name, expr.name), expr.pos)
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Not):
        return Not(substitute(expr.operand, mapping), expr.pos)
    if isinstance(expr, Paren):
        return Paren(substitute(expr.inner, mapping), expr.pos)
    return type(expr)(substitute(expr.left, mapping), substitute(expr.right, mapping), expr.pos)


def evaluate(expr, env) -> bool:
    """Evaluate ``expr`` under a total mapping from variable names to bools."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Not):
        return not evaluate(expr.operand, env)
    if isinstance(expr, Paren):
        return evaluate(expr.inner, env)
    if isinstance(expr, And):
        return evaluate(expr.left, env) and evaluate(expr.right, env)
    if isinstance(expr, Or):
        return evaluate(expr.left, env) or evaluate(expr.right, env)
    return evaluate(expr.left, env) == evaluate(expr.right, env)


# -- declarations -------------------------------------------------------------

class ActionKind(Enum):
    NORMAL = "normal"
    FAULTY = "faulty"
    INTERNAL = "internal"


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: str = "BOOL"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assignment:
    target: str
    value: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class Action:
    label: str
    kind: ActionKind
    guard: object
    assignments: Tuple[Assignment, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class ProcessDecl:
    name: str
    formals: Tuple[VarDecl, ...]
    locals: Tuple[VarDecl, ...]
    initial: object
    normative: object
    actions: Tuple[Action, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class InstanceDecl:
    name: str
    process: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class RunStmt:
    instance: str
    actuals: Tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class MainBlock:
    instances: Tuple[InstanceDecl, ...]
    runs: Tuple[RunStmt, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Program:
    globals: Tuple[VarDecl, ...]
    processes: Tuple[ProcessDecl, ...]
    main: MainBlock
    pos: Pos = _pos()

    def process(self, name) -> Optional[ProcessDecl]:
        for proc in self.processes:
            if proc.name == name:
                return proc
        return None

    def labelled_actions(self):
        """(label, kind) for every action, in declaration order."""
        return [(a.label, a.kind) for p in self.processes for a in p.actions]
