"""Explicit labelled transition systems and the operations the masking game needs.

A compiled model's states are valuations packed into Python ints: bit ``k``
holds the value of the ``k``-th variable of :attr:`Machine.var_names`
(globals first, then each running instance's locals in declaration order).
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import CompileError, InitialNotUnique, StateExplosion
from .gcl.syntax import ActionKind, And, Const, Eq, Not, Or, Paren, Var, substitute

log = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 2 ** 24


# -- labels -------------------------------------------------------------------

_KIND_ORDER = {"obs": 0, "tau": 1, "fault": 2, "mask": 3}


@dataclass(frozen=True)
class Label:
    kind: str
    name: str = ""

    def __str__(self):
        if self.kind in ("tau", "mask"):
            return self.kind
        return f"{self.kind}:{self.name}"

    def __repr__(self):
        return f"Label({self})"

    @property
    def is_fault(self):
        return self.kind == "fault"

    @property
    def is_tau(self):
        return self.kind == "tau"

    @property
    def is_mask(self):
        return self.kind == "mask"

    @property
    def is_observable(self):
        return self.kind == "obs"

    def pretty(self):
        """Model-level rendering used in traces."""
        if self.kind == "obs":
            return self.name
        if self.kind == "fault":
            return f"{self.name} (fault)"
        return {"tau": "τ", "mask": "M"}[self.kind]

    @classmethod
    def parse(cls, text):
        if text in ("tau", "mask"):
            return cls(text)
        kind, sep, name = text.partition(":")
        if not sep or kind not in ("obs", "fault"):
            raise ValueError(f"bad label {text!r}")
        return cls(kind, name)


def Observable(name):
    return Label("obs", name)


def Fault(name):
    return Label("fault", name)


TAU = Label("tau")
MASK = Label("mask")


def label_sort_key(label):
    return str(label)


# -- transition systems -------------------------------------------------------

@dataclass(frozen=True)
class LTS:
    """A finite labelled transition system with initial state 0.

    ``states`` holds one payload per state (packed valuations for compiled
    models, anything hashable otherwise).  ``edges`` is sorted and free of
    duplicates.
    """

    states: tuple
    edges: tuple
    alphabet: frozenset
    var_names: tuple = ()

    @classmethod
    def build(cls, states, edges, alphabet=None, var_names=(), prune=True):
        if isinstance(states, int):
            states = tuple(range(states))
        states = tuple(states)
        edges = set(edges)
        for src, _, dst in edges:
            if not (0 <= src < len(states) and 0 <= dst < len(states)):
                raise ValueError(f"edge ({src}, {dst}) out of range")
        alpha = frozenset(lab for _, lab, _ in edges)
        if alphabet is not None:
            alpha |= frozenset(alphabet)
        lts = cls(states, _sort_edges(edges), alpha, tuple(var_names))
        return lts.reachable_part() if prune else lts

    @property
    def num_states(self):
        return len(self.states)

    @cached_property
    def fault_set(self):
        return frozenset(lab for lab in self.alphabet if lab.is_fault)

    @cached_property
    def observables(self):
        return frozenset(lab for lab in self.alphabet if lab.is_observable)

    @cached_property
    def succ(self):
        out = [[] for _ in self.states]
        for src, lab, dst in self.edges:
            out[src].append((lab, dst))
        return out

    @cached_property
    def deadlocks(self):
        return frozenset(i for i, nxt in enumerate(self.succ) if not nxt)

    def describe(self, i):
        payload = self.states[i]
        if self.var_names and isinstance(payload, int):
            return ",".join(f"{n}={payload >> k & 1}" for k, n in enumerate(self.var_names))
        return str(payload)

    def reachable_part(self):
        """Drop states unreachable from 0, keeping the relative order of the rest."""
        seen = {0}
        todo = [0]
        succ = self.succ
        while todo:
            s = todo.pop()
            for _, t in succ[s]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        if len(seen) == len(self.states):
            return self
        keep = sorted(seen)
        renum = {old: new for new, old in enumerate(keep)}
        edges = [(renum[s], lab, renum[t]) for s, lab, t in self.edges if s in renum]
        return LTS(tuple(self.states[i] for i in keep), _sort_edges(edges),
                   self.alphabet, self.var_names)


def _sort_edges(edges):
    return tuple(sorted(edges, key=lambda e: (e[0], str(e[1]), e[2])))


def restrict(lts, forbidden):
    """Remove every edge whose label is in ``forbidden`` (Milner restriction)."""
    forbidden = frozenset(forbidden)
    if not forbidden:
        return lts
    edges = tuple(e for e in lts.edges if e[1] not in forbidden)
    pruned = LTS(lts.states, edges, lts.alphabet - forbidden, lts.var_names)
    return pruned.reachable_part()


def augment_mask(lts):
    """The M-augmented system: a masking self-loop on every state."""
    if MASK in lts.alphabet:
        raise ValueError("system already carries masking transitions")
    edges = lts.edges + tuple((s, MASK, s) for s in range(lts.num_states))
    return LTS(lts.states, _sort_edges(edges), lts.alphabet | {MASK}, lts.var_names)


def strip_faults(lts):
    """Relabel fault transitions as observable ones.

    Used when a fault-tolerant implementation plays the role of the nominal
    system, where its faults are ordinary behaviour.
    """
    edges = [(s, Observable(lab.name) if lab.is_fault else lab, t) for s, lab, t in lts.edges]
    alphabet = {Observable(lab.name) if lab.is_fault else lab for lab in lts.alphabet}
    return LTS(lts.states, _sort_edges(set(edges)), frozenset(alphabet), lts.var_names)


# -- weak transitions ---------------------------------------------------------

@dataclass(frozen=True)
class WeakEdges:
    num_states: int
    edges: frozenset

    @cached_property
    def succ(self):
        out = [[] for _ in range(self.num_states)]
        for src, lab, dst in sorted(self.edges, key=lambda e: (e[0], str(e[1]), e[2])):
            out[src].append((lab, dst))
        return out


def tau_closure(lts):
    """For every state, the states reachable by zero or more τ steps."""
    tau_succ = [[] for _ in lts.states]
    for s, lab, t in lts.edges:
        if lab.is_tau:
            tau_succ[s].append(t)
    closure = []
    for s in range(lts.num_states):
        seen = {s}
        todo = [s]
        while todo:
            u = todo.pop()
            for v in tau_succ[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        closure.append(frozenset(seen))
    return closure


def saturate(lts):
    """Weak transition relation: τ-padding around observable steps only."""
    clo = tau_closure(lts)
    out = set()
    obs_by_src = [[] for _ in lts.states]
    for s, lab, t in lts.edges:
        if lab.is_observable:
            obs_by_src[s].append((lab, t))
        elif not lab.is_tau:
            out.add((s, lab, t))  # faults and M stay strong
    for s in range(lts.num_states):
        for p in clo[s]:
            out.add((s, TAU, p))
            for lab, q in obs_by_src[p]:
                for r in clo[q]:
                    out.add((s, lab, r))
    return WeakEdges(lts.num_states, frozenset(out))


# -- export -------------------------------------------------------------------

def dump_lts(lts):
    lines = [f"STATES {lts.num_states}", "INIT 0"]
    for s, lab, t in sorted(lts.edges, key=lambda e: (e[0], str(e[1]), e[2])):
        lines.append(f"{s} {lab} {t}")
    return "\n".join(lines) + "\n"


def load_lts(text):
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "STATES" or lines[1] != ["INIT", "0"]:
        raise ValueError("not an LTS dump")
    n = int(lines[0][1])
    edges = [(int(a), Label.parse(lab), int(b)) for a, lab, b in lines[2:]]
    return LTS.build(n, edges, prune=False)


# -- compilation --------------------------------------------------------------

def _flatten(expr, cls):
    if isinstance(expr, cls):
        return _flatten(expr.left, cls) + _flatten(expr.right, cls)
    if isinstance(expr, Paren) and isinstance(expr.inner, cls):
        return _flatten(expr.inner, cls)
    return [expr]


def _py(expr, index):
    """Python source evaluating ``expr`` to 0/1 over the packed valuation ``v``."""
    if isinstance(expr, Const):
        return "1" if expr.value else "0"
    if isinstance(expr, Var):
        return f"(v>>{index[expr.name]}&1)"
    if isinstance(expr, Paren):
        return _py(expr.inner, index)
    if isinstance(expr, Not):
        return f"(1^{_py(expr.operand, index)})"
    if isinstance(expr, Eq):
        return f"(1^{_py(expr.left, index)}^{_py(expr.right, index)})"
    op = "&" if isinstance(expr, And) else "|"
    parts = _flatten(expr, type(expr))
    return "(" + op.join(_py(p, index) for p in parts) + ")"


def _kleene(expr, env):
    """Three-valued evaluation; ``None`` means undetermined."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return env.get(expr.name)
    if isinstance(expr, Paren):
        return _kleene(expr.inner, env)
    if isinstance(expr, Not):
        x = _kleene(expr.operand, env)
        return None if x is None else not x
    if isinstance(expr, Eq):
        a, b = _kleene(expr.left, env), _kleene(expr.right, env)
        return None if a is None or b is None else a == b
    vals = [_kleene(p, env) for p in _flatten(expr, type(expr))]
    if isinstance(expr, And):
        if False in vals:
            return False
        return None if None in vals else True
    if True in vals:
        return True
    return None if None in vals else False


@dataclass
class ActionInstance:
    instance: str
    label: str
    kind: ActionKind
    guard: object
    update: object
    source: str = field(repr=False, default="")

    @property
    def lts_label(self):
        if self.kind is ActionKind.FAULTY:
            return Fault(self.label)
        if self.kind is ActionKind.INTERNAL:
            return TAU
        return Observable(self.label)


class Machine:
    """Executable form of a resolved program: variable layout plus guarded updates."""

    def __init__(self, program):
        self.program = program
        self.var_names = [g.name for g in program.globals]
        index = {n: k for k, n in enumerate(self.var_names)}
        procs = {p.name: p for p in program.processes}
        inst_proc = {i.name: procs[i.process] for i in program.main.instances}
        self.actions = []
        initials = []
        for run in program.main.runs:
            proc = inst_proc[run.instance]
            rename = {f.name: a for f, a in zip(proc.formals, run.actuals)}
            for loc in proc.locals:
                qual = f"{run.instance}.{loc.name}"
                rename[loc.name] = qual
                index[qual] = len(self.var_names)
                self.var_names.append(qual)
            initials.append(substitute(proc.initial, rename))
            for action in proc.actions:
                self.actions.append(self._compile_action(run.instance, action, rename, index))
        self.index = index
        self.initial_clauses = initials

    @staticmethod
    def _compile_action(instance, action, rename, index):
        guard_src = _py(substitute(action.guard, rename), index)
        targets = [index[rename.get(a.target, a.target)] for a in action.assignments]
        if len(set(targets)) != len(targets):
            raise CompileError(
                f"action [{action.label}] of instance {instance!r} assigns one variable "
                "twice through aliased parameters")
        keep = ~sum(1 << k for k in targets)
        parts = [f"(v&{keep})"]
        for k, asg in zip(targets, action.assignments):
            parts.append(f"({_py(substitute(asg.value, rename), index)}<<{k})")
        update_src = "|".join(parts)
        guard = eval(f"lambda v: {guard_src}")  # noqa: S307 - generated from the AST
        update = eval(f"lambda v: {update_src}")  # noqa: S307
        return ActionInstance(instance, action.label, action.kind, guard, update,
                              f"{guard_src} -> {update_src}")

    def initial_state(self):
        """The unique valuation satisfying every Initial clause."""
        clauses = self.initial_clauses
        mentioned = []
        seen = set()
        for c in clauses:
            for name in _vars_in_order(c):
                if name not in seen:
                    seen.add(name)
                    mentioned.append(name)
        free = [n for n in self.var_names if n not in seen]
        conj = clauses[0] if clauses else Const(True)
        for c in clauses[1:]:
            conj = And(conj, c)

        solutions = []
        env = {}

        def search(k):
            if len(solutions) > 1:
                return
            val = _kleene(conj, env)
            if val is False:
                return
            if k == len(mentioned):
                if val:
                    solutions.append(dict(env))
                return
            name = mentioned[k]
            for b in (False, True):
                env[name] = b
                search(k + 1)
            del env[name]

        search(0)
        if not solutions:
            raise InitialNotUnique("no valuation satisfies the Initial clauses")
        if free:
            raise InitialNotUnique(
                f"Initial clauses leave {len(free)} variable(s) unconstrained, e.g. {free[0]!r}",
                samples=free[:5])
        if len(solutions) > 1:
            a, b = solutions
            diff = [n for n in mentioned if a[n] != b[n]]
            raise InitialNotUnique(
                f"Initial clauses admit several states (they differ on {diff[0]!r})",
                samples=diff[:5])
        sol = solutions[0]
        return sum(1 << self.index[n] for n, b in sol.items() if b)

    def enabled(self, v):
        """(ActionInstance, successor) for every action whose guard holds in ``v``."""
        return [(a, a.update(v)) for a in self.actions if a.guard(v)]

    def describe(self, v):
        return ",".join(f"{n}={v >> k & 1}" for k, n in enumerate(self.var_names))

    def explore(self, state_cap=DEFAULT_STATE_CAP):
        init = self.initial_state()
        index = {init: 0}
        order = [init]
        edges = set()
        labelled = [(a.guard, a.update, a.lts_label) for a in self.actions]
        queue = deque([init])
        while queue:
            v = queue.popleft()
            src = index[v]
            for guard, update, lab in labelled:
                if guard(v):
                    w = update(v)
                    dst = index.get(w)
                    if dst is None:
                        if len(order) >= state_cap:
                            raise StateExplosion(state_cap)
                        dst = index[w] = len(order)
                        order.append(w)
                        queue.append(w)
                    edges.add((src, lab, dst))
        alphabet = frozenset(a.lts_label for a in self.actions)
        return LTS(tuple(order), _sort_edges(edges), alphabet, tuple(self.var_names))


def _vars_in_order(expr):
    if isinstance(expr, Var):
        yield expr.name
    elif isinstance(expr, Not):
        yield from _vars_in_order(expr.operand)
    elif isinstance(expr, Paren):
        yield from _vars_in_order(expr.inner)
    elif isinstance(expr, (And, Or, Eq)):
        yield from _vars_in_order(expr.left)
        yield from _vars_in_order(expr.right)


def compile_program(program, state_cap=DEFAULT_STATE_CAP):
    """Explore the reachable state space of ``program`` into an :class:`LTS`."""
    lts = Machine(program).explore(state_cap)
    if lts.deadlocks:
        log.debug("%d deadlock state(s) in compiled model", len(lts.deadlocks))
    return lts
