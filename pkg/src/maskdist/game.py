"""Masking game graphs between a nominal system and a faulty implementation.

Game states are tuples ``(spec, pending, impl)``.  ``pending`` is ``None`` on
the refuter's turn (the ``#`` symbol) and ``(side, label)`` on the verifier's
turn, where side 1 means the refuter moved the nominal system and side 2 the
implementation.  The error sink is the string ``"ERR"``.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property

from .errors import AlphabetClash, StateExplosion
from .semantics import MASK, TAU, saturate

log = logging.getLogger(__name__)

ERR = "ERR"
REFUTER, VERIFIER = "R", "V"


def turn_of(node):
    if node == ERR:
        return REFUTER
    return REFUTER if node[1] is None else VERIFIER


def format_node(node, spec=None, impl=None):
    if node == ERR:
        return "ERR"
    s, pending, t = node
    s_txt = spec.describe(s) if spec is not None and spec.var_names else f"s{s}"
    t_txt = impl.describe(t) if impl is not None and impl.var_names else f"t{t}"
    if pending is None:
        sym = "#"
    else:
        side, lab = pending
        sym = f"{lab}^{side}"
    return f"({s_txt}, {sym}, {t_txt}, {turn_of(node)})"


@dataclass(frozen=True)
class GameEdge:
    source: int
    label: object
    target: int
    fault_flag: int
    err_flag: int


@dataclass(eq=False)
class GameGraph:
    states: list
    succ: list  # per state: list of (label, target index)
    initial: int
    err: object  # index of the error sink, or None when it is unreachable
    sigma: frozenset
    weak: bool = False
    spec: object = None
    impl: object = None

    @property
    def num_states(self):
        return len(self.states)

    @cached_property
    def num_edges(self):
        return sum(len(out) for out in self.succ)

    def turn(self, v):
        return turn_of(self.states[v])

    def is_fault_pending(self, v):
        node = self.states[v]
        return node != ERR and node[1] is not None and node[1][0] == 2 and node[1][1].is_fault

    def edges(self, v=None):
        sources = range(self.num_states) if v is None else [v]
        for src in sources:
            for lab, dst in self.succ[src]:
                yield GameEdge(src, lab, dst, int(lab.is_fault), int(dst == self.err))

    def describe(self, v):
        return format_node(self.states[v], self.spec, self.impl)


def _by_label(succ):
    out = []
    for edges in succ:
        table = defaultdict(list)
        for lab, dst in edges:
            table[lab].append(dst)
        out.append(table)
    return out


def _check_inputs(spec_m, impl):
    if MASK not in spec_m.alphabet:
        raise ValueError("the nominal system must be M-augmented")
    if spec_m.fault_set:
        raise AlphabetClash(
            "nominal system carries fault labels: "
            + ", ".join(sorted(lab.name for lab in spec_m.fault_set)))
    if MASK in impl.alphabet:
        raise AlphabetClash("implementation uses the reserved masking label")


def build_strong(spec_m, impl, state_cap=None):
    """Strong masking game graph over the reachable part of the product."""
    _check_inputs(spec_m, impl)
    sigma = (spec_m.alphabet | impl.alphabet) - {MASK} - impl.fault_set
    if TAU in sigma:
        log.warning("τ occurs in a model analysed with the strong game; it must be "
                    "matched exactly (the weak game abstracts from it)")
    return _explore(spec_m.succ, impl.succ, sigma, spec_m, impl, False, state_cap)


def build_weak(spec_m, impl, state_cap=None):
    """Weak masking game graph: moves range over the saturated relations."""
    _check_inputs(spec_m, impl)
    sigma = ((spec_m.alphabet | impl.alphabet) - {MASK} - impl.fault_set) | {TAU}
    spec_w = saturate(spec_m)
    impl_w = saturate(impl)
    return _explore(spec_w.succ, impl_w.succ, sigma, spec_m, impl, True, state_cap)


def _explore(spec_succ, impl_succ, sigma, spec_m, impl, weak, state_cap):
    spec_lab = _by_label(spec_succ)
    impl_lab = _by_label(impl_succ)
    err_labels = sorted(sigma, key=str) or [TAU]

    init = (0, None, 0)
    index = {init: 0}
    states = [init]
    succ = []
    queue = deque([init])
    err_idx = None

    def target(node):
        i = index.get(node)
        if i is None:
            if state_cap is not None and len(states) >= state_cap:
                raise StateExplosion(state_cap)
            i = index[node] = len(states)
            states.append(node)
            queue.append(node)
        return i

    while queue:
        node = queue.popleft()
        out = []
        if node == ERR:
            succ.append([(lab, err_idx) for lab in err_labels])
            continue
        s, pending, t = node
        if pending is None:
            # implementation moves get the lower indices, so strategy tie-breaks
            # prefer exposing the implementation
            for lab, t2 in impl_succ[t]:
                if lab in sigma or lab.is_fault:
                    out.append((lab, target((s, (2, lab), t2))))
            for lab, s2 in spec_succ[s]:
                if lab in sigma:
                    out.append((lab, target((s2, (1, lab), t))))
        else:
            side, lab = pending
            if side == 2 and lab.is_fault:
                for s2 in spec_lab[s].get(MASK, ()):
                    out.append((MASK, target((s2, None, t))))
            elif side == 2:
                for s2 in spec_lab[s].get(lab, ()):
                    out.append((lab, target((s2, None, t))))
            else:
                for t2 in impl_lab[t].get(lab, ()):
                    out.append((lab, target((s, None, t2))))
        if not out:
            if err_idx is None:
                err_idx = target(ERR)
            out = [(lab, err_idx) for lab in err_labels]
        # parallel duplicates arise from saturation; keep the first of each
        succ.append(list(dict.fromkeys(out)))

    return GameGraph(states, succ, 0, err_idx, frozenset(sigma), weak, spec_m, impl)


def dump_game(game):
    lines = [f"# STATES {game.num_states} INIT {game.initial} ERR {game.err}"]
    for v, node in enumerate(game.states):
        if node == ERR:
            lines.append(f"# {v} = ERR")
        else:
            s, pending, t = node
            sym = "#" if pending is None else f"{pending[1]}^{pending[0]}"
            lines.append(f"# {v} = ({s}, {sym}, {t}, {turn_of(node)})")
    for e in sorted(game.edges(), key=lambda e: (e.source, str(e.label), e.target)):
        lines.append(f"{e.source} {e.label} {e.target} {e.fault_flag} {e.err_flag}")
    return "\n".join(lines) + "\n"
