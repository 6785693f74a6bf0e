"""Solving the quantitative masking game.

A game state's *budget* is the least ``i`` such that the refuter can force
the play into the error sink while the implementation performs at most
``i - 1`` faults; its *depth* is the number of steps that forcing takes at
that budget, counting the sink itself as depth 1.  The game value is
``1 / budget(initial)``, or 0 when the refuter cannot force the sink at all.
"""

from __future__ import annotations

import heapq
import json
import math
import time
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Optional

from .errors import MalformedPlay
from .game import ERR, REFUTER, build_strong, build_weak
from .semantics import augment_mask

INF = math.inf

STRONG, WEAK = "strong", "weak"


@dataclass(frozen=True)
class LayerTable:
    budget: tuple
    depth: tuple
    levels: int = 0

    def state(self, v):
        return self.budget[v], self.depth[v]


def _kinds(game):
    """0 for refuter states (and the sink), 1 for verifier, 2 for fault-pending verifier."""
    kinds = []
    for v in range(game.num_states):
        if game.turn(v) == REFUTER:
            kinds.append(0)
        else:
            kinds.append(2 if game.is_fault_pending(v) else 1)
    return kinds


def _structure(game):
    n = game.num_states
    targets = [sorted({dst for _, dst in out}) for out in game.succ]
    preds = [[] for _ in range(n)]
    for v, ts in enumerate(targets):
        for u in ts:
            preds[u].append(v)
    return targets, preds


def solve_layers(game):
    """Budget and depth for every state, by one attractor computation per budget level."""
    n = game.num_states
    budget = [INF] * n
    depth = [INF] * n
    if game.err is None:
        return LayerTable(tuple(budget), tuple(depth), 0)
    kinds = _kinds(game)
    targets, preds = _structure(game)
    fault_nodes = [v for v in range(n) if kinds[v] == 2]

    prev_rank = None
    prev_size = -1
    level = 0
    while True:
        level += 1
        rank = [INF] * n
        heap = [(1, game.err)]
        if prev_rank is not None:
            for v in fault_nodes:
                worst = max((prev_rank[u] for u in targets[v]), default=INF)
                if worst < INF:
                    heap.append((worst + 1, v))
            heapq.heapify(heap)
        waiting = [len(targets[v]) if kinds[v] == 1 else 0 for v in range(n)]
        size = 0
        while heap:
            r, v = heapq.heappop(heap)
            if rank[v] != INF:
                continue
            rank[v] = r
            size += 1
            for p in preds[v]:
                if rank[p] != INF:
                    continue
                kind = kinds[p]
                if kind == 0:
                    heapq.heappush(heap, (r + 1, p))
                elif kind == 1:
                    # successors settle in nondecreasing rank, so the last one is the max
                    waiting[p] -= 1
                    if waiting[p] == 0:
                        heapq.heappush(heap, (r + 1, p))
        if size == prev_size:
            level -= 1
            break
        for v in range(n):
            if rank[v] != INF and budget[v] == INF:
                budget[v] = level
                depth[v] = rank[v]
        prev_rank = rank
        prev_size = size
    return LayerTable(tuple(budget), tuple(depth), level)


def value(game, layers=None):
    layers = layers or solve_layers(game)
    w = layers.budget[game.initial]
    return Fraction(0) if w == INF else Fraction(1, w)


@dataclass(frozen=True)
class StrategyMap:
    player: str
    choice: dict  # state index -> (label, target index)

    def __contains__(self, v):
        return v in self.choice

    def __getitem__(self, v):
        return self.choice[v]

    def __len__(self):
        return len(self.choice)


def extract_strategies(game, layers):
    """Memoryless refuter and verifier strategies on their winning regions."""
    budget, depth = layers.budget, layers.depth
    refuter, verifier = {}, {}
    for v in range(game.num_states):
        b = budget[v]
        if game.turn(v) == REFUTER:
            if b == INF:
                continue
            if v == game.err:
                refuter[v] = game.succ[v][0]
                continue
            best = min(((depth[dst], dst, lab) for lab, dst in game.succ[v] if budget[dst] == b),
                       key=lambda c: (c[0], c[1]))
            refuter[v] = (best[2], best[1])
        elif b == INF:
            safe = [(dst, lab) for lab, dst in game.succ[v] if budget[dst] == INF]
            dst, lab = min(safe, key=lambda c: c[0])
            verifier[v] = (lab, dst)
    return StrategyMap("refuter", refuter), StrategyMap("verifier", verifier)


@dataclass(frozen=True)
class Play:
    """A finite play prefix: ``nodes[k] --labels[k]--> nodes[k+1]``."""

    nodes: tuple
    labels: tuple
    ends_in_error: bool = False
    lasso: bool = False

    def __post_init__(self):
        if len(self.labels) != len(self.nodes) - 1:
            raise MalformedPlay("a play needs exactly one label per step")

    @property
    def fault_count(self):
        return sum(1 for lab in self.labels if lab.is_fault)

    def steps(self):
        return list(zip(self.nodes, self.labels, self.nodes[1:]))

    @classmethod
    def of(cls, game, nodes, labels, lasso=False):
        for (src, lab, dst) in zip(nodes, labels, nodes[1:]):
            if (lab, dst) not in game.succ[src]:
                raise MalformedPlay(f"no edge {src} --{lab}--> {dst} in the game graph")
        err = game.err is not None and nodes[-1] == game.err
        return cls(tuple(nodes), tuple(labels), err, lasso)


def payoff(play):
    if play.ends_in_error:
        return Fraction(1, 1 + play.fault_count)
    if play.lasso:
        return Fraction(0)
    raise MalformedPlay("play neither reaches the error state nor closes a cycle")


def witness_trace(game, layers, strategies=None):
    """Refuter-optimal play to the sink against budget-maximising verifier replies."""
    budget, depth = layers.budget, layers.depth
    if budget[game.initial] == INF:
        return None
    refuter, _ = strategies or extract_strategies(game, layers)
    nodes, labels = [game.initial], []
    v = game.initial
    while v != game.err:
        if game.turn(v) == REFUTER:
            lab, v = refuter[v]
        else:
            # the verifier delays the sink as long as it can
            lab, v = max(game.succ[v], key=lambda e: (budget[e[1]], depth[e[1]], -e[1]))
        nodes.append(v)
        labels.append(lab)
    return Play.of(game, nodes, labels)


def format_value(val):
    dec = (Decimal(val.numerator) / Decimal(val.denominator)).quantize(
        Decimal("0.001"), rounding=ROUND_HALF_UP)
    return f"{val.numerator}/{val.denominator} ({dec})"


def render_step(game, src, lab, dst):
    node = game.states[src]
    if node == ERR:
        return f"ERR --{lab.pretty()}--> ERR"
    who = "refuter" if game.turn(src) == REFUTER else "verifier"
    if who == "refuter" and dst == game.err:
        text = f"no move is possible; {lab.pretty()} leads to ERR"
    elif who == "refuter":
        side = "nominal" if game.states[dst][1][0] == 1 else "implementation"
        text = f"refuter plays {lab.pretty()} on the {side}"
    elif dst == game.err:
        text = f"verifier cannot answer {node[1][1].pretty()}; the play reaches ERR"
    elif lab.is_mask:
        text = "verifier masks the fault (M)"
    else:
        text = f"verifier answers {lab.pretty()}"
    return f"{text}  => {game.describe(dst)}"


@dataclass
class DistanceReport:
    value: Fraction
    fault_budget: Optional[int]
    witness: Optional[Play]
    mode: str = STRONG
    stats: dict = field(default_factory=dict)
    game: object = field(default=None, repr=False)
    layers: object = field(default=None, repr=False)
    strategies: object = field(default=None, repr=False)

    def witness_lines(self):
        if self.witness is None:
            return []
        return [render_step(self.game, *step) for step in self.witness.steps()]

    def to_text(self):
        return f"masking distance = {format_value(self.value)}"

    def to_machine(self):
        doc = {
            "value_num": self.value.numerator,
            "value_den": self.value.denominator,
            "fault_budget": self.fault_budget,
            "mode": self.mode,
            "states": self.stats.get("game_states"),
            "edges": self.stats.get("game_edges"),
            "solve_ms": self.stats.get("solve_ms"),
            "witness": [
                {"from": self.game.describe(src), "label": str(lab), "to": self.game.describe(dst)}
                for src, lab, dst in (self.witness.steps() if self.witness else [])
            ],
        }
        return json.dumps(doc, sort_keys=True)


def build_game(spec, impl, mode=STRONG, state_cap=None):
    spec_m = augment_mask(spec)
    build = build_weak if mode == WEAK else build_strong
    return build(spec_m, impl, state_cap)


def distance(spec, impl, mode=STRONG, state_cap=None):
    """Masking distance between a fault-free nominal system and an implementation."""
    t0 = time.perf_counter()
    game = build_game(spec, impl, mode, state_cap)
    t1 = time.perf_counter()
    layers = solve_layers(game)
    strategies = extract_strategies(game, layers)
    t2 = time.perf_counter()
    w = layers.budget[game.initial]
    stats = {
        "spec_states": spec.num_states,
        "impl_states": impl.num_states,
        "game_states": game.num_states,
        "game_edges": game.num_edges,
        "build_ms": round((t1 - t0) * 1000, 3),
        "solve_ms": round((t2 - t1) * 1000, 3),
    }
    return DistanceReport(
        value=value(game, layers),
        fault_budget=None if w == INF else int(w),
        witness=witness_trace(game, layers, strategies),
        mode=mode,
        stats=stats,
        game=game,
        layers=layers,
        strategies=strategies,
    )
