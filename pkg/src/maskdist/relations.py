"""Masking simulation and bisimulation by greatest-fixpoint refinement of a pair table.

These deliberately avoid the game machinery so they can serve as an
independent check on it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .semantics import MASK, augment_mask, saturate

STRONG, WEAK = "strong", "weak"


def _tables(succ):
    out = []
    for edges in succ:
        table = defaultdict(set)
        for lab, dst in edges:
            table[lab].add(dst)
        out.append(table)
    return out


@dataclass(frozen=True)
class PairRelation:
    spec: object
    impl: object
    pairs: frozenset  # reachable pairs only
    full: frozenset   # the whole greatest fixpoint

    def __contains__(self, pair):
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)

    def matrix(self):
        rows = [[False] * self.impl.num_states for _ in range(self.spec.num_states)]
        for s, t in self.pairs:
            rows[s][t] = True
        return rows

    def dump(self):
        lines = [f"{self.spec.describe(s)} ~ {self.impl.describe(t)}" for s, t in sorted(self.pairs)]
        return "\n".join(lines) + ("\n" if lines else "")


def _edges(lts, mode):
    return saturate(lts).succ if mode == WEAK else lts.succ


def _masking_ok(s, t, rel, spec_t, impl_t):
    # spec moves must be matched by the implementation with the same label
    for lab, dsts in spec_t[s].items():
        if lab == MASK:
            continue
        imp = impl_t[t].get(lab, ())
        for s2 in dsts:
            if not any((s2, t2) in rel for t2 in imp):
                return False
    for lab, dsts in impl_t[t].items():
        if lab.is_fault:
            answers = spec_t[s].get(MASK, ())
        else:
            answers = spec_t[s].get(lab, ())
        for t2 in dsts:
            if not any((s2, t2) in rel for s2 in answers):
                return False
    return True


def refine(candidates, ok):
    """Delete pairs failing ``ok`` until nothing changes."""
    rel = set(candidates)
    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if not ok(pair[0], pair[1], rel):
                rel.discard(pair)
                changed = True
    return rel


def _reachable(rel, spec_t, impl_t, start):
    seen = {start}
    todo = [start]
    while todo:
        s, t = todo.pop()
        nxt = []
        for lab, dsts in spec_t[s].items():
            if lab == MASK:
                continue
            nxt.extend((s2, t2) for s2 in dsts for t2 in impl_t[t].get(lab, ()))
        for lab, dsts in impl_t[t].items():
            answers = spec_t[s].get(MASK if lab.is_fault else lab, ())
            nxt.extend((s2, t2) for t2 in dsts for s2 in answers)
        for pair in nxt:
            if pair in rel and pair not in seen:
                seen.add(pair)
                todo.append(pair)
    return seen


def masking_tables(spec, impl, mode=STRONG):
    spec_m = augment_mask(spec) if MASK not in spec.alphabet else spec
    return _tables(_edges(spec_m, mode)), _tables(_edges(impl, mode))


def masking_sim(spec, impl, mode=STRONG):
    """The greatest masking simulation, or ``None`` if it misses the initial pair."""
    spec_t, impl_t = masking_tables(spec, impl, mode)
    rel = refine(((s, t) for s in range(spec.num_states) for t in range(impl.num_states)),
                 lambda s, t, r: _masking_ok(s, t, r, spec_t, impl_t))
    if (0, 0) not in rel:
        return None
    reach = _reachable(rel, spec_t, impl_t, (0, 0))
    return PairRelation(spec, impl, frozenset(reach), frozenset(rel))


def is_masking_closed(rel, spec, impl, mode=STRONG):
    """True when one refinement pass over ``rel`` would delete nothing."""
    spec_t, impl_t = masking_tables(spec, impl, mode)
    return all(_masking_ok(s, t, rel, spec_t, impl_t) for s, t in rel)


def _bisim_ok(s, t, rel, a_t, b_t):
    for lab, dsts in a_t[s].items():
        imp = b_t[t].get(lab, ())
        for s2 in dsts:
            if not any((s2, t2) in rel for t2 in imp):
                return False
    for lab, dsts in b_t[t].items():
        imp = a_t[s].get(lab, ())
        for t2 in dsts:
            if not any((s2, t2) in rel for s2 in imp):
                return False
    return True


def bisimilar(a, b, mode=STRONG):
    """(Weak) bisimilarity of the initial states of two fault-free systems."""
    a_t, b_t = _tables(_edges(a, mode)), _tables(_edges(b, mode))
    rel = refine(((s, t) for s in range(a.num_states) for t in range(b.num_states)),
                 lambda s, t, r: _bisim_ok(s, t, r, a_t, b_t))
    return (0, 0) in rel
