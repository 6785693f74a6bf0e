import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import handwritten_model, corpus_model
from generators import FAULTS, random_lts
from oracles import naive_saturate
from maskdist.errors import CompileError, InitialNotUnique, StateExplosion
from maskdist.gcl import parse
from maskdist.semantics import (
    LTS, MASK, TAU, Fault, Label, Machine, Observable, augment_mask, compile_program, dump_lts,
    load_lts, restrict, saturate, strip_faults, tau_closure,
)

A, B = Observable("a"), Observable("b")


def _program(body, locals_="x: BOOL;", initial="!x", main_run="run p();", globals_=""):
    return parse(f"""{globals_}
Process P {{
\t{locals_}
\tInitial: {initial};
{body}
}}

Main() {{
\tp: P;
\t{main_run}
}}
""")


def test_two_state_cycle():
    lts = compile_program(_program("\t[a] true -> x = !x;"))
    assert lts.num_states == 2
    assert lts.edges == ((0, A, 1), (1, A, 0))
    assert lts.describe(0) == "p.x=0"


def test_assignments_are_simultaneous():
    prog = _program("\t[swap] true -> x = y, y = x;", locals_="x, y: BOOL;", initial="x && !y")
    m = Machine(prog)
    v0 = m.initial_state()
    (action, v1), = m.enabled(v0)
    assert m.describe(v1) == "p.x=0,p.y=1"


def test_action_kinds_map_to_labels():
    lts = compile_program(_program(
        "\t[a] !x -> x = true;\n\t[f] faulty x -> x = false;\n\t[i] internal x -> x = x;"))
    assert set(lab for _, lab, _ in lts.edges) == {A, Fault("f"), TAU}
    assert lts.fault_set == {Fault("f")}


def test_unconstrained_initial_rejected():
    with pytest.raises(InitialNotUnique):
        compile_program(_program("\t[a] true -> x = !x;", locals_="x, y: BOOL;", initial="!x"))


def test_ambiguous_initial_rejected():
    with pytest.raises(InitialNotUnique):
        compile_program(_program("\t[a] true -> x = !x;", initial="x || !x"))


def test_unsatisfiable_initial_rejected():
    with pytest.raises(InitialNotUnique):
        compile_program(_program("\t[a] true -> x = !x;", initial="x && !x"))


def test_aliased_double_assignment_rejected():
    prog = parse("""Global g: BOOL;
Process P(u: BOOL, w: BOOL) {
\tInitial: true;
\t[a] true -> u = true, w = false;
}
Main() {
\tp: P;
\trun p(g, g);
}
""")
    with pytest.raises(CompileError, match="aliased"):
        compile_program(prog)


def test_state_cap():
    prog = _program("\t[a] true -> x = !x, y = x;", locals_="x, y: BOOL;", initial="!x && !y")
    with pytest.raises(StateExplosion) as exc:
        compile_program(prog, state_cap=2)
    assert exc.value.cap == 2


def test_handwritten_byzantine_model_is_not_uniquely_initialised():
    with pytest.raises(InitialNotUnique):
        handwritten_model("byzantine4.gcl")


def test_restrict_examples():
    lts = LTS.build(3, [(0, A, 1), (0, Fault("f"), 2), (2, A, 0)])
    r = restrict(lts, {Fault("f")})
    assert r.num_states == 2
    assert r.edges == ((0, A, 1),)
    assert restrict(lts, set()) is lts


def test_augment_mask_adds_one_loop_per_state():
    lts = corpus_model("memory.nominal.gcl")
    m = augment_mask(lts)
    added = set(m.edges) - set(lts.edges)
    assert added == {(s, MASK, s) for s in range(lts.num_states)}
    with pytest.raises(ValueError):
        augment_mask(m)


def test_strip_faults_relabels():
    lts = LTS.build(2, [(0, Fault("f"), 1), (1, A, 0)])
    s = strip_faults(lts)
    assert set(s.edges) == {(0, Observable("f"), 1), (1, A, 0)}
    assert not s.fault_set


def test_saturate_example():
    lts = LTS.build(3, [(0, TAU, 1), (1, A, 2), (2, TAU, 2), (2, Fault("f"), 0)])
    weak = saturate(lts)
    assert (0, A, 2) in weak.edges
    assert (0, TAU, 0) in weak.edges and (0, TAU, 1) in weak.edges
    assert (2, Fault("f"), 0) in weak.edges
    assert (1, Fault("f"), 0) not in weak.edges  # faults are not τ-padded


def test_tau_closure_is_reflexive_transitive():
    lts = LTS.build(3, [(0, TAU, 1), (1, TAU, 2), (2, A, 0)])
    assert tau_closure(lts) == [frozenset({0, 1, 2}), frozenset({1, 2}), frozenset({2})]


def test_brp_saturation_matches_naive_oracle():
    lts = corpus_model("brp_1_1.impl.gcl")
    assert set(saturate(lts).edges) == naive_saturate(lts)


def test_philosophers_deadlock_only_after_fault():
    impl = corpus_model("philosophers_2.impl.gcl")
    assert impl.deadlocks
    assert not restrict(impl, impl.fault_set).deadlocks
    assert not corpus_model("philosophers_2.nominal.gcl").deadlocks


def test_dump_load_round_trip():
    lts = corpus_model("cell_2.impl.gcl")
    back = load_lts(dump_lts(lts))
    assert back.edges == lts.edges
    assert back.num_states == lts.num_states


def test_label_parse_round_trip():
    for lab in (A, Fault("f"), TAU, MASK):
        assert Label.parse(str(lab)) == lab
    with pytest.raises(ValueError):
        Label.parse("weird")


def test_build_rejects_out_of_range_edges():
    with pytest.raises(ValueError):
        LTS.build(1, [(0, A, 3)])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_saturation_matches_naive_oracle_on_random_systems(seed):
    lts = random_lts(random.Random(seed), faults=FAULTS, tau=True)
    assert set(saturate(lts).edges) == naive_saturate(lts)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_restrict_properties(seed):
    lts = random_lts(random.Random(seed), faults=FAULTS)
    r = restrict(lts, lts.fault_set)
    assert not r.fault_set
    assert not any(lab.is_fault for _, lab, _ in r.edges)
    # the restricted system is the reachable part of the fault-free edges
    assert len(r.edges) <= len([e for e in lts.edges if not e[1].is_fault])
    assert restrict(r, lts.fault_set).edges == r.edges
