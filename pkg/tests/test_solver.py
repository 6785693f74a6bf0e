import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_model
from generators import mixed_pair, random_game, random_lts
from oracles import conforming_plays, naive_layers
from maskdist.errors import MalformedPlay
from maskdist.game import ERR, GameGraph
from maskdist.semantics import LTS, MASK, Fault, Observable, restrict
from maskdist.solver import (
    INF, STRONG, WEAK, Play, build_game, distance, extract_strategies, format_value, payoff,
    solve_layers, value, witness_trace,
)

A = Observable("a")


def chain_game():
    states = [(0, None, 0), (0, (2, A), 0), ERR]
    succ = [[(A, 1)], [(A, 2)], [(A, 2)]]
    return GameGraph(states, succ, 0, 2, frozenset({A}))


def test_three_state_chain():
    layers = solve_layers(chain_game())
    assert layers.budget == (1, 1, 1)
    assert layers.depth == (3, 2, 1)
    assert value(chain_game()) == 1


def test_unreachable_sink_gives_zero():
    lts = LTS.build(1, [(0, A, 0)])
    game = build_game(lts, lts)
    layers = solve_layers(game)
    assert value(game, layers) == 0
    refuter, verifier = extract_strategies(game, layers)
    assert len(refuter) == 0
    assert set(verifier.choice) == {v for v in range(game.num_states) if game.turn(v) == "V"}
    assert witness_trace(game, layers) is None


def test_different_loops_value_one():
    game = build_game(LTS.build(1, [(0, A, 0)]), LTS.build(1, [(0, Observable("b"), 0)]))
    assert value(game) == 1


def test_running_example_budget_and_refuter_strategy():
    rep = distance(corpus_model("cell.nominal.gcl"), corpus_model("cell_2.impl.gcl"))
    assert rep.fault_budget == 3
    labels = [str(lab) for lab in rep.witness.labels]
    assert labels[:5] == ["fault:F1", "mask", "fault:F2", "mask", "obs:R1"]
    assert rep.witness.nodes[-1] == rep.game.err
    assert rep.game.states[rep.witness.nodes[4]] == (0, None, 3)


def test_memory_three_witness():
    rep = distance(corpus_model("memory.nominal.gcl"), corpus_model("memory_3.impl.gcl"))
    assert rep.value == Fraction(1, 3)
    assert rep.witness.fault_count == 2


def test_philosophers_two_witness():
    rep = distance(corpus_model("philosophers_2.nominal.gcl"),
                   corpus_model("philosophers_2.impl.gcl"))
    assert rep.value == Fraction(1, 2)
    assert rep.witness.fault_count == 1


def test_brp_three_retransmissions_weak():
    rep = distance(corpus_model("brp_1.nominal.gcl"), corpus_model("brp_1_3.impl.gcl"), WEAK)
    assert rep.value == Fraction(1, 5)


def test_handwritten_models_against_corpus_nominals():
    from conftest import handwritten_model
    assert distance(corpus_model("memory.nominal.gcl"), handwritten_model("memory3.gcl")).value \
        == Fraction(1, 3)
    assert distance(corpus_model("nmr.nominal.gcl"), handwritten_model("nmr3.gcl")).value \
        == Fraction(1, 3)
    brp = handwritten_model("brp1_3.gcl")
    assert distance(restrict(brp, brp.fault_set), brp, WEAK).value == Fraction(1, 5)


def test_reflexivity_on_corpus():
    for name in ("memory.nominal.gcl", "nmr.nominal.gcl", "philosophers_3.nominal.gcl",
                 "byzantine_3.nominal.gcl", "brp_1.nominal.gcl"):
        lts = corpus_model(name)
        assert distance(lts, lts).value == 0


def test_payoff():
    game = chain_game()
    assert payoff(Play.of(game, [0, 1, 2], [A, A])) == 1
    f = Fault("f")
    two = Play((0, 1, 2, 3, 4, 5), (f, MASK, f, MASK, A), ends_in_error=True)
    assert payoff(two) == Fraction(1, 3)
    assert payoff(Play((0, 1, 0), (A, A), lasso=True)) == 0
    with pytest.raises(MalformedPlay):
        payoff(Play((0, 1), (A,)))
    with pytest.raises(MalformedPlay):
        Play((0, 1), ())
    with pytest.raises(MalformedPlay):
        Play.of(game, [0, 2], [A])


def test_format_value_rounds_half_up():
    assert format_value(Fraction(1, 6)) == "1/6 (0.167)"
    assert format_value(Fraction(1, 3)) == "1/3 (0.333)"
    assert format_value(Fraction(0)) == "0/1 (0.000)"
    assert format_value(Fraction(1, 8)) == "1/8 (0.125)"
    assert format_value(Fraction(1, 16)) == "1/16 (0.063)"


def test_report_outputs():
    rep = distance(corpus_model("cell.nominal.gcl"), corpus_model("cell_2.impl.gcl"))
    assert rep.to_text() == "masking distance = 1/3 (0.333)"
    doc = json.loads(rep.to_machine())
    assert Fraction(doc["value_num"], doc["value_den"]) == rep.value
    assert doc["fault_budget"] == 3
    assert len(doc["witness"]) == len(rep.witness.labels)
    lines = rep.witness_lines()
    assert "F1 (fault)" in lines[0]
    assert "masks the fault" in lines[1]
    assert lines[-1].startswith("verifier cannot answer R1")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_solver_matches_naive_fixpoint_on_50_state_games(seed):
    game = random_game(random.Random(seed), 50)
    layers = solve_layers(game)
    assert (list(layers.budget), list(layers.depth)) == naive_layers(game)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_refuter_strategy_forces_the_sink(seed):
    game = random_game(random.Random(seed), 40)
    layers = solve_layers(game)
    refuter, verifier = extract_strategies(game, layers)
    for v in range(game.num_states):
        b = layers.budget[v]
        if b == INF or game.turn(v) != "R":
            continue
        for path, reached in conforming_plays(game, refuter, v):
            assert reached
            faults = sum(game.is_fault_pending(u) for u in path)
            assert faults <= b - 1
    for v, (lab, dst) in verifier.choice.items():
        assert layers.budget[dst] == INF
        assert (lab, dst) in game.succ[v]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_witness_payoff_equals_value(seed, weak):
    spec, impl = mixed_pair(random.Random(seed), tau=weak)
    rep = distance(spec, impl, WEAK if weak else STRONG)
    if rep.value == 0:
        assert rep.witness is None
    else:
        assert payoff(rep.witness) == rep.value
        assert rep.witness.fault_count == rep.fault_budget - 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_zero_fault_collapse(seed, weak):
    rng = random.Random(seed)
    spec = random_lts(rng, tau=weak)
    impl = random_lts(rng, tau=weak)
    assert distance(spec, impl, WEAK if weak else STRONG).value in (0, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_removing_a_fault_never_increases_distance(seed, weak):
    spec, impl = mixed_pair(random.Random(seed), tau=weak)
    mode = WEAK if weak else STRONG
    base = distance(spec, impl, mode).value
    for f in impl.fault_set:
        assert distance(spec, restrict(impl, {f}), mode).value <= base


def _with_extra_edges(game, rng, player, count=3):
    refuter_nodes = [v for v in range(game.num_states) if game.turn(v) == "R" and v != game.err]
    verifier_nodes = [v for v in range(game.num_states) if game.turn(v) == "V"]
    succ = [list(out) for out in game.succ]
    for _ in range(count):
        if player == "V":
            v = rng.choice(verifier_nodes)
            edge = (MASK if game.is_fault_pending(v) else A, rng.choice(refuter_nodes))
        else:
            edge = (A, rng.choice(verifier_nodes))
            v = rng.choice(refuter_nodes)
        succ[v] = sorted(set(succ[v]) | {edge}, key=lambda e: e[1])
    return GameGraph(game.states, succ, game.initial, game.err, game.sigma)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_extra_verifier_options_never_lower_budget(seed):
    rng = random.Random(seed)
    game = random_game(rng, 60)
    before = solve_layers(game).budget[game.initial]
    assert solve_layers(_with_extra_edges(game, rng, "V")).budget[game.initial] >= before


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_extra_refuter_options_never_raise_budget(seed):
    rng = random.Random(seed)
    game = random_game(rng, 60)
    before = solve_layers(game).budget[game.initial]
    assert solve_layers(_with_extra_edges(game, rng, "R")).budget[game.initial] <= before
