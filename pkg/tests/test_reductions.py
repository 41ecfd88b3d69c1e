"""Satisfiability and halting tied to universality questions."""

import itertools
import json
import random

import pytest

from ponfa.core import (AutomatonKind, FormatError, accepts, classify)
from ponfa.decision import Strategy, is_universal
from ponfa.reductions import (CnfFormula, Dtm, SimulationStatus, cnf_to_rponfa,
                              dtm_to_ponfa, encode_run, format_checker_ponfa,
                              parse_dimacs, parse_dtm, sat_brute_force,
                              simulate, step_budget)

# one-cell machine that accepts the input 1 in a single step
ACCEPT1 = Dtm(
    states=("go", "yes"),
    tape_alphabet=("1", "_"),
    input_alphabet=("1",),
    blank="_",
    initial="go",
    accepting="yes",
    transitions={("go", "1"): ("yes", "1", "S"),
                 ("go", "_"): ("go", "_", "S")},
    space_bound=1,
)

# same shape but spinning forever
REJECT1 = Dtm(
    states=("go", "yes"),
    tape_alphabet=("1", "_"),
    input_alphabet=("1",),
    blank="_",
    initial="go",
    accepting="yes",
    transitions={("go", "1"): ("go", "1", "S"),
                 ("go", "_"): ("go", "_", "S")},
    space_bound=1,
)

# two cells, one right move, then accept
ACCEPT2 = Dtm(
    states=("go", "right", "yes"),
    tape_alphabet=("1", "_"),
    input_alphabet=("1",),
    blank="_",
    initial="go",
    accepting="yes",
    transitions={("go", "1"): ("right", "1", "R"),
                 ("go", "_"): ("go", "_", "S"),
                 ("right", "1"): ("yes", "1", "S"),
                 ("right", "_"): ("right", "_", "S")},
    space_bound=2,
)

# right, then back left over the blank, then accept
ZIGZAG = Dtm(
    states=("go", "right", "back", "yes"),
    tape_alphabet=("1", "_"),
    input_alphabet=("1",),
    blank="_",
    initial="go",
    accepting="yes",
    transitions={("go", "1"): ("right", "1", "R"),
                 ("go", "_"): ("go", "_", "S"),
                 ("right", "1"): ("right", "1", "S"),
                 ("right", "_"): ("back", "_", "L"),
                 ("back", "1"): ("yes", "1", "S"),
                 ("back", "_"): ("back", "_", "S")},
    space_bound=2,
)

# walks off the right edge of its window
WALKER = Dtm(
    states=("go", "yes"),
    tape_alphabet=("1", "_"),
    input_alphabet=("1",),
    blank="_",
    initial="go",
    accepting="yes",
    transitions={("go", "1"): ("go", "1", "R"),
                 ("go", "_"): ("go", "_", "R")},
    space_bound=1,
)


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(0, (frozenset({1}),))
    with pytest.raises(ValueError):
        CnfFormula(2, ())
    with pytest.raises(ValueError):
        CnfFormula(2, (frozenset({0}),))
    with pytest.raises(ValueError):
        CnfFormula(2, (frozenset({3}),))
    with pytest.raises(ValueError):
        CnfFormula(2, (frozenset({1, -1}),))
    with pytest.raises(ValueError):
        CnfFormula(2, (frozenset({True}),))
    # an empty clause is meaningful: it makes the formula unsatisfiable
    empty = CnfFormula(2, (frozenset(),))
    assert not sat_brute_force(empty)
    assert is_universal(cnf_to_rponfa(empty)).holds


def test_pinned_formulas():
    unsat = CnfFormula(1, (frozenset({1}), frozenset({-1})))
    assert not sat_brute_force(unsat)
    verdict = is_universal(cnf_to_rponfa(unsat))
    assert verdict.holds

    sat = CnfFormula(2, (frozenset({1, 2}), frozenset({-1, -2})))
    assert sat_brute_force(sat)
    a = cnf_to_rponfa(sat)
    verdict = is_universal(a)
    assert not verdict.holds
    assert verdict.witness in {("0", "1"), ("1", "0")}
    # the witness spells a satisfying assignment, bit j for variable j
    assert sat.evaluate(tuple(bit == "1" for bit in verdict.witness))
    for bits in itertools.product("01", repeat=2):
        expect = not sat.evaluate(tuple(b == "1" for b in bits))
        assert accepts(a, bits) == expect


def test_reduction_language_shape():
    formula = CnfFormula(2, (frozenset({1}),))
    a = cnf_to_rponfa(formula)
    assert classify(a).label is AutomatonKind.RPO_NFA
    # off-length words are always accepted
    for length in (0, 1, 3, 4):
        for bits in itertools.product("01", repeat=length):
            assert accepts(a, bits)


def test_random_formulas_universal_iff_unsat():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(1, 4)
        m = rng.randint(1, 4)
        clauses = []
        for _ in range(m):
            size = rng.randint(0 if rng.random() < 0.05 else 1, min(3, n))
            chosen = rng.sample(range(1, n + 1), size)
            clauses.append(frozenset(v if rng.random() < 0.5 else -v
                                     for v in chosen))
        formula = CnfFormula(n, tuple(clauses))
        a = cnf_to_rponfa(formula)
        verdict = is_universal(a)
        assert verdict.holds == (not sat_brute_force(formula))
        bounded = is_universal(a, strategy=Strategy.RPONFA_BOUNDED)
        assert bounded.holds == verdict.holds
        if not verdict.holds:
            assert len(verdict.witness) == n
            assert formula.evaluate(tuple(b == "1" for b in verdict.witness))


def test_sat_brute_force_refuses_large_inputs():
    big = CnfFormula(21, (frozenset({1}),))
    with pytest.raises(ValueError):
        sat_brute_force(big)


def test_dimacs_round_trip():
    text = "c example\np cnf 3 2\n1 -2 0\n2 3 0\n"
    formula = parse_dimacs(text)
    assert formula.variable_count == 3
    assert formula.clauses == (frozenset({1, -2}), frozenset({2, 3}))


@pytest.mark.parametrize("text", [
    "",
    "p cnf 1 1\n",
    "p cnf 1 1\n1 0\n2 0\n",
    "p cnf 1 0\n",
    "p cnf 2 1\n3 0\n",
    "p cnf 2 1\n1 x 0\n",
    "1 0\np cnf 1 1\n",
    "p cnf 2 1\n1 -1 0\n",
])
def test_dimacs_rejects_malformed(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)


def test_machine_validation():
    with pytest.raises(FormatError):
        Dtm(("go",), ("1", "_"), ("1",), "_", "go", "go",
            {("go", "1"): ("go", "1", "S"), ("go", "_"): ("go", "_", "S")}, 1)
    with pytest.raises(FormatError):
        Dtm(("go", "yes"), ("1", "_"), ("1", "_"), "_", "go", "yes",
            {("go", "1"): ("yes", "1", "S"), ("go", "_"): ("go", "_", "S")}, 1)
    with pytest.raises(FormatError):
        Dtm(("go", "yes"), ("1", "_"), ("1",), "_", "go", "yes",
            {("go", "1"): ("yes", "1", "S")}, 1)
    with pytest.raises(FormatError):
        Dtm(("go", "yes"), ("1", "_"), ("1",), "_", "go", "yes",
            {("go", "1"): ("yes", "1", "X"),
             ("go", "_"): ("go", "_", "S")}, 1)


def test_simulation_statuses():
    run = simulate(ACCEPT1, ("1",))
    assert run.status is SimulationStatus.ACCEPTED
    assert run.steps == 1
    assert run.configurations[0].state == "go"
    assert run.configurations[-1].state == "yes"

    spin = simulate(REJECT1, ("1",))
    assert spin.status is SimulationStatus.BUDGET_EXCEEDED
    assert spin.steps == step_budget(REJECT1)

    with pytest.raises(ValueError):
        simulate(ACCEPT1, ("0",))
    with pytest.raises(ValueError):
        simulate(ACCEPT1, ("1", "1"))


def test_walking_off_the_window_is_an_error():
    with pytest.raises(ValueError):
        simulate(WALKER, ("1",))


def test_encoding_lengths_are_pinned():
    word = encode_run(ACCEPT1, ("1",))
    assert word is not None and len(word) == 45
    assert encode_run(REJECT1, ("1",)) is None

    word2 = encode_run(ACCEPT2, ("1", "1"))
    assert word2 is not None and len(word2) == 110


def test_accepting_machine_encoding_is_the_unique_hole():
    word = encode_run(ACCEPT1, ("1",))
    a = dtm_to_ponfa(ACCEPT1, ("1",))
    assert classify(a).label is AutomatonKind.PO_NFA
    assert not accepts(a, word)
    verdict = is_universal(a)
    assert not verdict.holds
    # breadth-first witness equals the encoding: nothing shorter is missing
    assert verdict.witness == word


def test_rejecting_machine_gives_a_universal_automaton():
    a = dtm_to_ponfa(REJECT1, ("1",))
    assert is_universal(a).holds


def test_perturbed_encodings_are_accepted():
    word = encode_run(ACCEPT1, ("1",))
    a = dtm_to_ponfa(ACCEPT1, ("1",))
    rng = random.Random(5)
    for position in rng.sample(range(len(word)), 10):
        mutated = list(word)
        mutated[position] = "1" if mutated[position] == "0" else "0"
        assert accepts(a, tuple(mutated))
    for cut in (0, 1, 7, 9, 20, 44):
        assert accepts(a, word[:cut])
    for extension in (word + ("0",), word + ("1",), word + word[-9:],
                      word + word):
        assert accepts(a, extension)


def test_two_cell_machines():
    word2 = encode_run(ACCEPT2, ("1", "1"))
    a2 = dtm_to_ponfa(ACCEPT2, ("1", "1"))
    verdict = is_universal(a2)
    assert not verdict.holds and verdict.witness == word2

    run = simulate(ZIGZAG, ("1",))
    assert run.status is SimulationStatus.ACCEPTED and run.steps == 3
    word3 = encode_run(ZIGZAG, ("1",))
    a3 = dtm_to_ponfa(ZIGZAG, ("1",))
    verdict3 = is_universal(a3)
    assert not verdict3.holds and verdict3.witness == word3

    # the walker never accepts: its automaton rejects nothing
    assert is_universal(dtm_to_ponfa(WALKER, ("1",))).holds


def test_snapshot_swap_is_accepted():
    word2 = encode_run(ACCEPT2, ("1", "1"))
    a2 = dtm_to_ponfa(ACCEPT2, ("1", "1"))
    L = 11
    blocks = [word2[i:i + L] for i in range(0, len(word2), L)]
    assert len(blocks) == 10
    # exchange the first and second snapshots, separators included
    swapped = [blocks[0]] + blocks[4:7] + blocks[1:4] + blocks[7:]
    swapped_word = tuple(bit for block in swapped for bit in block)
    assert len(swapped_word) == len(word2) and swapped_word != word2
    assert accepts(a2, swapped_word)


def reference_block_chain(bits, table_size, code_length):
    length = 2 * code_length + 3
    if len(bits) % length != 0:
        return False
    for i in range(0, len(bits), length):
        block = bits[i:i + length]
        if block[0] != "0" or block[1] != "0" or block[2] != "1":
            return False
        data = []
        for j in range(code_length):
            data.append(block[3 + 2 * j])
            if block[4 + 2 * j] != "1":
                return False
        if int("".join(data), 2) >= table_size:
            return False
    return True


def test_format_checker_matches_reference():
    checker = format_checker_ponfa(7)
    assert classify(checker).is_partially_ordered
    for length in range(0, 10):
        for bits in itertools.product("01", repeat=length):
            expect = not reference_block_chain(bits, 7, 3)
            assert accepts(checker, bits) == expect
    rng = random.Random(3)
    for _ in range(500):
        length = rng.randint(10, 40)
        bits = tuple(rng.choice("01") for _ in range(length))
        expect = not reference_block_chain(bits, 7, 3)
        assert accepts(checker, bits) == expect
    with pytest.raises(ValueError):
        format_checker_ponfa(1)


def test_parse_dtm_round_trip():
    payload = {
        "states": ["go", "right", "yes"],
        "tape_alphabet": ["1", "_"],
        "input_alphabet": ["1"],
        "blank": "_",
        "initial": "go",
        "accepting": "yes",
        "space_bound": 2,
        "transitions": [["go", "1", "right", "1", "R"],
                        ["go", "_", "go", "_", "S"],
                        ["right", "1", "yes", "1", "S"],
                        ["right", "_", "right", "_", "S"]],
    }
    machine = parse_dtm(json.dumps(payload))
    assert encode_run(machine, ("1", "1")) == encode_run(ACCEPT2, ("1", "1"))


@pytest.mark.parametrize("mangle", [
    lambda d: d.pop("states"),
    lambda d: d.update(states="go"),
    lambda d: d.update(space_bound=True),
    lambda d: d["transitions"].append(["go", "1", "right", "1", "R"]),
    lambda d: d["transitions"].append(["go"]),
])
def test_parse_dtm_rejects_malformed(mangle):
    payload = {
        "states": ["go", "yes"],
        "tape_alphabet": ["1", "_"],
        "input_alphabet": ["1"],
        "blank": "_",
        "initial": "go",
        "accepting": "yes",
        "space_bound": 1,
        "transitions": [["go", "1", "yes", "1", "S"],
                        ["go", "_", "go", "_", "S"]],
    }
    mangle(payload)
    with pytest.raises(FormatError):
        parse_dtm(json.dumps(payload))
