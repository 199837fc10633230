from fractions import Fraction as F
from itertools import product

import pytest

from affine_verifiers import (
    Configuration,
    LanguageOracle,
    Machine,
    ProtocolParams,
    Register,
    basis,
    build_strong,
    build_weak,
    enumerate_choices,
    step,
    validate_machine,
    validate_state,
)
from affine_verifiers.analysis import evaluate_strategy
from affine_verifiers.errors import (
    Halted,
    HeadOutOfTape,
    InvalidOperator,
    MissingTransition,
    UnknownOperator,
)
from affine_verifiers.machine import (
    LEFT_END,
    RIGHT_END,
    WEIGHT,
    FirstOption,
    dump_machine,
    run_deterministic,
)


def parity_there_and_back():
    """2DFA: count 1s on the way right, walk back to the left end, accept on even."""
    classical = {}
    affine = {}
    for parity in ("even", "odd"):
        for s in "01":
            flipped = {"even": "odd", "odd": "even"}[parity] if s == "1" else parity
            classical[(parity, s, ())] = ((flipped, 1),)
            classical[(f"back_{parity}", s, ())] = ((f"back_{parity}", -1),)
            affine[(f"back_{parity}", s)] = ((),)
            affine[(parity, s)] = ((),)
        classical[(parity, RIGHT_END, ())] = ((f"back_{parity}", -1),)
        affine[(parity, RIGHT_END)] = ((),)
        classical[(f"back_{parity}", LEFT_END, ())] = (("acc" if parity == "even" else "rej", 0),)
        affine[(f"back_{parity}", LEFT_END)] = ((),)
    classical[("start", LEFT_END, ())] = (("even", 1),)
    affine[("start", LEFT_END)] = ((),)
    states = ("start", "even", "odd", "back_even", "back_odd", "acc", "rej")
    return validate_machine(Machine(states, "start", "acc", "rej", 2, (), affine, classical))


def two_thirds_machine(op=((2, 1), (-1, 0))):
    """One 2-state register: apply ``op`` on the left end, weight, accept on e_1."""
    affine = {("s", LEFT_END): (("T",),), ("w", "0"): ((WEIGHT,),)}
    classical = {
        ("s", LEFT_END, (0,)): (("w", 1),),
        ("w", "0", (1,)): (("acc", 0),),
        ("w", "0", (2,)): (("rej", 0),),
    }
    return Machine(("s", "w", "acc", "rej"), "s", "acc", "rej", 2,
                   (Register("R", 2, {"T": op}),), affine, classical)


class TestDeterministic:
    def test_parity_matches_python_on_all_words(self):
        m = parity_there_and_back()
        for n in range(7):
            for bits in product("01", repeat=n):
                w = "".join(bits)
                final = run_deterministic(m, w)
                assert (final.state == "acc") == (w.count("1") % 2 == 0)
                assert final.head == 0
                # right to $, back to the left end, one final step
                assert final.steps == 2 * (len(w) + 1) + 1

    def test_single_branch_at_every_step(self):
        m = parity_there_and_back()
        outcome = evaluate_strategy(m, "0110", FirstOption())
        assert outcome.accept.lo == 1 and outcome.expected_steps == 11


class TestValidation:
    def test_accepts_good_machine(self):
        m = validate_machine(two_thirds_machine())
        assert m.operator(0, "T").rows == ((2, 1), (-1, 0))

    def test_column_sum_two(self):
        with pytest.raises(InvalidOperator):
            validate_machine(two_thirds_machine(((2, 0), (0, 1))))

    def test_missing_weighting_rule(self):
        m = two_thirds_machine()
        classical = dict(m.classical_table)
        del classical[("w", "0", (2,))]
        broken = Machine(m.states, m.initial, m.accept, m.reject, 2, m.registers, m.affine_table, classical)
        with pytest.raises(MissingTransition):
            validate_machine(broken)

    def test_unknown_operator(self):
        m = two_thirds_machine()
        affine = dict(m.affine_table)
        affine[("s", LEFT_END)] = (("NOPE",),)
        with pytest.raises(UnknownOperator):
            validate_machine(Machine(m.states, m.initial, m.accept, m.reject, 2, m.registers,
                                     affine, m.classical_table))

    def test_protocol_machines_validate(self):
        for k in (3, 4, 5):
            for r in (2, 3):
                L = LanguageOracle.finite(["0"] if r == 2 else ["2"], r)
                build_weak(L, ProtocolParams(k=k, r=r))
                build_strong(L, ProtocolParams(k=k, r=r, strong=True))


class TestStep:
    def test_weighting_probabilities(self):
        m = validate_machine(two_thirds_machine())
        c = step(m, m.initial_configuration(), "0")[0].configuration
        assert c.registers[0].entries == (2, -1)
        branches = step(m, c, "0")
        assert [(b.probability, b.configuration.state) for b in branches] == [(F(2, 3), "acc"), (F(1, 3), "rej")]
        assert evaluate_strategy(m, "0", FirstOption()).accept.lo == F(2, 3)

    def test_no_weighting_is_a_point_mass(self):
        m = validate_machine(two_thirds_machine())
        branches = step(m, m.initial_configuration(), "0")
        assert len(branches) == 1 and branches[0].probability == 1

    def test_halted(self):
        m = validate_machine(two_thirds_machine())
        done = Configuration("acc", 1, (basis(2, 1),), 2)
        with pytest.raises(Halted):
            step(m, done, "0")
        with pytest.raises(Halted):
            enumerate_choices(m, done, "0")

    def test_head_out_of_tape(self):
        m = two_thirds_machine()
        classical = dict(m.classical_table)
        classical[("s", LEFT_END, (0,))] = (("w", -1),)
        m = validate_machine(Machine(m.states, m.initial, m.accept, m.reject, 2, m.registers,
                                     m.affine_table, classical))
        with pytest.raises(HeadOutOfTape):
            step(m, m.initial_configuration(), "0")

    def test_exit_weighting_of_protocol_register(self):
        m = build_weak(LanguageOracle.finite([]))
        c = Configuration("weigh", 2, (validate_state([1, 0, 0, F(1, 4), F(-1, 4)]),))
        branches = step(m, c, "0")
        assert [(b.probability, b.configuration.state) for b in branches] == [
            (F(2, 3), "accept"), (F(1, 6), "reject"), (F(1, 6), "reject")]

    def test_coin_weighting(self):
        p = ProtocolParams(strong=True)
        m = build_strong(LanguageOracle.finite([]), p)
        coin = validate_state([F(1, 4096), F(4095, 4096)])
        c = Configuration("right0", 2, (validate_state([1, 2, -2, 0, 0]), coin))
        branches = step(m, c, "0", 0, {(0, 1): 0, (0, 2): 0})
        assert [(b.probability, b.configuration.state) for b in branches] == [
            (F(1, 4096), "reject"), (F(4095, 4096), "lfirst0")]


class TestChoicePoints:
    def setup_method(self):
        self.m = build_weak(LanguageOracle.finite(["1"]))

    def test_loop_offers_next_guess_or_exit(self):
        c = Configuration("loop1", 2, (validate_state([1, 3, -3, 0, 0]),))
        point = enumerate_choices(self.m, c, "1")
        assert point.affine_options == (("LOOP1",),)
        assert point.classical_options[0][(0,)] == (("loop0", 0), ("loop1", 0), ("exit", 0))
        assert point.size == 3

    def test_guess_zero_exit_rejects(self):
        c = Configuration("loop0", 2, (validate_state([1, 3, -3, 0, 0]),))
        point = enumerate_choices(self.m, c, "1")
        assert point.classical_options[0][(0,)][2] == ("reject", 0)

    def test_setup_offers_first_guess(self):
        c = Configuration("scan", 2, (validate_state([1, 3, -3, 0, 0]),))
        assert enumerate_choices(self.m, c, "1").size == 2

    def test_scan_is_deterministic(self):
        c = Configuration("scan", 1, (validate_state([1, 1, -1, 0, 0]),))
        assert enumerate_choices(self.m, c, "0").size == 1

    def test_weak_head_never_moves_left(self):
        moves = {move for rules in self.m.classical_table.values() for _, move in rules}
        assert moves <= {0, 1}


class TestDump:
    def test_dump_is_stable_and_exact(self):
        text = dump_machine(build_weak(LanguageOracle.finite(["1"])))
        assert text == dump_machine(build_weak(LanguageOracle.finite(["1"])))
        assert "operator LOOP1" in text
        assert " 6/1" in text and "-5/1" in text
        assert "." not in text.replace("weak-k3-r2-L", "")
