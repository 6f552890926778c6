import itertools
import random
from fractions import Fraction

import pytest

from boolgames.formula import Not, Var, parse_formula
from boolgames.game import (
    BooleanGame,
    MixedProfile,
    NormalForm,
    ResourceCapError,
    characteristic_formula,
    parse_game,
    player_assignments,
)
from boolgames.solver import (
    SolverError,
    as_normal_form,
    best_deviation_gain,
    classify_support,
    constant_sum,
    dvalue,
    equilibrium_for_support,
    exists_guarantee_nash,
    forall_guarantee_nash,
    irrational_nash,
    is_nash,
    nash_sat,
    pure_equilibria,
    support_pairs,
    unique_nash,
    witness_to_profile,
    zero_sum_value,
)

MP = parse_game("players: 2\nvars 1: x\nvars 2: y\n"
                "goal 1: ~(x <-> y)\ngoal 2: x <-> y\n")

BOS = NormalForm([[[3, 0], [0, 2]], [[2, 0], [0, 3]]])


def test_constant_sum_detection():
    nf = as_normal_form(MP)
    assert constant_sum(nf) == 1
    assert constant_sum(BOS) is None


def test_zero_sum_value_mp():
    value, weights = zero_sum_value(as_normal_form(MP))
    assert value == Fraction(1, 2)
    assert sum(weights) == 1


def test_zero_sum_value_dominated():
    # row 0 dominates: value is the best response payoff
    nf = NormalForm([[[1, 1], [0, 0]], [[0, 0], [1, 1]]])
    value, weights = zero_sum_value(nf)
    assert value == 1
    assert weights[0] == 1


def test_zero_sum_value_rejects_general_sum():
    with pytest.raises(SolverError):
        zero_sum_value(BOS)


def test_dvalue_thresholds():
    assert dvalue(MP, Fraction(1, 2))
    assert not dvalue(MP, Fraction(1, 2) + Fraction(1, 100))


def test_support_pairs_order_and_cap():
    nf = as_normal_form(MP)
    pairs = list(support_pairs(nf))
    assert pairs[0] == ((0,), (0,))
    assert len(pairs) == 9
    with pytest.raises(ResourceCapError):
        list(support_pairs(nf, cap=4))


def test_equilibrium_for_support_mp():
    nf = as_normal_form(MP)
    w = equilibrium_for_support(nf, ((0, 1), (0, 1)))
    assert w is not None
    assert w.x == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert w.payoffs == (Fraction(1, 2), Fraction(1, 2))
    assert equilibrium_for_support(nf, ((0,), (0,))) is None


def test_classify_support():
    nf = as_normal_form(MP)
    assert classify_support(nf, ((0, 1), (0, 1))) == "unique"
    assert classify_support(nf, ((0,), (0,))) == "none"
    # duplicated rows produce a continuum on the full support
    dup = NormalForm([[[1, 0], [0, 1], [1, 0]],
                      [[0, 1], [1, 0], [0, 1]]])
    assert classify_support(dup, ((0, 1, 2), (0, 1))) == "continuum"


def test_exists_and_forall_guarantee():
    w = exists_guarantee_nash(BOS, (Fraction(2), Fraction(0)))
    assert w is not None and w.payoffs[0] >= 2
    assert exists_guarantee_nash(BOS, (Fraction(4), Fraction(0))) is None
    assert forall_guarantee_nash(BOS, (Fraction(6, 5), Fraction(6, 5)))
    assert not forall_guarantee_nash(BOS, (Fraction(2), Fraction(0)))


def test_unique_nash():
    assert unique_nash(MP)
    assert not unique_nash(BOS)


def test_irrational_nash_support_path():
    assert not irrational_nash(as_normal_form(MP))
    assert not irrational_nash(BOS)


def test_nash_sat_modes():
    phi_agree = parse_formula("x <-> y")
    # the unique MP equilibrium mixes, so no formula holds almost surely
    assert not nash_sat(MP, phi_agree, "exists")
    assert not nash_sat(MP, phi_agree, "forall")
    assert nash_sat(MP, parse_formula("x | ~x"), "forall")


def test_nash_sat_pure_example():
    g = parse_game("players: 2\nvars 1: x\nvars 2: y\n"
                   "goal 1: x & y\ngoal 2: x & y\n")
    # (T, T) is an equilibrium realizing x & y; (F, *) equilibria do not
    assert nash_sat(g, parse_formula("x & y"), "exists")
    assert not nash_sat(g, parse_formula("x & y"), "forall")


def test_pure_equilibria_boolean_and_nf():
    g = parse_game("players: 2\nvars 1: x\nvars 2: y\n"
                   "goal 1: x & y\ngoal 2: x & y\n")
    eqs = pure_equilibria(g)
    assert {"x": True, "y": True} in eqs
    assert pure_equilibria(as_normal_form(MP)) == []
    assert pure_equilibria(BOS) == [(0, 0), (1, 1)]


def test_is_nash_boolean():
    half = Fraction(1, 2)
    eq = MixedProfile([
        [({"x": False}, half), ({"x": True}, half)],
        [({"y": False}, half), ({"y": True}, half)],
    ])
    assert is_nash(MP, eq)
    biased = MixedProfile([
        [({"x": False}, Fraction(1, 3)), ({"x": True}, Fraction(2, 3))],
        [({"y": False}, half), ({"y": True}, half)],
    ])
    # player 2 can now exploit the bias
    assert not is_nash(MP, biased)


def test_is_nash_normal_form():
    assert is_nash(BOS, [{0: Fraction(1)}, {0: Fraction(1)}])
    assert not is_nash(BOS, [{0: Fraction(1)}, {1: Fraction(1)}])


def test_best_deviation_gain_exhaustive_vs_sampled():
    half = Fraction(1, 2)
    biased = MixedProfile([
        [({"x": True}, Fraction(1))],
        [({"y": False}, half), ({"y": True}, half)],
    ])
    base, best = best_deviation_gain(MP, biased, 1)
    assert (base, best) == (half, Fraction(1))
    base_s, best_s = best_deviation_gain(MP, biased, 1, sample=50, seed=3)
    assert base_s == half and best_s == Fraction(1)


def test_witness_to_profile():
    nf = as_normal_form(MP)
    w = equilibrium_for_support(nf, ((0, 1), (0, 1)))
    prof = witness_to_profile(nf, w)
    assert is_nash(MP, prof)


def test_max_payoff_reduces_to_guarantee():
    # "some equilibrium pays player 1 at least u" via the guarantee query,
    # cross-checked by direct support enumeration
    for u in (Fraction(0), Fraction(6, 5), Fraction(2), Fraction(3)):
        expect = False
        for sp in support_pairs(BOS):
            w = equilibrium_for_support(BOS, sp)
            if w is not None and w.payoffs[0] >= u:
                expect = True
                break
        got = exists_guarantee_nash(BOS, (u, Fraction(0))) is not None
        assert got == expect


def test_nash_in_subset_reduces_to_sat():
    g = parse_game("players: 2\nvars 1: x\nvars 2: y\n"
                   "goal 1: x & y\ngoal 2: x & y\n")
    # is there an equilibrium supported inside T = {(T,T)}?
    phi = characteristic_formula({"x": True, "y": True})
    assert nash_sat(g, phi, "exists")
    # T = {(T,F)} contains no equilibrium
    phi2 = characteristic_formula({"x": True, "y": False})
    assert not nash_sat(g, phi2, "exists")
