import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from possfusion import fixtures as fx
from possfusion.fusion import fuse
from possfusion.logic import BOTTOM, TOP, Atom, Not, Or, parse
from possfusion.operators import builtin
from possfusion.possibilistic import (Distribution, PossibilisticBase, WeightedFormula,
                                      alpha_cut, base_equivalent, entailment_degree,
                                      inconsistency_degree, is_subsumed, necessity,
                                      normalize, pi_entails, possibility, to_distribution,
                                      union)

import oracle
from strategies import GRID, VOCAB, bases, formulas

B = PossibilisticBase.of
phi, psi = Atom("phi"), Atom("psi")


def test_weight_zero_items_dropped():
    b = B([("p", 0.0), ("q", 0.3)])
    assert len(b) == 1 and b.items[0].formula == Atom("q")
    with pytest.raises(ValueError):
        WeightedFormula(Atom("p"), 1.5)


def test_distribution_examples():
    assert np.all(to_distribution(B([], ["p"])).values == 1.0)
    d = to_distribution(B([("p", 0.3)]))
    assert d.values.tolist() == pytest.approx([0.7, 1.0])
    b1 = fx.example1()[0]
    pi = to_distribution(b1)  # vocabulary (phi, psi)
    assert pi["11"] == pytest.approx(1.0)
    assert pi["01"] == pytest.approx(0.8)
    assert pi["10"] == pytest.approx(0.1)
    assert pi["00"] == pytest.approx(0.1)
    assert pi[(False, True)] == pi[1]


def test_possibility_necessity_examples():
    ones = Distribution(("p",), [1.0, 1.0])
    assert possibility(ones, Atom("p")) == 1.0
    assert possibility(ones, BOTTOM) == 0.0
    assert necessity(ones, Atom("p")) == 0.0
    assert necessity(ones, TOP) == 1.0
    pi = to_distribution(fx.example1()[0])
    assert possibility(pi, Not(phi)) == pytest.approx(0.8)
    assert necessity(pi, phi) == pytest.approx(0.2)


def test_alpha_cut_examples():
    b1 = fx.example2()[0]
    assert alpha_cut(b1, 0.0) == b1.star()
    assert set(alpha_cut(b1, 0.5)) == {parse("phi | psi"), phi, psi}
    assert alpha_cut(b1, 0.5, strict=True) == [parse("phi | psi")]


def test_inconsistency_examples():
    b1, b2, _ = fx.example2()
    assert inconsistency_degree(fx.example1()[0]) == 0.0
    assert union(b1, b2).inc == pytest.approx(0.5)
    assert fuse([b1, b2], builtin("prod")).inc == pytest.approx(0.75)


def test_pi_entails_examples():
    b1, b2, norm = fx.example1()
    assert pi_entails(norm, phi, 0.5)
    assert pi_entails(b2, phi, 0.2)
    full = B([("p", 1.0), ("~p", 1.0)])
    assert full.inc == 1.0
    assert not pi_entails(full, Atom("p"), 0.3)


def test_entailment_degree_examples():
    assert entailment_degree(fx.example1()[2], phi) == pytest.approx(0.5)
    assert entailment_degree(B([("p", 0.7)]), Or(Atom("q"), Not(Atom("q")))) == 1.0
    assert entailment_degree(B([("p", 0.7)], ["p", "q"]), Atom("q")) == 0.0


def test_subsumption_examples():
    b1, b2, _ = fx.example1()
    raw = fuse([b1, b2], builtin("amean"))
    assert is_subsumed(raw, WeightedFormula(phi, 0.1))
    single = B([("p", 0.4)])
    assert not is_subsumed(single, single.items[0])
    b = B([("p", 0.9), ("p | q", 0.3)])
    assert is_subsumed(b, b.items[1])
    assert is_subsumed(b, b.items[1], strict=True)


def test_normalize_examples():
    b1, b2, want = fx.example1()
    got = normalize(fuse([b1, b2], builtin("amean")))
    assert base_equivalent(got, want)
    assert len(got) == 3
    assert normalize(want) == want
    assert normalize(B([("p", 0.4), ("p", 0.7)])).items == (WeightedFormula(Atom("p"), 0.7),)
    assert len(normalize(B([("p | ~p | q", 0.9)]))) == 0


def test_base_equivalent_examples():
    assert not base_equivalent(B([("p", 0.5)]), B([("p", 0.6)]))
    b = fx.example2()[0]
    assert base_equivalent(b, b)


def test_vocabulary_alignment():
    b = B([("p", 0.5)]).with_vocabulary(("p", "q"))
    assert b.vocabulary == ("p", "q")
    assert to_distribution(b).values.tolist() == pytest.approx([0.5, 0.5, 1.0, 1.0])
    with pytest.raises(Exception):
        B([("r", 0.5)], ["p"])


# properties ---------------------------------------------------------------

@given(bases())
def test_distribution_matches_oracle(b):
    want = oracle.distribution([(it.formula, it.weight) for it in b.items], VOCAB)
    assert to_distribution(b).values.tolist() == pytest.approx(want, abs=1e-12)


@given(bases())
def test_height_duality(b):
    pi = to_distribution(b)
    assert b.inc == pytest.approx(1.0 - pi.height())
    assert b.inc == pytest.approx(oracle.inconsistency([tuple(it) for it in b.items], VOCAB))


@given(bases(), formulas(max_leaves=5), st.sampled_from(GRID))
def test_syntax_semantics_bridge(b, f, alpha):
    pi = to_distribution(b)
    if alpha > b.inc + 1e-9:
        assert pi_entails(b, f, alpha) == (necessity(pi, f) >= alpha - 1e-9)
    else:
        assert not pi_entails(b, f, alpha)


@given(bases())
def test_items_have_at_least_their_weight(b):
    pi = to_distribution(b)
    for f, a in b.items:
        assert necessity(pi, f) >= a - 1e-9


@given(bases(), formulas(max_leaves=5))
def test_entailment_degree_is_maximal(b, f):
    d = entailment_degree(b, f)
    if oracle.entails([], f, VOCAB):
        assert d == 1.0
        return
    if d > 0:
        assert pi_entails(b, f, d)
    for w in b.weights():
        if w > d + 1e-9:
            assert not pi_entails(b, f, w)


@hsettings(max_examples=60)
@given(bases(max_items=5))
def test_normalize_preserves_equivalence(b):
    n = normalize(b)
    assert base_equivalent(b, n)
    assert len(n) <= len(b)
    assert normalize(n) == n


@given(bases(), bases(max_items=2), formulas(max_leaves=5))
def test_degree_monotone_when_inc_unchanged(b, extra, f):
    big = PossibilisticBase(b.items + extra.items, VOCAB)
    if abs(big.inc - b.inc) <= 1e-9:
        assert entailment_degree(big, f) >= entailment_degree(b, f) - 1e-9


@given(bases(), st.sampled_from(GRID), st.sampled_from(GRID))
def test_cut_nesting(b, a1, a2):
    hi, lo = max(a1, a2), min(a1, a2)
    strict, cut, lower = (set(alpha_cut(b, hi, True)), set(alpha_cut(b, hi)),
                          set(alpha_cut(b, lo)))
    assert strict <= cut <= lower
