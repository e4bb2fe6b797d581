import itertools

import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from possfusion import fixtures as fx
from possfusion import logic
from possfusion.config import configured
from possfusion.errors import ContractViolationError, ExplosionCapError
from possfusion.fusion import (FusionProblem, classical_extraction, classical_merge,
                               dictator_refine, discount, distributions, fold_fuse2, fuse,
                               fuse2, fuse_n, reinject, semantic_fuse,
                               weighted_min_distribution, weighted_min_fuse)
from possfusion.logic import Atom, parse
from possfusion.operators import BUILTINS, Operator, builtin, nary_apply
from possfusion.possibilistic import (Distribution, PossibilisticBase, base_equivalent,
                                      entailment_degree, normalize, pi_entails,
                                      to_distribution, union)

import oracle
from strategies import GRID, VOCAB, bases

B = PossibilisticBase.of
phi, psi, xi = Atom("phi"), Atom("psi"), Atom("xi")


def _has(base, text, weight):
    f = parse(text)
    return any(abs(w - weight) <= 1e-9 and logic.equivalent(g, f, base.vocabulary)
               for g, w in base.items)


def test_example1_raw_items():
    b1, b2, _ = fx.example1()
    raw = fuse2(b1, b2, builtin("amean")).base
    # by hand: unary items halve, pairs average
    want = [("psi", .45), ("phi", .1), ("phi | ~psi", .4), ("phi", .1),
            ("psi | (phi | ~psi)", .85), ("psi | phi", .55),
            ("phi | (phi | ~psi)", .5), ("phi | phi", .2)]
    assert len(raw) == len(want)
    for (f, w), (g, v) in zip(raw.items, want):
        assert f == parse(g) and w == pytest.approx(v, abs=1e-9)


def test_example1_normalized():
    b1, b2, want = fx.example1()
    got = normalize(fuse([b1, b2], builtin("amean")))
    assert base_equivalent(got, want)
    assert sorted(round(w, 9) for w in got.weights()) == [0.45, 0.5, 0.55]
    assert entailment_degree(got, phi) == pytest.approx(0.5)


def test_example2_listed_items():
    b1, b2, listed = fx.example2()
    fused = fuse([b1, b2], builtin("prod"))
    for text, w in listed:
        assert _has(fused, text, w), text
    assert fused.inc == pytest.approx(0.75)
    assert not pi_entails(fused, xi, 0.19)
    assert entailment_degree(fused, xi) == 0.0


def test_example3_extraction():
    b1, b2, b3 = fx.example3()
    mn = builtin("min")
    d12 = classical_merge([b1, b2], mn)
    d23 = classical_merge([b2, b3], mn)
    assert logic.equivalent(d12, [phi])
    assert logic.equivalent(d23, [~phi, psi])
    left = classical_merge([reinject(d12), b3], mn)
    right = classical_merge([b1, reinject(d23)], mn)
    assert logic.equivalent(left, [phi, psi])
    assert logic.equivalent(right, [~phi, psi])
    assert not logic.equivalent(left, right)


def test_consistent_extraction_is_everything():
    b = fuse([B([("p", .4)]), B([("q", .7)])], builtin("prod"))
    assert classical_extraction(b) == b.star()


def test_min_fusion_is_union():
    b1, b2 = fx.min_p7()
    assert base_equivalent(fuse([b1, b2], builtin("min")), union(b1, b2))


def test_three_singletons_min():
    bs = [B([(a, .5)], ["p", "q", "r"]) for a in "pqr"]
    fused = fuse(bs, builtin("min"))
    assert len(fused) == 7 and all(w == pytest.approx(.5) for w in fused.weights())
    assert base_equivalent(fused, union(*bs))


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_single_source_is_identity(name):
    b = fx.example2()[0]
    got = fuse([b], BUILTINS[name])
    assert [f for f, _ in got.items] == [f for f, _ in b.items]
    assert [w for _, w in got.items] == pytest.approx([w for _, w in b.items], abs=1e-12)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_fuse_n_matches_fuse2_at_two(name):
    b1, b2, _ = fx.example1()
    a = fuse2(b1, b2, BUILTINS[name])
    c = fuse_n(FusionProblem((b1, b2), BUILTINS[name]))
    assert sorted(a.base.items, key=str) == sorted(c.base.items, key=str)
    assert sorted(a.provenance) == sorted(c.provenance)


def test_provenance():
    b1, b2, _ = fx.example1()
    fused = fuse_n(FusionProblem((b1, b2), builtin("amean")))
    for (f, _), prov in fused:
        assert 1 <= len(prov) <= 2
        parts = [(b1, b2)[i].items[j].formula for i, j in prov]
        assert f == logic.disjoin(parts)


def test_zero_weight_items_dropped():
    fused = fuse([B([("p", .5)]), B([("q", .5)])], builtin("max"))
    assert [str(f) for f in fused.star()] == ["p | q"]
    assert fused.items[0].weight == pytest.approx(.5)


def test_explosion_cap():
    bs = [B([(a, .5), (f"~{a}", .2)], ["p", "q", "r"]) for a in "pqr"]
    with configured(explosion_cap=10):
        with pytest.raises(ExplosionCapError):
            fuse(bs, builtin("min"))


def test_contract_violation():
    bad = Operator("half", lambda a, b: a * b / 2)
    with pytest.raises(ContractViolationError):
        fuse2(B([("p", .5)]), B([("q", .5)]), bad)


def test_vocabularies_are_merged():
    fused = fuse([B([("p", .5)]), B([("q", .5)])], builtin("min"))
    assert fused.vocabulary == ("p", "q")


# semantic side ------------------------------------------------------------

def test_semantic_fuse_examples():
    ones = Distribution(("p",), [1.0, 1.0])
    pi2 = Distribution(("p",), [0.3, 1.0])
    assert semantic_fuse([ones, pi2], builtin("prod")).allclose(pi2)
    assert semantic_fuse([ones, pi2], builtin("psum")).allclose(ones)
    b1, b2, _ = fx.example1()
    pi1, pi2 = distributions([b1, b2])
    assert pi1["01"] == pytest.approx(.8) and pi2["01"] == pytest.approx(.2)
    assert semantic_fuse([pi1, pi2], builtin("amean"))["01"] == pytest.approx(.5)
    with pytest.raises(ValueError):
        semantic_fuse([ones, Distribution(("q",), [1.0, 1.0])], builtin("min"))


def _oracle_combined(bs, op):
    dists = [oracle.distribution([tuple(it) for it in b.items], VOCAB) for b in bs]
    return [nary_apply(op, col) for col in zip(*dists)]


@hsettings(max_examples=80, deadline=None)
@given(st.lists(bases(max_items=3), min_size=1, max_size=3),
       st.sampled_from(sorted(BUILTINS)))
def test_semantic_oracle(bs, name):
    op = BUILTINS[name]
    got = to_distribution(fuse(bs, op)).values
    assert np.allclose(got, _oracle_combined(bs, op), atol=1e-9, rtol=0)


@hsettings(max_examples=60, deadline=None)
@given(st.lists(bases(max_items=3), min_size=2, max_size=3),
       st.sampled_from([n for n, o in BUILTINS.items() if o.associative]))
def test_associative_coherence(bs, name):
    op = BUILTINS[name]
    flat = fuse(bs, op)
    assert base_equivalent(flat, fold_fuse2(bs, op))
    if len(bs) == 3:
        right = fuse2(bs[0], fuse2(bs[1], bs[2], op).base, op).base
        assert base_equivalent(flat, right)


# reliability and dictatorship ---------------------------------------------

def test_discount_examples():
    b = B([("p", .9), ("q", .3)])
    assert discount(b, 1.0) == b
    assert len(discount(b, 0.0)) == 0
    assert [w for _, w in discount(b, .5).items] == [.5, .3]
    with pytest.raises(ValueError):
        discount(b, 1.5)


def test_weighted_min_examples():
    b1, b2 = B([("p", .8)]), B([("~p", .8)])
    fused = weighted_min_fuse([b1, b2], [1.0, .3]).base
    assert fused.inc == pytest.approx(.3)
    assert logic.equivalent(classical_extraction(fused), [Atom("p")])
    none = weighted_min_fuse([b1, b2], [1.0, 0.0]).base
    assert base_equivalent(none, b1.with_vocabulary(none.vocabulary))
    with pytest.raises(ValueError):
        weighted_min_fuse([b1, b2], [1.0])


@hsettings(max_examples=60, deadline=None)
@given(st.lists(bases(max_items=3), min_size=1, max_size=3), st.data())
def test_weighted_min_semantics(bs, data):
    lams = data.draw(st.lists(st.sampled_from((0.0,) + GRID), min_size=len(bs), max_size=len(bs)))
    got = to_distribution(weighted_min_fuse(bs, lams).base)
    want = weighted_min_distribution(distributions(bs), lams)
    assert got.allclose(want, atol=1e-9)
    ref = [min(max(p, 1 - lam) for p, lam in zip(col, lams))
           for col in zip(*[oracle.distribution([tuple(it) for it in b.items], VOCAB) for b in bs])]
    assert np.allclose(got.values, ref, atol=1e-9)
    assert base_equivalent(weighted_min_fuse(bs, [1.0] * len(bs)).base, fuse(bs, builtin("min")))


def _order_ok(p1, p2, out):
    n = len(out.values)
    for i, j in itertools.permutations(range(n), 2):
        a1, b1, o = p1.values, p2.values, out.values
        if a1[i] > a1[j] + 1e-9:
            assert o[i] > o[j]
        if abs(a1[i] - a1[j]) <= 1e-9:
            assert (o[i] >= o[j]) == (b1[i] >= b1[j] - 1e-9)


@given(st.lists(st.sampled_from((0.0,) + GRID), min_size=4, max_size=4),
       st.lists(st.sampled_from((0.0,) + GRID), min_size=4, max_size=4))
def test_dictator_order(v1, v2):
    p1, p2 = Distribution(("p", "q"), v1), Distribution(("p", "q"), v2)
    out = dictator_refine(p1, p2)
    _order_ok(p1, p2, out)
    assert out.height() == 1.0


def test_dictator_examples():
    p1 = Distribution(("p", "q"), [.2, 1.0, 1.0, .5])
    const = Distribution(("p", "q"), [.7] * 4)
    assert list(np.argsort(dictator_refine(p1, const).values, kind="stable")) == \
        list(np.argsort(p1.values, kind="stable"))
    assert list(np.argsort(dictator_refine(const, p1).values, kind="stable")) == \
        list(np.argsort(p1.values, kind="stable"))
    split = dictator_refine(p1, Distribution(("p", "q"), [1, .3, .6, 1]))
    assert split[2] > split[1]
