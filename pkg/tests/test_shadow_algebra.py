import random
from collections import Counter

import pytest
from hypothesis import example, given, strategies as st

from reltrace import linalg
from reltrace.fundamental_group import (
    AbelianStructure, Presentation, twisted_conjugacy_classes, word_mul,
)
from reltrace.shadow_algebra import (
    GroupRing, GroupRingMatrix, TraceVector, augmentation, fox_derivative, stallings_trace,
)
from reltrace.shadow_algebra.eimodules import (
    EICategory, EIModule, build_dual, cyclic_group_category, eimodule_compose, eimodule_shadow,
    free_module, hom_bimodule, sign_module, verify_snake,
)

from gen import random_ei_category, random_free_modules

FREE2 = Presentation(("a", "b"))
COMM = (("a", 1), ("b", 1), ("a", -1), ("b", -1))


def ring2():
    return GroupRing(AbelianStructure(Presentation(("a", "b"), (COMM,))))


def words(gens=("a", "b"), max_size=6):
    return st.lists(st.tuples(st.sampled_from(gens), st.sampled_from((-2, -1, 1, 2))),
                    max_size=max_size).map(tuple)


# group ring -------------------------------------------------------------------------

def test_ring_arithmetic():
    R = ring2()
    a, b = R.group_element((("a", 1),)), R.group_element((("b", 1),))
    x = (a + 1) * (a - 1)
    assert x == R.group_element((("a", 2),)) - 1
    assert (a * b).augmentation() == 1
    assert R.from_pairs([(2, [("a", 1), ("b", 1)]), (-1, [("b", 1), ("a", 1)])]) == a * b
    assert (a - a) == R.zero() and not R.zero()


def test_twisting_an_element():
    R = ring2()
    a = R.group_element((("a", 1),))
    assert a.twist([[-1, 0], [0, 3]]) == R.group_element((("a", -1),))


# Fox calculus ------------------------------------------------------------------------

def test_fox_derivative_of_commutator():
    assert fox_derivative(COMM, "a") == {(): 1, (("a", 1), ("b", 1), ("a", -1)): -1}
    R = ring2()
    b = R.group_element((("b", 1),))
    assert fox_derivative(COMM, "a", R) == 1 - b


def test_fox_derivative_of_powers():
    assert fox_derivative((("a", 3),), "a") == {(): 1, (("a", 1),): 1, (("a", 2),): 1}
    assert fox_derivative((("a", -2),), "a") == {(("a", -1),): -1, (("a", -2),): -1}
    assert fox_derivative((("b", 1),), "a") == {}


@given(words())
def test_fundamental_formula(w):
    R = GroupRing(AbelianStructure(FREE2))
    total = R.zero()
    for g in ("a", "b"):
        total = total + fox_derivative(w, g, R) * (R.group_element(((g, 1),)) - 1)
    assert total == R.group_element(w) - 1


@given(words(), words())
def test_product_rule(u, v):
    for g in ("a", "b"):
        lhs = Counter(fox_derivative(word_mul(u, v), g))
        rhs = Counter(fox_derivative(u, g))
        for w, c in fox_derivative(v, g).items():
            rhs[word_mul(u, w)] += c
        assert {k: c for k, c in lhs.items() if c} == {k: c for k, c in rhs.items() if c}


# Stallings trace ------------------------------------------------------------------------

def test_stallings_trace_example():
    R = ring2()
    sh = twisted_conjugacy_classes(R.ab, [[-1, 0], [0, 3]])
    a, b = R.group_element((("a", 1),)), R.group_element((("b", 1),))
    M = GroupRingMatrix.from_rows(R, [[a, b, 0], [0, b, 0], [0, 0, -1]], twist=[[-1, 0], [0, 3]])
    t = stallings_trace(M, sh)
    assert t.by_label() == {"1": -1, "a": 1, "b": 1}
    assert augmentation(t) == 1 == linalg.trace(M.augment())


def test_trace_requires_matching_twist():
    R = ring2()
    sh = twisted_conjugacy_classes(R.ab, [[-1, 0], [0, 3]])
    with pytest.raises(ValueError):
        stallings_trace(GroupRingMatrix.identity(R, 2), sh)


def _random_matrix(R, rng, n, m):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(m):
            terms = {(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(-2, 2)
                     for _ in range(rng.randint(0, 2))}
            row.append(R.element(terms))
        rows.append(row)
    return GroupRingMatrix.from_rows(R, rows)


@given(st.integers(0, 10 ** 6))
def test_trace_is_cyclic(s):
    rng = random.Random(s)
    R = ring2()
    sh = twisted_conjugacy_classes(R.ab, [[1, 0], [0, 1]])
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    M, N = _random_matrix(R, rng, n, m), _random_matrix(R, rng, m, n)
    assert stallings_trace(M @ N, sh) == stallings_trace(N @ M, sh)


@given(st.integers(0, 10 ** 6))
def test_augmentation_commutes_with_trace(s):
    rng = random.Random(s)
    R = ring2()
    Phi = [[-1, 0], [0, 3]]
    sh = twisted_conjugacy_classes(R.ab, Phi)
    n = rng.randint(1, 4)
    M = _random_matrix(R, rng, n, n).with_twist(Phi)
    assert stallings_trace(M, sh).augmentation() == linalg.trace(M.augment())


def test_trace_vector_algebra():
    sh = twisted_conjugacy_classes(ring2().ab, [[4, 0], [0, 3]])
    t = TraceVector(sh, {(0, 0): 2, (1, 0): -1})
    assert (t - t) == TraceVector(sh) and not (t - t)
    assert (2 * t).augmentation() == 2
    assert t.format() == "2[1] - [a]"


# EI-categories -----------------------------------------------------------------------------

def test_cyclic_category_is_ei():
    assert cyclic_group_category(3).validate() == []


def test_broken_composition_is_caught():
    cat = cyclic_group_category(2)
    comp = dict(cat.composition)
    comp[(("*", 1), ("*", 1))] = ("*", 1)
    bad = EICategory(cat.objects, cat.homs, comp, cat.identities)
    assert bad.validate()


def test_free_compose_over_z3():
    cat = cyclic_group_category(3)
    X = free_module(cat, {"*": 2}, "contravariant")
    Y = free_module(cat, {"*": 1}, "covariant")
    r = eimodule_compose(X, Y)
    assert r.agrees and r.direct_sum == (6, [])


def test_sign_tensor_trivial_is_z2():
    cat = cyclic_group_category(2)
    X = sign_module(cat, "*", "contravariant")
    trivial = EIModule(cat, "covariant", {"*": 1}, {m: [[1]] for m in cat.ends})
    r = eimodule_compose(X, trivial)
    assert r.direct_sum == r.coequalizer == (0, [2])
    assert eimodule_compose(X, sign_module(cat, "*", "covariant")).direct_sum == (1, [])


def test_hom_bimodule_shadow_of_z3():
    assert eimodule_shadow(hom_bimodule(cyclic_group_category(3))).free_rank == 3


def test_dual_of_free_module():
    cat = cyclic_group_category(2)
    F = free_module(cat, {"*": 2}, "contravariant")
    assert verify_snake(F, build_dual(F))


def test_dual_needs_a_free_module():
    cat = cyclic_group_category(2)
    with pytest.raises(ValueError):
        build_dual(sign_module(cat, "*", "contravariant"))


@given(st.integers(0, 10 ** 6))
@example(5072)  # a rank-0 object sits between two nonzero ones
def test_random_ei_compose_and_snake(s):
    rng = random.Random(s)
    cat = random_ei_category(rng)
    assert cat.validate() == []
    X, Y = random_free_modules(cat, rng)
    assert X.validate() == [] and Y.validate() == []
    assert eimodule_compose(X, Y).agrees
    assert verify_snake(X, build_dual(X))


def test_matmul_keeps_shape_through_empty_inner_dimension():
    assert linalg.matmul([[], [], []], [], 2) == [[0, 0]] * 3


@given(st.integers(0, 10 ** 6))
def test_hom_shadow_counts_conjugacy_classes(s):
    # abelian automorphism groups: one class per element, per isomorphism class
    cat = random_ei_category(random.Random(s))
    expected = sum(len(cat.automorphisms(c)) for c in cat.representatives())
    sh = eimodule_shadow(hom_bimodule(cat))
    assert (sh.free_rank, sh.torsion) == (expected, ())
