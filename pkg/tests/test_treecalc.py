import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from whitcalc.exactlinalg import IntMatrix, cokernel_structure, lattice_basis
from whitcalc.freelie import LieElement, TensorElement, bracket_image, in_dn, lie_bracket, milnor_rank, tensor_basis
from whitcalc.treecalc import (
    TreeLimitError,
    TreeSum,
    TwistedTree,
    boundary_twist,
    canonical_twisted,
    canonical_unrooted,
    enumerate_trees,
    enumerate_twisted,
    eta,
    eta_image_generators,
    eta_tree,
    eta_twisted,
    eta_twisted_by_halving,
    inner_product,
    is_two_torsion,
    parse_tree,
    random_tree,
    random_tree_sum,
    reroot_all,
    rooted_trees,
    swap_children,
    tree_bracket,
    tree_order,
)


def trees(m, max_leaves=5):
    return st.recursive(st.integers(1, m), lambda kids: st.tuples(kids, kids), max_leaves=max_leaves)


def seeds():
    return st.integers(0, 2**32 - 1)


def X(m, i):
    return LieElement.generator(m, i)


def cyclic_sum():
    terms = {}
    for i, (a, b) in ((1, (2, 3)), (2, (3, 1)), (3, (1, 2))):
        for w, c in lie_bracket(X(3, a), X(3, b)).coords.items():
            terms[(i, w)] = c
    return TensorElement(3, 1, terms)


# ---------------------------------------------------------------- brackets and inner products


def test_tree_bracket_examples():
    assert tree_bracket(1, 2) == X(2, 1)
    assert tree_bracket((1, 2), 2).coords == {(1, 2): 1}
    assert tree_bracket((1, 1), 2).is_zero()


@given(trees(3))
def test_child_swap_negates_bracket(t):
    if not isinstance(t, int):
        assert tree_bracket(swap_children(t), 3) == -tree_bracket(t, 3)


def test_inner_product_examples():
    s, u = inner_product(1, 2)
    assert (s, u.root_label, u.body, u.order) == (1, 1, 2, 0)
    s, u = inner_product((1, 2), 3)
    assert u.order == 1 and sorted(u.labels()) == [1, 2, 3]


@given(trees(3, 4), trees(3, 4))
def test_inner_product_is_symmetric(a, b):
    assert inner_product(a, b) == inner_product(b, a)


@given(trees(3, 5), st.integers(1, 3))
def test_canonicalization_is_idempotent_and_reroot_invariant(body, label):
    s, u = canonical_unrooted(label, body)
    assert canonical_unrooted(u.root_label, u.body) == (1, u)
    for lab, tv in reroot_all(u):
        assert canonical_unrooted(lab, tv) == (1, u)


@given(trees(3, 5), st.integers(1, 3))
def test_antisymmetry_in_tree_sums(body, label):
    if isinstance(body, int):
        return
    n = tree_order(body)
    ts = TreeSum(3, n).add_plain(label, body, 1).add_plain(label, swap_children(body), 1)
    assert ts.is_zero()
    # a tree fixed by an orientation-reversing symmetry is 2-torsion
    (t,) = TreeSum(3, n).add_plain(label, body, 1).plain
    if is_two_torsion(t):
        assert eta_tree(t, 3).is_zero()


def test_enumeration_counts():
    assert len(enumerate_trees(2, 0)) == 3
    assert len(enumerate_trees(1, 0)) == 1
    assert [sorted(t.labels()) for t in enumerate_trees(2, 1)] == [[1, 1, 1], [1, 1, 2], [1, 2, 2], [2, 2, 2]]


def test_enumeration_has_no_duplicates():
    for m, n in ((2, 2), (3, 2), (2, 3)):
        ts = enumerate_trees(m, n)
        assert len(ts) == len(set(ts))
        assert all(canonical_unrooted(t.root_label, t.body) == (1, t) for t in ts)


def test_enumeration_ceiling(monkeypatch):
    with pytest.raises(TreeLimitError):
        enumerate_trees(2, 7)
    monkeypatch.setenv("WHITCALC_MAX_ORDER", "2")
    with pytest.raises(TreeLimitError):
        enumerate_trees(2, 3)
    assert len(enumerate_trees(2, 3, limit=3)) > 0


# ---------------------------------------------------------------- eta


def test_eta_examples():
    ts = TreeSum(2, 0).add_plain(1, 2)
    assert eta(ts).coords == {(1, (2,)): 1, (2, (1,)): 1}
    ts = TreeSum(1, 0).add_twisted(1)
    assert eta(ts).coords == {(1, (1,)): 1}
    y = eta(TreeSum(3, 1).add_plain(1, (2, 3)))
    assert y == cyclic_sum() or y == -cyclic_sum()


def test_eta_image_generator_examples():
    gens = eta_image_generators(1, 0)
    assert sorted(g.coords[(1, (1,))] for g in gens) == [1, 2]
    assert all(g.is_zero() for g in eta_image_generators(2, 1))
    N = len(tensor_basis(3, 1))
    basis = lattice_basis([g.sparse_vector() for g in eta_image_generators(3, 1)], N)
    assert len(basis) == 1 == milnor_rank(3, 1)


def test_twisted_integrality_and_copy_choice():
    for m in (1, 2, 3):
        for order in (0, 1, 2):
            for t in enumerate_twisted(m, order):
                half = eta_twisted_by_halving(t.body, m)
                assert eta_twisted(t.body, m, copy=0) == half == eta_twisted(t.body, m, copy=1)


@given(trees(3, 3))
def test_twisted_tree_ignores_orientation(body):
    assert canonical_twisted(body) == canonical_twisted(swap_children(body) if not isinstance(body, int) else body)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_eta_lands_in_dn(m, n):
    for x in eta_image_generators(m, n):
        assert bracket_image(x).is_zero()


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_eta_spans_dn(m, n):
    N = len(tensor_basis(m, n))
    basis = lattice_basis([g.sparse_vector() for g in eta_image_generators(m, n)], N)
    M = milnor_rank(m, n)
    assert len(basis) == M
    if basis:
        # cokernel in the ambient lattice equals the (free) cokernel of D_n itself
        assert cokernel_structure(IntMatrix.from_columns(basis, N)).torsion == ()


@given(seeds(), st.integers(1, 3), st.integers(0, 3))
def test_eta_is_linear(seed, m, n):
    rng = random.Random(seed)
    a, b = random_tree_sum(rng, m, n), random_tree_sum(rng, m, n)
    assert eta(a + b * 3) == eta(a) + eta(b) * 3


@given(seeds())
def test_eta_kills_ihx(seed):
    # I - H + X with a common outer shape: [[a,b],c] = [a,[b,c]] - [b,[a,c]]
    rng = random.Random(seed)
    a, b, c = (random_tree(rng, 3, rng.randint(0, 1)) for _ in range(3))
    label = rng.randint(1, 3)
    n = sum(tree_order(t) for t in (a, b, c)) + 2
    ts = TreeSum(3, n).add_plain(label, ((a, b), c)).add_plain(label, (a, (b, c)), -1)
    ts.add_plain(label, (b, (a, c)), 1)
    assert eta(ts).is_zero()


def test_tree_sum_order_checks():
    with pytest.raises(ValueError):
        TreeSum(2, 1).add_plain(1, 2)
    with pytest.raises(ValueError):
        TreeSum(2, 1).add_twisted(1)
    with pytest.raises(ValueError):
        TreeSum(2, 0).add_plain(3, 1)


@given(seeds(), st.integers(1, 3), st.integers(0, 4))
def test_tree_sum_json_round_trip(seed, m, n):
    ts = random_tree_sum(random.Random(seed), m, n)
    assert TreeSum.from_json(json.dumps(ts.to_json())) == ts


def test_parse_tree_forms():
    assert parse_tree("<(1,2),3>") == ("plain", (1, 2), 3)
    assert parse_tree("twist:(1,2)") == ("twisted", (1, 2), None)
    assert parse_tree("((1,2),3)") == ("rooted", ((1, 2), 3), None)
    with pytest.raises(ValueError):
        parse_tree("<(1,2>")


# ---------------------------------------------------------------- boundary twist


def test_boundary_twist_example():
    out = boundary_twist(TwistedTree((1, 2)), 2)
    expected = TreeSum(2, 1).add_plain(1, (2, 2))
    assert out == expected
    assert eta(out).is_zero()


def test_boundary_twist_rejects_order_zero():
    with pytest.raises(ValueError):
        boundary_twist(TwistedTree(1), 2)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("ell", [1, 2])
def test_boundary_twist_output_dies_under_eta(m, ell):
    for body in rooted_trees(m, ell):
        out = boundary_twist(body, m)
        assert out.order == 2 * ell - 1
        assert eta(out).is_zero()


def test_boundary_twist_uses_ihx_when_needed():
    out = boundary_twist(((1, 2), (1, 3)), 3)
    assert out.order == 5 and len(out.plain) == 2
    assert all(is_two_torsion(t) for t in out.plain)


def test_two_torsion_examples():
    (t,) = TreeSum(2, 1).add_plain(1, (2, 2)).plain
    assert is_two_torsion(t)
    assert TreeSum(2, 1).add_plain(1, (2, 2), 2).is_zero()
    (t,) = TreeSum(3, 1).add_plain(1, (2, 3)).plain
    assert not is_two_torsion(t)


@given(trees(3, 4))
def test_boundary_twist_ignores_orientation_of_the_body(body):
    if tree_order(body) < 1:
        return
    assert boundary_twist(body, 3) == boundary_twist(swap_children(body), 3)
