import numpy as np
import pytest

from unireduce import (
    FiniteUnitaryGroup,
    MatrixSet,
    class_sum_norm,
    close_group,
    commutator,
    conjugate_group,
    derived_elements,
    find_scalar_commutator,
    group_from_elements,
    is_commutator_group,
    is_transitive,
    monomial_structure,
    orbits,
    subgroup,
    weight_kernel,
    weight_product_hom,
)
from unireduce.errors import CapExceeded, DimensionMismatch, NoWitness, NotUnitary
from unireduce.group import canonical_key, lagrange_consistent, permutation_sign
from unireduce.numerics import random_unitary

from conftest import CYCLE3, SWAP3, X, Z


def test_closure_orders(pauli, s3):
    assert close_group([np.eye(3)]).order == 1
    assert s3.order == 6
    assert pauli.order == 8
    assert s3.is_closed() and pauli.is_closed()


def test_pauli_elements(pauli):
    expected = [np.eye(2), -np.eye(2), X, -X, Z, -Z, X @ Z, -X @ Z]
    for m in expected:
        assert pauli.index_of(m) is not None


def test_canonical_order(pauli):
    keys = [canonical_key(m) for m in pauli.elements]
    assert keys == sorted(keys)
    assert np.allclose(pauli.elements[0], np.eye(2))


def test_closure_independent_of_generator_order(s3):
    other = close_group([SWAP3, CYCLE3])
    assert np.array_equal(other.elements, s3.elements)


def test_closure_errors():
    c, s = np.cos(1), np.sin(1)
    with pytest.raises(CapExceeded):
        close_group([[[c, -s], [s, c]]], cap=500)
    with pytest.raises(DimensionMismatch):
        close_group([np.eye(2), np.eye(3)])
    with pytest.raises(NotUnitary):
        close_group([[[1, 1], [0, 1]]])


def test_tables(s3):
    mul = s3.multiplication_table
    e = s3.elements
    for i in range(s3.order):
        for j in range(s3.order):
            assert np.allclose(e[mul[i, j]], e[i] @ e[j])
    inv = s3.inverse_indices
    assert all(mul[i, inv[i]] == s3.identity_index for i in range(6))
    assert lagrange_consistent(s3)
    assert sorted(s3.element_order(i) for i in range(6)) == [1, 2, 2, 2, 3, 3]


def test_matrix_set_tolerance():
    s = MatrixSet(2, 1e-8)
    assert s.add(np.eye(2)) == (0, True)
    assert s.add(np.eye(2) + 1e-10) == (0, False)
    assert s.add(np.eye(2) + 1e-6)[1]
    assert s.find(-np.eye(2)) is None
    assert list(s.find_many(np.stack([np.eye(2), -np.eye(2)]))) == [0, -1]


def test_commutator_examples():
    a, b = np.diag([1, 1j]), np.diag([-1, 1j])
    assert np.allclose(commutator(a, b), np.eye(2))
    assert np.allclose(commutator(X, Z), -np.eye(2))
    c = commutator(CYCLE3, SWAP3)
    assert np.allclose(c, CYCLE3 @ CYCLE3)
    with pytest.raises(DimensionMismatch):
        commutator(np.eye(2), np.eye(3))


def test_derived_elements(pauli, s3, diag2):
    assert derived_elements(diag2) == {diag2.identity_index}
    d = derived_elements(s3)
    assert len(d) == 3
    assert all(np.isclose(np.trace(s3.elements[i]), 3) or np.isclose(np.trace(s3.elements[i]), 0) for i in d)
    assert {pauli.index_of(np.eye(2)), pauli.index_of(-np.eye(2))} == derived_elements(pauli)


def test_scalar_commutator_witnesses(pauli, s3):
    w = find_scalar_commutator(pauli, pauli.identity_index)
    assert w.scalar == pytest.approx(1)
    w = find_scalar_commutator(pauli, pauli.index_of(-np.eye(2)))
    assert w.scalar == pytest.approx(1)
    assert np.allclose(commutator(pauli.elements[w.a_index], pauli.elements[w.b_index]), -np.eye(2))
    with pytest.raises(NoWitness):
        find_scalar_commutator(s3, s3.index_of(SWAP3))
    assert not is_commutator_group(s3)


def test_monomial_examples(s3, diag2):
    ms = monomial_structure(s3)
    assert ms is not None and np.allclose(ms.weights, 1)
    assert is_transitive(ms)
    ms = monomial_structure(diag2)
    assert np.all(ms.perms == np.arange(2))
    assert orbits(ms) == [[0], [1]]
    assert not is_transitive(ms)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert monomial_structure(close_group([h])) is None
    shift = close_group([np.roll(np.eye(4), 1, axis=0)])
    assert is_transitive(monomial_structure(shift))


def test_monomial_reconstruct(pauli):
    ms = monomial_structure(pauli)
    for k in range(pauli.order):
        assert np.allclose(ms.reconstruct(k), pauli.elements[k])


def test_weight_product(s3):
    g = close_group([np.diag([1j, -1j]), np.diag([1j, 1])])
    ms = monomial_structure(g)
    assert weight_product_hom(g, ms, g.index_of(np.diag([1j, -1j]))) == pytest.approx(1)
    assert weight_product_hom(g, ms, g.index_of(np.diag([1j, 1]))) == pytest.approx(1j)
    assert weight_product_hom(s3, monomial_structure(s3), 3) == pytest.approx(1)
    k = weight_kernel(g, ms)
    assert k.order == 4 and k.is_closed()


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([1, 2, 0]) == 1


def test_class_sum_norm(s3, pauli, trivial2):
    assert class_sum_norm(s3) == pytest.approx(2)
    assert class_sum_norm(pauli) == pytest.approx(1)
    assert class_sum_norm(trivial2) == pytest.approx(4)


def test_group_from_elements_and_subgroup(pauli):
    g = group_from_elements(list(pauli.elements) + [pauli.elements[3]])
    assert g.order == 8 and g.is_closed()
    sub = subgroup(pauli, [pauli.index_of(np.eye(2)), pauli.index_of(-np.eye(2))])
    assert sub.order == 2 and sub.is_closed()


def test_conjugate_group_keeps_order(pauli, rng):
    u = random_unitary(2, rng)
    c = conjugate_group(pauli, u)
    assert np.allclose(c.elements[3], u @ pauli.elements[3] @ u.conj().T)
    assert np.array_equal(c.multiplication_table, pauli.multiplication_table)


def test_group_values_are_immutable(pauli):
    with pytest.raises(ValueError):
        pauli.elements[0, 0, 0] = 2
    assert isinstance(pauli, FiniteUnitaryGroup)
