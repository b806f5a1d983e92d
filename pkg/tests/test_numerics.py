import math

import numpy as np
import pytest

from unireduce import DEFAULT_TOL, Tolerance, certify_unitary, gram_schmidt, polar_project, unit_vector
from unireduce.errors import DependentInput, NearSingular, NotSquare, NotUnitary
from unireduce.numerics import inner, null_space, random_unitary, unitarity_defect


def test_certify_identity_and_signature():
    assert unitarity_defect(certify_unitary(np.eye(3))) == 0
    m = certify_unitary(np.diag([1, -1]))
    assert not m.flags.writeable


def test_certify_shear_reports_defect():
    # M*M - I = [[0, 1], [1, 1]] so the Frobenius norm is sqrt(3)
    with pytest.raises(NotUnitary) as info:
        certify_unitary([[1, 1], [0, 1]])
    assert info.value.defect == pytest.approx(math.sqrt(3), abs=1e-15)


def test_certify_rejects_rectangular():
    with pytest.raises(NotSquare):
        certify_unitary(np.ones((2, 3)))


def test_polar_fixes_unitaries(rng):
    u = random_unitary(4, rng)
    assert np.linalg.norm(polar_project(u) - u) < 1e-12


def test_polar_strips_positive_scalar():
    assert np.allclose(polar_project(2 * np.eye(2)), np.eye(2), atol=1e-15)


def test_polar_first_order_perturbation(rng):
    u = random_unitary(3, rng)
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = (h + h.conj().T) / 2
    h /= np.linalg.norm(h, 2)
    p = polar_project(u @ (np.eye(3) + 1e-6 * h))
    assert np.linalg.norm(p - u) < 2e-6


def test_polar_stack_and_singular():
    stack = np.stack([np.eye(2), 3 * np.diag([1, -1])])
    assert np.allclose(polar_project(stack), [np.eye(2), np.diag([1, -1])])
    with pytest.raises(NearSingular):
        polar_project(np.diag([1.0, 0.0]))


def test_gram_schmidt_examples():
    assert np.allclose(gram_schmidt(np.eye(3)), np.eye(3))
    q = gram_schmidt([[1, 0], [1, 1]])
    assert np.allclose(q, [[1, 0], [0, 1]], atol=1e-15)
    r = 1 / math.sqrt(2)
    q = gram_schmidt([[r, r], [r, -r]])
    assert np.allclose(q, [[r, r], [r, -r]], atol=1e-15)


def test_gram_schmidt_rejects_dependent():
    with pytest.raises(DependentInput):
        gram_schmidt([[1, 0], [2, 0]])
    with pytest.raises(DependentInput):
        gram_schmidt([[1, 0], [0, 1], [1, 1]])


def test_gram_schmidt_orthonormal(rng):
    vecs = rng.standard_normal((5, 6)) + 1j * rng.standard_normal((5, 6))
    q = np.stack(gram_schmidt(vecs), axis=1)
    assert np.linalg.norm(q.conj().T @ q - np.eye(5)) < 1e-14


def test_unit_vector_and_inner():
    v = unit_vector([3, 4j])
    assert np.allclose(v, [0.6, 0.8j])
    assert inner(np.array([1j, 0]), np.array([1, 0])) == 1j
    with pytest.raises(ValueError):
        unit_vector([0, 0])


def test_null_space():
    a = np.array([[1, 0, 0], [0, 1, 0]], dtype=complex)
    ns = null_space(a, 1e-10)
    assert ns.shape == (3, 1)
    assert abs(abs(ns[2, 0]) - 1) < 1e-15


def test_tolerance_validation():
    assert DEFAULT_TOL.as_dict() == {"eq_tol": 1e-8, "unitarity_tol": 1e-10, "residual_tol": 1e-8}
    with pytest.raises(ValueError):
        Tolerance(eq_tol=-1)
    with pytest.raises(ValueError):
        Tolerance(eq_tol=1e-12, unitarity_tol=1e-10)
