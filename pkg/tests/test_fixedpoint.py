import math

import numpy as np
import pytest

from unireduce import (
    average_certificate,
    average_fixed_point,
    close_group,
    commutator_defect_check,
    defect,
    eigen_identity_gap,
    lambda_map,
    reducibility_threshold,
    rho_eigenvector,
    rho_threshold,
)
from unireduce.errors import (
    DimensionMismatch,
    HypothesisViolated,
    NoWitness,
    VanishingInnerProduct,
    ZeroAverage,
)
from unireduce.families import binary_icosahedral, direct_sum, trivial_character
from unireduce.numerics import random_unit_vector, random_unitary
from unireduce.sampling import perturbed

from conftest import X


def test_thresholds():
    assert reducibility_threshold(2) == pytest.approx(1.3563368e-7, rel=1e-7)
    assert reducibility_threshold(4) == pytest.approx(6.6227e-11, rel=1e-4)
    assert rho_threshold(2) == 1 / 128


def test_defect_examples(trivial2, sign2, s3, rng):
    xi = random_unit_vector(2, rng)
    r = defect(trivial2, xi)
    assert r.weak_defect == 0 and r.strong_defect == 0
    r = defect(sign2, xi)
    assert r.weak_defect == pytest.approx(0, abs=1e-15)
    assert r.strong_defect == pytest.approx(2)
    r = defect(s3, [1, 0, 0])
    assert r.weak_defect == 1
    assert s3.elements[r.argmin_element][0, 0] == 0
    assert r.argmin_element == min(i for i in range(6) if s3.elements[i][0, 0] == 0)
    with pytest.raises(DimensionMismatch):
        defect(s3, [1, 0])


def test_defect_relative_accuracy(diag2):
    # 1 - |1 - 2 d^2| = 2 d^2 exactly; the naive formula loses it below 1e-16
    for d in (1e-3, 1e-6, 1e-9):
        xi = np.array([math.sqrt(1 - d * d), d])
        assert defect(diag2, xi).weak_defect == pytest.approx(2 * d * d, rel=1e-9)


def test_defect_strong_formula(pauli, rng):
    xi = random_unit_vector(2, rng)
    r = defect(pauli, xi)
    z = (pauli.elements @ xi) @ xi.conj()
    assert r.strong_defect ** 2 == pytest.approx(np.max(2 - 2 * z.real))
    assert np.allclose(r.moduli, np.abs(z))


def test_lambda_map_examples():
    g = close_group([1j * np.eye(2)])
    lm = lambda_map(g, [0.6, 0.8])
    k = g.index_of(1j * np.eye(2))
    assert lm.values[k] == pytest.approx(1j)
    assert lm.residuals[k] == pytest.approx(0, abs=1e-15)
    d = close_group([np.diag([1, -1])])
    xi = np.array([math.sqrt(0.9), math.sqrt(0.1)])
    lm = lambda_map(d, xi)
    k = d.index_of(np.diag([1, -1]))
    assert lm.values[k] == pytest.approx(1)
    assert lm.residuals[k] ** 2 == pytest.approx(0.4)


def test_lambda_map_adjoint_conjugates(pauli, rng):
    xi = random_unit_vector(2, rng)
    u = random_unitary(2, rng)
    g = close_group([u @ np.diag([1, 1j]) @ u.conj().T])
    try:
        lm = lambda_map(g, xi)
    except VanishingInnerProduct:
        pytest.skip("degenerate draw")
    inv = g.inverse_indices
    assert np.allclose(lm.values[inv], np.conj(lm.values), atol=1e-12)


def test_lambda_map_vanishing(s3):
    with pytest.raises(VanishingInnerProduct):
        lambda_map(s3, [1, 0, 0])


def test_eigen_identity_gap(rng):
    for n in (2, 5, 8):
        assert abs(eigen_identity_gap(random_unitary(n, rng), random_unit_vector(n, rng))) < 1e-12


def test_average_examples(trivial2, sign2, rng):
    xi = random_unit_vector(2, rng)
    eta, dist = average_fixed_point(trivial2, xi)
    assert np.allclose(eta, xi) and dist == pytest.approx(0, abs=1e-15)
    swap = close_group([X])
    eta, dist = average_fixed_point(swap, [1, 0])
    assert np.allclose(eta, [0.5, 0.5])
    assert dist == pytest.approx(1 / math.sqrt(2))
    assert dist <= defect(swap, [1, 0]).strong_defect
    with pytest.raises(ZeroAverage):
        average_fixed_point(sign2, xi)


def test_average_certificate(s3, rng):
    xi = perturbed(np.ones(3) / math.sqrt(3), 1e-3, rng)
    c = average_certificate(s3, xi)
    assert c.method == "average" and c.bound_holds
    assert c.max_residual < 1e-12


def test_commutator_check_examples(diag2, pauli, s3, rng):
    r = commutator_defect_check(diag2, random_unit_vector(2, rng))
    assert r.checked == 1 and r.worst_ratio == 0 and r.ok
    r = commutator_defect_check(pauli, [1, 0])
    assert r.eps == 1 and r.ok
    assert r.worst_distance == pytest.approx(2)
    assert 2 <= 4 * math.sqrt(2 * r.eps)
    r = commutator_defect_check(s3, np.ones(3) / math.sqrt(3))
    assert r.eps < 1e-15 and r.worst_ratio == 0 and r.ok


def test_rho_scalar_group():
    w = np.exp(2j * np.pi / 3)
    g = close_group([w * np.eye(2)])
    xi = np.array([0.6, 0.8j])
    c = rho_eigenvector(g, xi)
    assert np.allclose(c.eta, xi, atol=1e-15)
    rho = c.details["rho"]
    for k in range(3):
        assert rho[g.index_of(w**k * np.eye(2))] == pytest.approx(w**k)


def test_rho_trivial(trivial2):
    c = rho_eigenvector(trivial2, [1, 0])
    assert np.allclose(c.eta, [1, 0]) and np.allclose(c.details["rho"], 1)


def test_rho_perfect_group_plus_trivial(rng):
    g = close_group(direct_sum(binary_icosahedral(), trivial_character(2)))
    xi = perturbed(np.array([0, 0, 1]), 1e-3, rng)
    c = rho_eigenvector(g, xi)
    assert c.bound_holds and c.max_residual < 1e-10
    assert abs(abs(c.eta_unit[2]) - 1) < 1e-12
    c = rho_eigenvector(g, np.array([0, 0, 1.0]))
    assert np.linalg.norm(c.eta - [0, 0, 1]) < 1e-10


def test_rho_errors(pauli, s3, rng):
    with pytest.raises(HypothesisViolated):
        rho_eigenvector(pauli, [1, 0])
    xi = perturbed(np.ones(3) / math.sqrt(3), 1e-4, rng)
    with pytest.raises(NoWitness):
        rho_eigenvector(s3, xi)
