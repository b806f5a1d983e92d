"""Seeded random inputs: perturbed vectors, conjugators and tuples satisfying the phase hypotheses."""

from __future__ import annotations

import math

import numpy as np

from .fixedpoint import defect
from .group import FiniteUnitaryGroup, conjugate_group
from .numerics import random_unitary


def conjugated(g: FiniteUnitaryGroup, rng: np.random.Generator) -> tuple[FiniteUnitaryGroup, np.ndarray]:
    """``U G U*`` for a Haar-random ``U``; returns the group and ``U``."""
    u = random_unitary(g.dim, rng)
    return conjugate_group(g, u), u


def monomial_conjugator(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random permutation times random diagonal phases; keeps monomial groups monomial."""
    d = np.exp(2j * np.pi * rng.random(n))
    p = np.eye(n)[rng.permutation(n)]
    return p * d[None, :]


def perturbed(zeta: np.ndarray, delta: float, rng: np.random.Generator) -> np.ndarray:
    """``normalize(zeta + delta w)`` with ``w`` a random unit vector."""
    w = rng.standard_normal(zeta.size) + 1j * rng.standard_normal(zeta.size)
    w /= np.linalg.norm(w)
    x = zeta + delta * w
    return x / np.linalg.norm(x)


def below_threshold(g: FiniteUnitaryGroup, zeta: np.ndarray, limit: float, rng: np.random.Generator,
                    delta: float | None = None) -> tuple[np.ndarray, float, float]:
    """Perturb ``zeta`` and shrink the perturbation until the weak defect is below ``limit``.

    ``delta`` starts log-uniform in [1e-8, 1e-2] unless given.  Returns
    ``(xi, eps, delta)``.
    """
    if delta is None:
        delta = 10 ** rng.uniform(-8, -2)
    while True:
        xi = perturbed(zeta, delta, rng)
        eps = defect(g, xi).weak_defect
        if eps < limit:
            return xi, eps, delta
        delta /= 3


def phase_tuple(rng: np.random.Generator, k: int) -> tuple[np.ndarray, float]:
    """Phases with ``|1 + sum exp(i phi_j)| >= (k+1)(1-eps)`` for the returned ``eps`` in (0, 1)."""
    scale = 10 ** rng.uniform(-6, 0)
    while True:
        phis = np.clip(rng.normal(0, scale, k), -math.pi, math.pi)
        measured = 1 - abs(1 + np.sum(np.exp(1j * phis))) / (k + 1)
        if measured < 0.5:
            break
        scale /= 2
    measured = max(measured, 0.0)
    eps = measured + (1 - measured) * rng.uniform(0, 0.5) * rng.random() + 1e-15
    return phis, min(eps, 0.999)


def unit_tuple_near_root(rng: np.random.Generator, n: int) -> tuple[np.ndarray, float]:
    """Unit scalars with product 1 clustered around a random n-th root of unity.

    The returned ``eps`` satisfies ``0 < eps < 2/n^3`` and
    ``|g_1 + ... + g_n| >= n (1 - eps)``.
    """
    limit = 2 / n**3
    alpha = np.exp(2j * np.pi * rng.integers(n) / n)
    scale = 10 ** rng.uniform(-7, 0)
    while True:
        theta = rng.normal(0, scale, n)
        theta -= theta.mean()
        g = alpha * np.exp(1j * theta)
        measured = max(0.0, 1 - abs(np.sum(g)) / n)
        if measured < 0.9 * limit:
            break
        scale /= 2
    eps = measured + (limit - measured) * rng.random() * 0.99
    return g, max(eps, 1e-15)
