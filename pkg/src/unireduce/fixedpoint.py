"""Approximate fixed points of a finite unitary group and the averaging constructions.

Conventions: ``<x, y> = sum_i x_i conj(y_i)``.  For a unit vector ``xi`` the
*weak defect* is ``1 - min_G |<G xi, xi>|`` and the *strong defect* is
``max_G ||G xi - xi||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import phase
from .certificate import EigenvectorCertificate, certify
from .errors import (
    BoundViolation,
    DimensionMismatch,
    HomomorphismFailure,
    HypothesisViolated,
    PreconditionViolated,
    VanishingInnerProduct,
    ZeroAverage,
)
from .group import FiniteUnitaryGroup, scalar_commutator_witnesses

VANISHING_TOL = 1e-12
ZERO_AVERAGE_TOL = 1e-10


def reducibility_threshold(n: int) -> float:
    """``1 / (3600 n^11)``, below which a weak approximate fixed point forces a common eigenvector."""
    return 1.0 / (3600.0 * float(n) ** 11)


def rho_threshold(n: int) -> float:
    return 1.0 / (32.0 * n * n)


@dataclass(frozen=True, eq=False)
class DefectReport:
    weak_defect: float
    strong_defect: float
    argmin_element: int
    moduli: np.ndarray


def _check_dims(g: FiniteUnitaryGroup, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if xi.size != g.dim:
        raise DimensionMismatch(f"vector of length {xi.size} for a group of {g.dim}x{g.dim} matrices")
    return xi


def weak_defects(elements: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """``1 - |<G xi, xi>|`` for each element, computed without cancellation.

    With ``z = <G xi, xi>`` and ``r = ||G xi - z xi||`` one has
    ``1 - |z|^2 = r^2`` for unit ``xi``, hence ``1 - |z| = r^2 / (1 + |z|)``;
    this keeps full relative accuracy when the defect is near 1e-16.
    """
    gx = elements @ xi
    # dividing by the computed ||xi||^2 makes elements that fix xi give exactly 0
    nrm2 = float(np.real(xi @ np.conj(xi)))
    z = (gx @ np.conj(xi)) / nrm2
    r2 = np.sum(np.abs(gx - z[:, None] * xi[None, :]) ** 2, axis=1) / nrm2
    r2 = np.clip(r2, 0.0, 1.0)
    return r2 / (1.0 + np.sqrt(1.0 - r2))


def defect(g: FiniteUnitaryGroup, xi) -> DefectReport:
    xi = _check_dims(g, xi)
    eps = weak_defects(g.elements, xi)
    strong = np.linalg.norm(g.elements @ xi - xi[None, :], axis=1)
    worst = int(np.argmax(eps))
    moduli = 1.0 - eps
    moduli.flags.writeable = False
    return DefectReport(float(min(1.0, eps[worst])), float(np.max(strong)), worst, moduli)


@dataclass(frozen=True, eq=False)
class LambdaMap:
    """``values[k] = <G_k xi, xi> / |<G_k xi, xi>|``."""

    values: np.ndarray
    residuals: np.ndarray


def eigen_identity_gap(m: np.ndarray, xi: np.ndarray) -> float:
    """``||G xi - lambda xi||^2 - (2 - 2 |<G xi, xi>|)`` for a single unitary; zero in exact arithmetic."""
    gx = m @ xi
    z = complex(np.vdot(xi, gx))
    lam = z / abs(z)
    lhs = float(np.linalg.norm(gx - lam * xi) ** 2)
    return lhs - (2 - 2 * abs(z))


def lambda_map(g: FiniteUnitaryGroup, xi) -> LambdaMap:
    xi = _check_dims(g, xi)
    gx = g.elements @ xi
    z = gx @ np.conj(xi)
    mod = np.abs(z)
    small = np.flatnonzero(mod <= VANISHING_TOL)
    if small.size:
        raise VanishingInnerProduct(int(small[0]), float(mod[small[0]]))
    lam = z / mod
    resid_sq = np.sum(np.abs(gx - lam[:, None] * xi[None, :]) ** 2, axis=1)
    gap = np.abs(resid_sq - (2 - 2 * mod))
    if np.max(gap) > 1e-10:
        k = int(np.argmax(gap))
        raise BoundViolation("||G xi - lambda_G xi||^2 == 2 - 2|<G xi, xi>|", float(resid_sq[k]), float(2 - 2 * mod[k]))
    lam.flags.writeable = False
    resid = np.sqrt(resid_sq)
    resid.flags.writeable = False
    return LambdaMap(lam, resid)


def average_fixed_point(g: FiniteUnitaryGroup, xi) -> tuple[np.ndarray, float]:
    """Average ``G xi`` over the group; the result is fixed by every element.

    Returns ``(eta, ||eta - xi||)``.  ``eta`` is not normalized.
    """
    xi = _check_dims(g, xi)
    eta = np.mean(g.elements @ xi, axis=0)
    norm = float(np.linalg.norm(eta))
    if norm <= ZERO_AVERAGE_TOL:
        raise ZeroAverage(norm)
    moved = float(np.max(np.linalg.norm(g.elements @ eta - eta[None, :], axis=1)))
    if moved > g.tol.residual_tol:
        raise BoundViolation("max_G ||G eta - eta||", moved, g.tol.residual_tol)
    dist = float(np.linalg.norm(eta - xi))
    strong = defect(g, xi).strong_defect
    if dist > strong + 1e-10:
        raise BoundViolation("||eta - xi|| <= max_G ||G xi - xi||", dist, strong)
    eta.flags.writeable = False
    return eta, dist


def average_certificate(g: FiniteUnitaryGroup, xi) -> EigenvectorCertificate:
    xi = _check_dims(g, xi)
    report = defect(g, xi)
    eta, _ = average_fixed_point(g, xi)
    strong = report.strong_defect
    return certify("average", g, xi, eta, report.weak_defect, strong**2,
                   lambda d: math.sqrt(d) <= strong + 1e-10, True, strong_defect=strong)


@dataclass(frozen=True)
class CommutatorCheck:
    eps: float
    bound: float
    checked: int
    worst_index: int
    worst_ratio: float
    worst_distance: float
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def commutator_defect_check(g: FiniteUnitaryGroup, xi, commutators=None, slack: float = 1e-9) -> CommutatorCheck:
    """Check ``||C xi - xi|| <= 4 sqrt(2 eps)`` on every commutator element ``C``.

    ``commutators`` may pass precomputed commutator indices (they are
    invariant under conjugating the whole group).
    """
    from .group import derived_elements

    xi = _check_dims(g, xi)
    eps = defect(g, xi).weak_defect
    idx = sorted(derived_elements(g) if commutators is None else commutators)
    dist = np.linalg.norm(g.elements[idx] @ xi - xi[None, :], axis=1)
    bound = 4 * math.sqrt(2 * eps)
    scale = math.sqrt(2 * eps)
    if scale > 0:
        ratios = dist / scale
    else:
        ratios = np.where(dist <= slack, 0.0, np.inf)
    k = int(np.argmax(ratios))
    bad = tuple(int(idx[i]) for i in np.flatnonzero(dist > bound + slack))
    return CommutatorCheck(eps, bound, len(idx), int(idx[k]), float(ratios[k]), float(dist[k]), bad)


def _snap_scalar(lam: complex, det: complex, n: int) -> complex:
    """Snap ``lam`` to the coset ``det^(1/n) * Omega_n`` it must lie in."""
    mu = complex(np.exp(1j * np.angle(det) / n))
    root = phase.nearest_root(lam / mu / abs(lam), n)
    return mu * root.alpha.value()


def rho_eigenvector(g: FiniteUnitaryGroup, xi) -> EigenvectorCertificate:
    """Common eigenvector for groups whose elements are scalar multiples of commutators.

    Every element is written ``G = rho(G) [A, B]``; ``rho`` is checked to be a
    homomorphism into the scalars and ``eta`` is the ``rho``-twisted group
    average of ``xi``, which satisfies ``G eta = rho(G) eta``.
    """
    xi = _check_dims(g, xi)
    n = g.dim
    if n < 2:
        raise PreconditionViolated("needs n >= 2")
    report = defect(g, xi)
    eps = report.weak_defect
    limit = rho_threshold(n)
    if not eps < limit:
        raise HypothesisViolated(f"weak defect {eps:.3e} >= 1/(32 n^2) = {limit:.3e}", eps, limit)

    witnesses, scalars = scalar_commutator_witnesses(g)
    dets = np.linalg.det(g.elements)
    rho = np.empty(g.order, dtype=np.complex128)
    for k, (w, lams) in enumerate(zip(witnesses, scalars)):
        if np.max(np.abs(lams - w.scalar)) > 1e-6:
            raise HomomorphismFailure(f"element {k} has witnesses with different scalars")
        rho[k] = _snap_scalar(w.scalar, dets[k], n)
        if abs(rho[k] - w.scalar) > 1e-6:
            raise HomomorphismFailure(f"scalar of element {k} is not in det^(1/n) Omega_n")

    gx = g.elements @ xi
    near = np.linalg.norm(gx - rho[:, None] * xi[None, :], axis=1)
    radius = 4 * math.sqrt(2 * eps)
    if np.max(near) > radius + 1e-9:
        k = int(np.argmax(near))
        raise BoundViolation("||G xi - rho(G) xi|| <= 4 sqrt(2 eps)", float(near[k]), radius)

    mul = g.multiplication_table
    if np.max(np.abs(rho[mul] - rho[:, None] * rho[None, :])) > 1e-8:
        raise HomomorphismFailure("rho(GH) != rho(G) rho(H)")

    eta = np.mean(np.conj(rho)[:, None] * gx, axis=0)
    norm = float(np.linalg.norm(eta))
    if norm <= ZERO_AVERAGE_TOL:
        raise ZeroAverage(norm)
    moved = np.linalg.norm(g.elements @ eta - rho[:, None] * eta[None, :], axis=1)
    if np.max(moved) > g.tol.residual_tol:
        raise BoundViolation("max_G ||G eta - rho(G) eta||", float(np.max(moved)), g.tol.residual_tol)
    return certify("rho", g, xi, eta, eps, radius**2, lambda d: math.sqrt(d) <= radius + 1e-9, True,
                   rho=rho.copy(), witnesses=witnesses)


__all__ = [
    "DefectReport",
    "LambdaMap",
    "CommutatorCheck",
    "defect",
    "weak_defects",
    "lambda_map",
    "eigen_identity_gap",
    "average_fixed_point",
    "average_certificate",
    "commutator_defect_check",
    "rho_eigenvector",
    "reducibility_threshold",
    "rho_threshold",
]
