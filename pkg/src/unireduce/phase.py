"""Roots of unity and elementary inequalities about phases.

Each function evaluates both sides of an inequality and raises
:class:`~unireduce.errors.BoundViolation` if the proven direction fails, so
the functions double as runtime certificates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BoundViolation,
    EpsTooLarge,
    HypothesisViolated,
    LengthMismatch,
    NotSorted,
    NotUnitModulus,
    OutOfRange,
    PreconditionViolated,
    ProductNotOne,
    SumTooSmall,
)

UNIT_MODULUS_TOL = 1e-8
# slack for comparisons whose two sides are computed in floating point
_SLACK = 1e-12
# how close to a half-step the scaled phase must be to count as the boundary
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class RootOfUnity:
    order: int
    index: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        if not 0 <= self.index < self.order:
            raise ValueError(f"index {self.index} outside [0, {self.order})")

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * self.index / self.order)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if other.order != self.order:
            raise ValueError("roots of different orders")
        return RootOfUnity(self.order, (self.index + other.index) % self.order)


def adjacent_root_distance(n: int) -> float:
    """``d_n = |exp(2 pi i / n) - 1|``, the spacing of the n-th roots of unity."""
    return abs(cmath.exp(2j * math.pi / n) - 1)


@dataclass(frozen=True)
class PhaseApproximation:
    alpha: RootOfUnity
    residual_phase: float
    l1_distance: float = 0.0
    l2_distance: float = 0.0


def nearest_root(z: complex, n: int) -> PhaseApproximation:
    """Write ``z = alpha * exp(i phi)`` with ``alpha**n == 1`` and ``phi`` in (-pi/n, pi/n].

    At ``phi == pi/n`` exactly the lower root wins, which makes the answer
    unique.
    """
    if n < 1:
        raise ValueError("order must be positive")
    z = complex(z)
    if abs(abs(z) - 1) > UNIT_MODULUS_TOL:
        raise NotUnitModulus(f"|z| = {abs(z)!r} is not 1")
    theta = cmath.phase(z)
    scaled = theta * n / (2 * math.pi)
    k = math.ceil(scaled - 0.5 - _TIE_TOL)
    phi = theta - 2 * math.pi * k / n
    alpha = RootOfUnity(n, k % n)
    return PhaseApproximation(alpha, phi, abs(z - alpha.value()), abs(z - alpha.value()))


def arc_chord_bounds(phi: float) -> tuple[float, float, float]:
    """Return ``((2/pi)|phi|, |exp(i phi) - 1|, |phi|)`` and check their order."""
    phi = float(phi)
    if not abs(phi) <= math.pi:
        raise OutOfRange(f"phi = {phi!r} outside [-pi, pi]")
    lower = 2 / math.pi * abs(phi)
    chord = abs(cmath.exp(1j * phi) - 1)
    upper = abs(phi)
    slack = 1e-14 * max(1.0, upper)
    if lower > chord + slack:
        raise BoundViolation("(2/pi)|phi| <= |exp(i phi) - 1|", lower, chord)
    if chord > upper + slack:
        raise BoundViolation("|exp(i phi) - 1| <= |phi|", chord, upper)
    return lower, chord, upper


def phase_sum_bound(phis: Sequence[float], eps: float) -> float:
    """Bound ``sum |phi_j|`` for phases whose exponentials nearly align with 1.

    Requires ``|1 + sum_j exp(i phi_j)| >= (k+1)(1-eps)`` and returns
    ``pi sqrt(k) (k+1) sqrt(eps/2)`` after checking that ``sum |phi_j|``
    lies strictly below it.  The intermediate quadratic estimate
    ``(4/pi^2) sum phi_j^2 <= 2 (k+1)^2 eps`` is checked too.
    """
    phis = np.asarray(phis, dtype=float).reshape(-1)
    k = phis.size
    if not 0 < eps < 1:
        raise HypothesisViolated(f"eps = {eps!r} outside (0, 1)", eps, 1.0)
    if k and np.max(np.abs(phis)) > math.pi:
        raise OutOfRange("phases must lie in [-pi, pi]")
    lhs = abs(1 + np.sum(np.exp(1j * phis)))
    need = (k + 1) * (1 - eps)
    if lhs < need - _SLACK * (k + 1):
        raise HypothesisViolated(
            f"|1 + sum exp(i phi_j)| = {lhs!r} < (k+1)(1-eps) = {need!r}", lhs, need
        )
    square_sum = 4 / math.pi**2 * float(np.sum(phis**2))
    square_bound = (k + 1) ** 2 * 2 * eps
    if square_sum > square_bound * (1 + 1e-12) + 1e-300:
        raise BoundViolation("(4/pi^2) sum phi_j^2 <= 2 (k+1)^2 eps", square_sum, square_bound)
    bound = math.pi * math.sqrt(k) * (k + 1) * math.sqrt(eps / 2)
    total = float(np.sum(np.abs(phis)))
    if k and not total < bound:
        raise BoundViolation("sum |phi_j| < pi sqrt(k) (k+1) sqrt(eps/2)", total, bound)
    return bound


def approx_scalar(g: Sequence[complex], eps: float) -> PhaseApproximation:
    """Snap a nearly constant tuple of unit scalars with product 1 to a root of unity.

    The root is chosen from the first entry (``g[0] = alpha exp(i phi)``)
    and the 1- and 2-norm distances of ``g`` from ``alpha (1, ..., 1)`` are
    checked against ``pi n sqrt(2 n eps)`` and ``pi n sqrt(2 eps)``.
    """
    g = np.asarray(g, dtype=np.complex128).reshape(-1)
    n = g.size
    if n < 1:
        raise LengthMismatch("empty tuple")
    if not eps > 0:
        raise HypothesisViolated(f"eps = {eps!r} must be positive", eps, 0.0)
    limit = 2 / n**3
    if eps >= limit:
        raise EpsTooLarge(f"eps = {eps!r} >= 2/n^3 = {limit!r}", eps, limit)
    if np.max(np.abs(np.abs(g) - 1)) > UNIT_MODULUS_TOL:
        raise NotUnitModulus("entries must have modulus 1")
    prod = complex(np.prod(g))
    if abs(prod - 1) > UNIT_MODULUS_TOL:
        raise ProductNotOne(f"|g_1 ... g_n - 1| = {abs(prod - 1):.3e}")
    total = abs(complex(np.sum(g)))
    need = n * (1 - eps)
    if total < need - _SLACK * n:
        raise SumTooSmall(f"|g_1 + ... + g_n| = {total!r} < n(1-eps) = {need!r}", total, need)

    root = nearest_root(g[0], n)
    diff = np.abs(g - root.alpha.value())
    l1 = float(np.sum(diff))
    l2 = float(np.sqrt(np.sum(diff**2)))
    l1_bound = math.pi * n * math.sqrt(2 * n * eps)
    l2_bound = math.pi * n * math.sqrt(2 * eps)
    if not l1 < l1_bound + _SLACK:
        raise BoundViolation("||g - alpha 1||_1 < pi n sqrt(2 n eps)", l1, l1_bound)
    if not l2 < l2_bound + _SLACK:
        raise BoundViolation("||g - alpha 1||_2 < pi n sqrt(2 eps)", l2, l2_bound)
    return PhaseApproximation(root.alpha, root.residual_phase, l1, l2)


def rearrangement_bound(x: Sequence[float], y: Sequence[float], perm: Sequence[int]) -> tuple[float, float]:
    """Compare ``sum x_i y_perm(i)`` with ``sum x_i y_i`` for descending non-negative tuples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    perm = np.asarray(perm, dtype=int)
    if not (x.shape == y.shape == perm.shape) or x.ndim != 1:
        raise LengthMismatch("x, y and perm must have the same length")
    if sorted(perm.tolist()) != list(range(x.size)):
        raise PreconditionViolated("perm is not a permutation of 0..n-1")
    for name, v in (("x", x), ("y", y)):
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise NotSorted(f"{name} must be non-negative and sorted descending")
    permuted = float(np.dot(x, y[perm]))
    ordered = float(np.dot(x, y))
    if permuted > ordered * (1 + 1e-14) + 1e-300:
        raise BoundViolation("rearrangement inequality", permuted, ordered)
    return permuted, ordered


def obtuse_shrink(x: float, y: float, alpha: float) -> float:
    """``|x + exp(i alpha) y|`` for ``x > y > 0`` and ``alpha`` in [2pi/3, 4pi/3]; never exceeds ``x``."""
    if not x > y > 0:
        raise PreconditionViolated("need x > y > 0")
    if not 2 * math.pi / 3 - 1e-12 <= alpha <= 4 * math.pi / 3 + 1e-12:
        raise PreconditionViolated(f"alpha = {alpha!r} outside [2pi/3, 4pi/3]")
    value = abs(x + cmath.exp(1j * alpha) * y)
    if value > x * (1 + 1e-14):
        raise BoundViolation("|x + exp(i alpha) y| <= x", value, x)
    return value
