"""Seeded randomized verification suites behind ``unireduce verify``.

Trial ``t`` of a run with seed ``s`` draws everything from
``numpy.random.default_rng([s, t])``, so a trial can be replayed on its own
and the report does not depend on how trials are spread over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import phase
from ..decompose import (
    commutant_basis,
    eigenspace_intersection_oracle,
    monomial_eigenvector,
    reduce_blocks,
    truncate_eigenvector,
)
from ..errors import UnireduceError, VanishingInnerProduct, ZeroAverage
from ..families import Family, corpus, families
from ..fixedpoint import (
    average_fixed_point,
    commutator_defect_check,
    defect,
    eigen_identity_gap,
    reducibility_threshold,
    rho_eigenvector,
    rho_threshold,
)
from ..group import class_sum_norm, conjugate_group, derived_elements
from ..numerics import random_unit_vector, random_unitary
from ..sampling import below_threshold, conjugated, monomial_conjugator, phase_tuple, unit_tuple_near_root
from .io import encode_vector


@dataclass
class Trial:
    index: int
    seed: int
    checks: int = 0
    failures: list = field(default_factory=list)

    def check(self, ok: bool, description: str, measured, bound, **inputs):
        self.checks += 1
        if not ok:
            self.failures.append({
                "trial": self.index,
                "seed": [self.seed, self.index],
                "description": description,
                "measured": _num(measured),
                "bound": _num(bound),
                "input": inputs,
            })

    def error(self, description: str, exc: Exception, **inputs):
        self.checks += 1
        self.failures.append({
            "trial": self.index,
            "seed": [self.seed, self.index],
            "description": f"{description}: {type(exc).__name__}: {exc}",
            "measured": None,
            "bound": None,
            "input": inputs,
        })


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _pick(rng: np.random.Generator, pool: list[Family]) -> Family:
    return pool[int(rng.integers(len(pool)))]


# ------------------------------------------------------------------ lemmas

def lemmas_trial(t: Trial, rng: np.random.Generator):
    for phi in rng.uniform(-math.pi, math.pi, 10):
        lower, chord, upper = (2 / math.pi * abs(phi), abs(np.exp(1j * phi) - 1), abs(phi))
        t.check(lower <= chord + 1e-14 and chord <= upper + 1e-14, "(2/pi)|phi| <= |e^{i phi} - 1| <= |phi|",
                max(lower - chord, chord - upper), 1e-14, phi=float(phi))

    k = int(rng.integers(1, 17))
    phis, eps = phase_tuple(rng, k)
    try:
        bound = phase.phase_sum_bound(phis, eps)
        t.check(float(np.sum(np.abs(phis))) < bound, "sum |phi_j| < pi sqrt(k)(k+1) sqrt(eps/2)",
                float(np.sum(np.abs(phis))), bound, eps=eps, phis=phis.tolist())
    except UnireduceError as e:
        t.error("phase_sum_bound", e, eps=eps, phis=phis.tolist())

    n = int(rng.integers(2, 9))
    g, eps = unit_tuple_near_root(rng, n)
    try:
        approx = phase.approx_scalar(g, eps)
        t.check(approx.l1_distance < math.pi * n * math.sqrt(2 * n * eps) + 1e-12, "||g - alpha 1||_1 bound",
                approx.l1_distance, math.pi * n * math.sqrt(2 * n * eps), eps=eps, g=encode_vector(g))
        t.check(approx.l2_distance < math.pi * n * math.sqrt(2 * eps) + 1e-12, "||g - alpha 1||_2 bound",
                approx.l2_distance, math.pi * n * math.sqrt(2 * eps), eps=eps, g=encode_vector(g))
    except UnireduceError as e:
        t.error("approx_scalar", e, eps=eps, g=encode_vector(g))

    m = int(rng.integers(1, 9))
    x = np.sort(rng.random(m))[::-1]
    y = np.sort(rng.random(m))[::-1]
    perm = rng.permutation(m)
    permuted, ordered = float(np.dot(x, y[perm])), float(np.dot(x, y))
    t.check(permuted <= ordered * (1 + 1e-14), "rearrangement inequality", permuted, ordered,
            x=x.tolist(), y=y.tolist(), perm=perm.tolist())

    yv, xv = sorted(rng.random(2) + 1e-3)
    if xv > yv:
        alpha = rng.uniform(2 * math.pi / 3, 4 * math.pi / 3)
        value = abs(xv + np.exp(1j * alpha) * yv)
        t.check(value <= xv * (1 + 1e-14), "|x + e^{i alpha} y| <= x", value, xv, x=xv, y=yv, alpha=alpha)

    z = np.exp(1j * rng.uniform(-math.pi, math.pi))
    n = int(rng.integers(1, 13))
    r = phase.nearest_root(z, n)
    t.check(-math.pi / n - 1e-12 < r.residual_phase <= math.pi / n + 1e-12, "nearest_root residual in (-pi/n, pi/n]",
            abs(r.residual_phase), math.pi / n, z=[z.real, z.imag], n=n)


# ------------------------------------------------------------------ bounds

def bounds_trial(t: Trial, rng: np.random.Generator):
    fam = _pick(rng, corpus(max_order=200))
    g, _ = conjugated(fam.group(), rng)
    frame = eigenspace_intersection_oracle(g)
    if frame and rng.random() < 0.5:
        zeta = frame[int(rng.integers(len(frame)))][0]
        xi, _, _ = below_threshold(g, zeta, 10 ** rng.uniform(-12, -1), rng)
    else:
        xi = random_unit_vector(g.dim, rng)
    info = {"family": fam.name, "xi": encode_vector(xi)}

    for m in (g.elements[int(rng.integers(g.order))], random_unitary(g.dim, rng)):
        gap = abs(eigen_identity_gap(m, xi))
        t.check(gap <= 1e-12, "||G xi - lambda xi||^2 == 2 - 2|<G xi, xi>|", gap, 1e-12, **info)

    commutators = derived_elements(fam.group())
    rep = commutator_defect_check(g, xi, commutators)
    t.check(rep.ok, "||C xi - xi|| <= 4 sqrt(2 eps) on commutators", rep.worst_distance, rep.bound, **info)

    report = defect(g, xi)
    try:
        eta, dist = average_fixed_point(g, xi)
        moved = float(np.max(np.linalg.norm(g.elements @ eta - eta[None, :], axis=1)))
        t.check(moved <= 1e-9, "max ||G eta - eta||", moved, 1e-9, **info)
        t.check(dist <= report.strong_defect + 1e-12, "||eta - xi|| <= strong defect", dist, report.strong_defect, **info)
    except ZeroAverage:
        pass
    except UnireduceError as e:
        t.error("average_fixed_point", e, **info)

    if fam.name in _RHO_FAMILIES and g.dim >= 2 and report.weak_defect < rho_threshold(g.dim):
        try:
            cert = rho_eigenvector(g, xi)
            t.check(cert.max_residual <= 1e-8, "rho eigenvector residual", cert.max_residual, 1e-8, **info)
            t.check(cert.bound_holds, "||eta - xi|| <= 4 sqrt(2 eps)", math.sqrt(cert.distance_sq),
                    math.sqrt(cert.bound_value), **info)
        except UnireduceError as e:
            t.error("rho_eigenvector", e, **info)


# every element is a scalar times a commutator
_RHO_FAMILIES = {"scalar2_3", "scalar3_4", "binary_icosahedral_plus_1", "icosahedral", "trivial2", "trivial3", "trivial4"}


# ---------------------------------------------------------------- pipeline

def _transitive_reducible() -> list[Family]:
    return [f for f in families().values() if f.transitive and not f.irreducible and 2 <= f.dim <= 4]


def _reducible(max_dim: int = 4) -> list[Family]:
    return [f for f in families().values() if not f.irreducible and f.dim <= max_dim]


def monomial_trial(t: Trial, rng: np.random.Generator):
    fam = _pick(rng, _transitive_reducible())
    g = conjugate_group(fam.group(), monomial_conjugator(fam.dim, rng))
    n = g.dim
    frame = eigenspace_intersection_oracle(g)
    zeta = frame[int(rng.integers(len(frame)))][0]
    xi, eps, _ = below_threshold(g, zeta, reducibility_threshold(n), rng)
    info = {"family": fam.name, "xi": encode_vector(xi), "eps": eps}
    try:
        cert = monomial_eigenvector(g, xi)
    except UnireduceError as e:
        t.error("monomial_eigenvector", e, **info)
        return
    t.check(cert.max_residual <= 1e-8, "monomial eigenvector residual", cert.max_residual, 1e-8, **info)
    t.check(math.sqrt(cert.distance_sq) < 1 / n, "||xi - zeta|| < 1/n", math.sqrt(cert.distance_sq), 1 / n, **info)


def truncate_trial(t: Trial, rng: np.random.Generator):
    pool = [f for f in _reducible() if f.name not in {"pauli_plus_pauli"}]
    fam = _pick(rng, pool)
    g, _ = conjugated(fam.group(), rng)
    n = g.dim
    frame = eigenspace_intersection_oracle(g)
    zeta = frame[int(rng.integers(len(frame)))][0]
    xi, eps, _ = below_threshold(g, zeta, reducibility_threshold(n), rng)
    info = {"family": fam.name, "xi": encode_vector(xi), "eps": eps}
    try:
        cert = truncate_eigenvector(g, xi)
    except UnireduceError as e:
        t.error("truncate_eigenvector", e, **info)
        return
    t.check(cert.max_residual <= 1e-8, "truncate eigenvector residual", cert.max_residual, 1e-8, **info)
    t.check(cert.bound_holds, "||xi - eta||^2 < 3600 n^11 eps", cert.distance_sq, cert.bound_value, **info)


def pipeline_trial(t: Trial, rng: np.random.Generator):
    if t.index % 2 == 0:
        monomial_trial(t, rng)
    else:
        truncate_trial(t, rng)


# ------------------------------------------------------------------ oracle

def oracle_trial(t: Trial, rng: np.random.Generator, samples: int = 200):
    fam = _pick(rng, corpus(max_order=48, max_dim=6))
    g, _ = conjugated(fam.group(), rng)
    info = {"family": fam.name}
    dim_comm = len(commutant_basis(g))
    expected = class_sum_norm(g)
    t.check(abs(dim_comm - expected) < 1e-6, "commutant dimension == (1/|G|) sum |tr G|^2", dim_comm, expected, **info)
    try:
        bd = reduce_blocks(g, seed=int(rng.integers(2**31)))
    except UnireduceError as e:
        t.error("reduce_blocks", e, **info)
        return
    t.check((dim_comm == 1) == (len(bd.block_sizes) == 1), "irreducible iff one block", len(bd.block_sizes), dim_comm, **info)
    t.check(fam.irreducible == (dim_comm == 1), "irreducibility matches the family", dim_comm, 1, **info)
    frame = eigenspace_intersection_oracle(g)
    t.check(bool(frame) == (1 in bd.block_sizes), "common eigenvector iff a block of size 1",
            len(frame), bd.block_sizes.count(1), **info)
    ones = bd.block_sizes.count(1)
    t.check(len(frame) == ones, "oracle frame size == number of 1x1 blocks", len(frame), ones, **info)
    if dim_comm == 1:
        xs = rng.standard_normal((samples, g.dim)) + 1j * rng.standard_normal((samples, g.dim))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        worst = min(defect(g, x).weak_defect for x in xs)
        limit = reducibility_threshold(g.dim)
        t.check(worst > limit, "irreducible group: weak defect above 1/(3600 n^11)", worst, limit, **info)


SUITES: dict[str, Callable[[Trial, np.random.Generator], None]] = {
    "lemmas": lemmas_trial,
    "bounds": bounds_trial,
    "pipeline": pipeline_trial,
    "oracle": oracle_trial,
}


def _run_one(suite: str, seed: int, index: int) -> Trial:
    t = Trial(index, seed)
    rng = np.random.default_rng([seed, index])
    try:
        SUITES[suite](t, rng)
    except Exception as e:  # a crash is a failure with reproduction data, not an abort
        t.error("unexpected error", e)
    return t


def run_suite(suite: str, seed: int, trials: int, threads: int = 1) -> dict:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if threads <= 1:
        results = [_run_one(suite, seed, i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: _run_one(suite, seed, i), range(trials)))
    failures = [f for r in results for f in r.failures]
    return {
        "suite": suite,
        "seed": seed,
        "trials": trials,
        "checks": sum(r.checks for r in results),
        "failures": failures,
    }
