"""Invariant subspaces and common eigenvectors.

Three independent routes to a common eigenvector are provided: the
commutant/block route (:func:`reduce_blocks`), a brute-force intersection of
generator eigenspaces (:func:`eigenspace_intersection_oracle`), and the two
constructive procedures that start from an approximate fixed point
(:func:`monomial_eigenvector` and :func:`truncate_eigenvector`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import phase
from .certificate import EigenvectorCertificate, certify
from .errors import (
    AllComponentsBelowEps,
    AllComponentsZero,
    BoundViolation,
    DegenerateSplit,
    DimensionMismatch,
    HomomorphismFailure,
    HypothesisViolated,
    NoCommonEigenvector,
    NotMonomial,
    NotSorted,
    PreconditionViolated,
    SpreadViolation,
    ZeroAverage,
)
from .fixedpoint import defect, reducibility_threshold, weak_defects
from .group import (
    FiniteUnitaryGroup,
    MatrixSet,
    MonomialStructure,
    conjugate_group,
    group_from_elements,
    monomial_structure,
    orbits,
)
from .numerics import adjoint, gram_schmidt, null_space

COMMUTANT_TOL = 1e-6
EIG_CLUSTER_TOL = 1e-6
EIGENSPACE_TOL = 1e-8
ANGLE_TOL = 1e-8
SPLIT_RETRIES = 8
# squared component norms below this are rounding noise, not signal
COMPONENT_FLOOR = 1e-24
# approx_scalar needs a positive eps; exact inputs measure 0
EPS_FLOOR = 1e-12


# ---------------------------------------------------------------- commutant

def _commutant(gens: np.ndarray, threshold: float = COMMUTANT_TOL) -> list[np.ndarray]:
    n = gens.shape[-1]
    eye = np.eye(n)
    # row-major vec: vec(G X - X G) = (G (x) I - I (x) G^T) vec(X)
    ops = [np.kron(s, eye) - np.kron(eye, s.T) for s in gens]
    if not ops:
        ops = [np.zeros((0, n * n))]
    basis = null_space(np.concatenate(ops, axis=0), threshold)
    out = []
    for k in range(basis.shape[1]):
        x = basis[:, k].reshape(n, n)
        x.flags.writeable = False
        out.append(x)
    return out


def commutant_basis(g: FiniteUnitaryGroup) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the matrices commuting with every generator."""
    return _commutant(g.generators)


# ------------------------------------------------------------ block splitting

@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """``Q* G Q`` is block diagonal for every element, blocks listed in ``block_sizes`` order."""

    basis_change: np.ndarray
    block_sizes: tuple[int, ...]
    restricted_groups: tuple[FiniteUnitaryGroup, ...]
    seed: Optional[int] = None

    @property
    def offsets(self) -> list[int]:
        return [0, *np.cumsum(self.block_sizes).tolist()]

    def block_basis(self, i: int) -> np.ndarray:
        o = self.offsets
        return self.basis_change[:, o[i] : o[i + 1]]

    def off_block_mass(self, g: FiniteUnitaryGroup) -> float:
        q = self.basis_change
        conj = adjoint(q) @ g.elements @ q
        mask = np.ones(conj.shape[1:], dtype=bool)
        o = self.offsets
        for a, b in zip(o, o[1:]):
            mask[a:b, a:b] = False
        return float(np.max(np.linalg.norm(conj * mask, axis=(1, 2)))) if g.order else 0.0


def _clusters(values: np.ndarray, tight: float, loose: float) -> list[list[int]] | None:
    """Group sorted real values; ``None`` when a gap is neither clearly small nor clearly large."""
    groups = [[0]]
    for i in range(1, values.size):
        gap = values[i] - values[i - 1]
        if gap <= tight:
            groups[-1].append(i)
        elif gap < loose:
            return None
        else:
            groups.append([i])
    return groups


def _split(basis: np.ndarray, gens: np.ndarray, rng: np.random.Generator, tight: float) -> list[np.ndarray]:
    m = basis.shape[1]
    local = adjoint(basis) @ gens @ basis
    comm = _commutant(local)
    if len(comm) <= 1:
        return [basis]
    for _ in range(SPLIT_RETRIES):
        c = rng.standard_normal(len(comm)) + 1j * rng.standard_normal(len(comm))
        x = np.tensordot(c, np.stack(comm), axes=1)
        h = x + adjoint(x)
        h = h - np.trace(h) / m * np.eye(m)
        norm = np.linalg.norm(h)
        if norm <= 1e-12:
            continue
        vals, vecs = np.linalg.eigh(h / norm)
        groups = _clusters(vals, tight, 100 * tight)
        if groups is None or len(groups) < 2:
            continue
        out = []
        for grp in groups:
            out.extend(_split(basis @ vecs[:, grp], gens, rng, tight))
        return out
    raise DegenerateSplit(f"no clean eigenvalue split of a commutant element after {SPLIT_RETRIES} tries")


def _restrict(g: FiniteUnitaryGroup, q: np.ndarray) -> FiniteUnitaryGroup:
    mats = adjoint(q) @ g.elements @ q
    gens = adjoint(q) @ g.generators @ q
    return group_from_elements(mats, g.tol, generators=list(gens))


def _assemble(g: FiniteUnitaryGroup, blocks: list[np.ndarray], seed: Optional[int]) -> BlockDecomposition:
    blocks = sorted(blocks, key=lambda b: b.shape[1])
    cols = []
    for b in blocks:
        cols.extend(gram_schmidt([b[:, k] for k in range(b.shape[1])]))
    q = np.stack(cols, axis=1)
    q.flags.writeable = False
    bd = BlockDecomposition(q, tuple(b.shape[1] for b in blocks), (), seed)
    mass = bd.off_block_mass(g)
    if mass > g.tol.eq_tol * g.dim:
        raise BoundViolation("off-block mass of Q* G Q", mass, g.tol.eq_tol * g.dim)
    restricted = tuple(_restrict(g, bd.block_basis(i)) for i in range(len(blocks)))
    return BlockDecomposition(q, bd.block_sizes, restricted, seed)


def reduce_blocks(g: FiniteUnitaryGroup, seed: int = 0) -> BlockDecomposition:
    """Split the space into irreducible invariant subspaces.

    A random Hermitian element of the commutant is diagonalized; its
    eigenspaces are invariant and the procedure recurses until each block
    has a one-dimensional commutant.  Blocks are ordered by size.
    """
    rng = np.random.default_rng(seed)
    blocks = _split(np.eye(g.dim, dtype=np.complex128), g.generators, rng, 10 * g.tol.eq_tol)
    return _assemble(g, blocks, seed)


def orbit_decomposition(g: FiniteUnitaryGroup, ms: MonomialStructure) -> BlockDecomposition:
    """Coordinate blocks given by the orbits of a monomial group (in orbit order)."""
    eye = np.eye(g.dim, dtype=np.complex128)
    blocks = [eye[:, orb] for orb in orbits(ms)]
    q = np.concatenate(blocks, axis=1)
    q.flags.writeable = False
    sizes = tuple(b.shape[1] for b in blocks)
    bd = BlockDecomposition(q, sizes, ())
    restricted = tuple(_restrict(g, bd.block_basis(i)) for i in range(len(blocks)))
    return BlockDecomposition(q, sizes, restricted)


# --------------------------------------------------------- component choice

@dataclass(frozen=True, eq=False)
class ComponentSelection:
    index: int
    component_norm_sq: float
    scaled_eps: float
    normalized_component: np.ndarray
    measured_eps: float


def select_component(bd: BlockDecomposition, xi, eps: float) -> ComponentSelection:
    """Pick the block maximizing ``||xi_i||^2 / n_i``; ``xi`` is given in the ``Q`` basis.

    The normalized component is a weak approximate fixed point of the
    restricted group with defect at most ``eps / a_i <= (n / n_i) eps``;
    that is re-measured here.
    """
    y = np.asarray(xi, dtype=np.complex128).reshape(-1)
    n = sum(bd.block_sizes)
    if y.size != n:
        raise DimensionMismatch(f"vector of length {y.size} for blocks summing to {n}")
    o = bd.offsets
    a = np.array([np.linalg.norm(y[s:e]) ** 2 for s, e in zip(o, o[1:])])
    if abs(np.sum(a) - 1) > 1e-10:
        raise PreconditionViolated(f"xi is not a unit vector (sum of component norms {np.sum(a)!r})")
    if not np.any(a > 0):
        raise AllComponentsZero("every component of xi vanishes")
    sizes = np.array(bd.block_sizes, dtype=float)
    i = int(np.argmax(a / sizes))
    ni = bd.block_sizes[i]
    if a[i] < ni / n - 1e-12:
        raise BoundViolation("a_i >= n_i / n", ni / n, float(a[i]))
    comp = y[o[i] : o[i + 1]] / math.sqrt(a[i])
    comp.flags.writeable = False
    scaled = n / ni * eps
    measured = eps
    if bd.restricted_groups:
        measured = float(np.max(weak_defects(bd.restricted_groups[i].elements, comp)))
        sharp = eps / a[i]
        if measured > sharp + 1e-10:
            raise BoundViolation("restricted weak defect <= eps / a_i", measured, sharp)
    return ComponentSelection(i, float(a[i]), scaled, comp, measured)


# ---------------------------------------------------------------- the oracle

def _eigenspaces(s: np.ndarray) -> list[tuple[complex, np.ndarray]]:
    n = s.shape[0]
    vals = np.linalg.eigvals(s)
    centers: list[list[complex]] = []
    for v in vals:
        for c in centers:
            if abs(v - c[0]) <= EIG_CLUSTER_TOL:
                c.append(v)
                break
        else:
            centers.append([v])
    lams = sorted((complex(np.mean(c)) for c in centers), key=lambda z: (round(np.angle(z) % (2 * np.pi), 9), z.real))
    for threshold in (EIGENSPACE_TOL, 100 * EIGENSPACE_TOL, 1e-5):
        spaces = [(lam, null_space(s - lam * np.eye(n), threshold)) for lam in lams]
        if sum(e.shape[1] for _, e in spaces) == n:
            return spaces
    raise DegenerateSplit("eigenspaces of a generator do not span the space")


def _intersect(b: np.ndarray, e: np.ndarray) -> np.ndarray:
    proj_b = e @ (adjoint(e) @ b)
    if np.linalg.norm(proj_b - b) <= ANGLE_TOL * max(1, b.shape[1]):
        return b
    if e.shape[1] == 0 or b.shape[1] == 0:
        return b[:, :0]
    u, _, _ = np.linalg.svd(adjoint(b) @ e)
    cand = b @ u
    sines = np.linalg.norm(cand - e @ (adjoint(e) @ cand), axis=0)
    keep = cand[:, sines <= ANGLE_TOL]
    if keep.shape[1] == 0:
        return keep
    q, _ = np.linalg.qr(keep)
    return q


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.flatnonzero(np.abs(v) > 1e-8)[0])
    v = v * (abs(v[k]) / v[k])
    v = v / np.linalg.norm(v)
    v.flags.writeable = False
    return v


def eigenspace_intersection_oracle(g: FiniteUnitaryGroup) -> list[tuple[np.ndarray, np.ndarray]]:
    """Maximal orthonormal set of common eigenvectors, each with its eigenvalues on the generators.

    Brute force: intersect eigenspaces generator by generator.  An empty
    list means the group has no common eigenvector.
    """
    n = g.dim
    gens = g.generators
    spaces = [np.eye(n, dtype=np.complex128)]
    for s in gens:
        eig = _eigenspaces(s)
        nxt = []
        for b in spaces:
            for _, e in eig:
                c = _intersect(b, e)
                if c.shape[1]:
                    nxt.append(c)
        spaces = nxt
        if not spaces:
            return []
    out = []
    for b in spaces:
        for k in range(b.shape[1]):
            v = _fix_phase(b[:, k])
            chi = (gens @ v) @ np.conj(v)
            chi.flags.writeable = False
            out.append((v, chi))
    return out


def character_blocks(frame: list[tuple[np.ndarray, np.ndarray]], tol: float = 1e-6) -> list[tuple[np.ndarray, np.ndarray]]:
    """Merge common eigenvectors sharing a character into blocks ``(basis columns, character)``."""
    blocks: list[tuple[list[np.ndarray], np.ndarray]] = []
    for v, chi in frame:
        for vecs, c in blocks:
            if np.max(np.abs(c - chi)) <= tol:
                vecs.append(v)
                break
        else:
            blocks.append(([v], chi))
    return [(np.stack(vecs, axis=1), chi) for vecs, chi in blocks]


# ---------------------------------------------------------- monomial route

def monomial_flatten(g: FiniteUnitaryGroup, ms: MonomialStructure, xi) -> tuple[FiniteUnitaryGroup, np.ndarray, np.ndarray]:
    """Conjugate by a diagonal unitary then a permutation so that ``xi`` becomes real, non-negative and descending.

    Returns ``(W G W*, W xi, W)``.
    """
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if xi.size != g.dim:
        raise DimensionMismatch("xi does not match the group dimension")
    mod = np.abs(xi)
    ph = np.ones_like(xi)
    nz = mod > 0
    ph[nz] = np.conj(xi[nz]) / mod[nz]
    order = np.argsort(-mod, kind="stable")
    w = np.zeros((g.dim, g.dim), dtype=np.complex128)
    w[np.arange(g.dim), order] = ph[order]
    w.flags.writeable = False
    flat = (w @ xi).real.copy()
    flat.flags.writeable = False
    back = adjoint(w) @ flat
    if np.linalg.norm(back - xi) > g.tol.eq_tol:
        raise BoundViolation("W* (W xi) == xi", float(np.linalg.norm(back - xi)), g.tol.eq_tol)
    return conjugate_group(g, w), flat, w


def monomial_spread_check(xi_sorted, eps: float) -> float:
    """``max |xi_i - xi_j| = xi_1 - xi_n``, checked against ``(n-1) sqrt(eps)``."""
    x = np.asarray(xi_sorted, dtype=float).reshape(-1)
    if np.any(x < 0) or np.any(np.diff(x) > 0):
        raise NotSorted("xi must be non-negative and sorted descending")
    gap = float(x[0] - x[-1])
    bound = (x.size - 1) * math.sqrt(max(eps, 0.0))
    if gap > bound + 1e-9:
        raise SpreadViolation("max |xi_i - xi_j| <= (n-1) sqrt(eps)", gap, bound)
    return gap


def _homogenized(g: FiniteUnitaryGroup, ms: MonomialStructure):
    """Scalar multiples ``lambda G`` whose weights multiply to 1, deduplicated.

    Returns ``(perms, weights, generator_rows)``; the generator rows pick
    ``lambda_S S`` for every generator ``S`` plus ``omega I``.
    """
    n = g.dim
    omega = np.exp(2j * np.pi * np.arange(n) / n)
    base = np.exp(-1j * np.angle(np.prod(ms.weights, axis=1)) / n)
    seen = MatrixSet(n, g.tol.eq_tol)
    perms, weights = [], []
    rows = np.arange(n)
    first = {}
    for k in range(g.order):
        for j in range(n):
            w = ms.weights[k] * base[k] * omega[j]
            m = np.zeros((n, n), dtype=np.complex128)
            m[rows, ms.perms[k]] = w
            idx, new = seen.add(m)
            if new:
                perms.append(ms.perms[k])
                weights.append(w)
            first.setdefault((k, j), idx)
    gen_ids = list(g.generator_indices) or [g.identity_index]
    gen_rows = [first[(k, 0)] for k in gen_ids]
    gen_rows.append(first[(g.identity_index, 1 % n)] if n > 1 else first[(g.identity_index, 0)])
    return np.array(perms), np.array(weights), gen_rows


def _alpha_index(w: np.ndarray, eps: float) -> int:
    return phase.approx_scalar(w, eps).alpha.index


def _transitive_zeta(g: FiniteUnitaryGroup, ms: MonomialStructure, xi: np.ndarray, eps: float, log: dict) -> np.ndarray:
    n = g.dim
    if n == 1:
        return xi / abs(xi[0])
    gf, flat, w = monomial_flatten(g, ms, xi)
    msf = monomial_structure(gf)
    log["spread"] = monomial_spread_check(flat, eps)
    eta = np.full(n, 1 / math.sqrt(n))
    eps1 = n * math.sqrt(n * eps)
    if not eps1 < 1 / 3:
        raise HypothesisViolated(f"n sqrt(n eps) = {eps1:.3e} is not below 1/3", eps1, 1 / 3)
    d = float(np.linalg.norm(eta - flat))
    if d > eps1 + 1e-9:
        raise BoundViolation("||eta - |xi||| <= n sqrt(n eps)", d, eps1)
    eps2 = 3 * eps1
    eps_eta = float(np.max(weak_defects(gf.elements, eta)))
    if eps_eta > eps2 + 1e-9:
        raise BoundViolation("weak defect of eta <= 3 n sqrt(n eps)", eps_eta, eps2)

    perms, weights, gen_rows = _homogenized(gf, msf)
    eps_t = max(eps_eta, EPS_FLOOR)
    alpha = np.array([_alpha_index(wk, eps_t) for wk in weights])
    for r in gen_rows:
        pw = weights * weights[r][perms]
        prod_alpha = np.array([_alpha_index(x, eps_t) for x in pw])
        if np.any(prod_alpha != (alpha + alpha[r]) % n):
            raise HomomorphismFailure("alpha(K S) != alpha(K) alpha(S) on the homogenized group")
    kernel = weights[alpha == 0]
    zeta = np.mean(kernel, axis=0) / math.sqrt(n)
    norm = float(np.linalg.norm(zeta))
    if norm <= 1e-10:
        raise ZeroAverage(norm)
    eps_prime = math.pi * n * math.sqrt(2 * eps_t)
    moved = float(np.linalg.norm(zeta - eta))
    if moved > eps_prime + 1e-9:
        raise BoundViolation("||zeta - eta|| <= pi n sqrt(2 eps~)", moved, eps_prime)
    log.update(eps1=eps1, eps2=eps2, eps_tilde=eps_t, kernel_order=int(kernel.shape[0]),
               homogenized_order=int(weights.shape[0]))
    return adjoint(w) @ zeta


def _monomial_zeta(g: FiniteUnitaryGroup, xi: np.ndarray, eps: float, log: dict) -> np.ndarray:
    ms = monomial_structure(g)
    if ms is None:
        raise NotMonomial("group is not monomial")
    if len(orbits(ms)) == 1:
        log["path"] = log.get("path", ()) + ("transitive",)
        return _transitive_zeta(g, ms, xi, eps, log)
    bd = orbit_decomposition(g, ms)
    sel = select_component(bd, adjoint(bd.basis_change) @ xi, eps)
    log["path"] = log.get("path", ()) + (f"orbit {sel.index} of {len(bd.block_sizes)}",)
    sub = _monomial_zeta(bd.restricted_groups[sel.index], sel.normalized_component, sel.measured_eps, log)
    return bd.block_basis(sel.index) @ sub


def monomial_eigenvector(g: FiniteUnitaryGroup, xi) -> EigenvectorCertificate:
    """Common eigenvector of a monomial group near an approximate fixed point ``xi``.

    Transitive groups go through flattening, the uniform vector and the
    root-of-unity homomorphism; other groups are split into orbits and the
    heaviest component (relative to its size) is handled recursively.  The
    distance bound ``||xi - zeta|| < 1/n`` is only claimed on the transitive
    path; ``hypothesis_met`` records whether ``eps < 1/(3600 n^11)``.
    """
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    n = g.dim
    if n < 2:
        raise PreconditionViolated("needs n >= 2")
    eps = defect(g, xi).weak_defect
    log: dict = {}
    zeta = _monomial_zeta(g, xi, eps, log)
    met = eps < reducibility_threshold(n)
    if log["path"] == ("transitive",):
        return certify("monomial", g, xi, zeta, eps, 1 / n**2, lambda d: math.sqrt(d) < 1 / n, met, **log)
    return certify("monomial", g, xi, zeta, eps, None, lambda d: True, met, **log)


# ---------------------------------------------------------- truncation route

def truncate_eigenvector(g: FiniteUnitaryGroup, xi) -> EigenvectorCertificate:
    """Keep the character components of ``xi`` whose squared norm is at least ``eps``.

    ``eta`` is the (unnormalized) sum of the kept components; when
    ``eps < 1/(3600 n^11)`` the bound ``||xi - eta||^2 < 3600 n^11 eps`` is
    checked.
    """
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    n = g.dim
    if xi.size != n:
        raise DimensionMismatch("xi does not match the group dimension")
    eps = defect(g, xi).weak_defect
    threshold = reducibility_threshold(n)
    frame = eigenspace_intersection_oracle(g)
    if not frame:
        raise NoCommonEigenvector(eps, threshold)
    blocks = character_blocks(frame)
    parts = [b @ (adjoint(b) @ xi) for b, _ in blocks]
    a = np.array([np.linalg.norm(p) ** 2 for p in parts])
    keep = np.flatnonzero((a >= eps) & (a > COMPONENT_FLOOR))
    if keep.size == 0:
        raise AllComponentsBelowEps(f"all {len(blocks)} character components have a_i < eps = {eps:.3e}")
    eta = np.sum([parts[i] for i in keep], axis=0)
    bound = 3600 * n**11 * eps
    if eps > 0:
        judge = lambda d: d < bound  # noqa: E731
    else:
        judge = lambda d: d <= COMPONENT_FLOOR  # noqa: E731
    return certify("truncate", g, xi, eta, eps, bound, judge, eps < threshold,
                   kept=keep.tolist(), component_norms_sq=a.tolist(), blocks=len(blocks))


__all__ = [
    "BlockDecomposition",
    "ComponentSelection",
    "EigenvectorCertificate",
    "commutant_basis",
    "reduce_blocks",
    "orbit_decomposition",
    "select_component",
    "eigenspace_intersection_oracle",
    "character_blocks",
    "monomial_flatten",
    "monomial_spread_check",
    "monomial_eigenvector",
    "truncate_eigenvector",
]
