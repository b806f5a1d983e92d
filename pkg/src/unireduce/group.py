"""Finite groups of unitary matrices.

A :class:`FiniteUnitaryGroup` stores every element explicitly as a stack
``(order, n, n)`` together with the indices of the generators it was built
from.  Elements are compared by Frobenius distance at ``tol.eq_tol``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, DimensionMismatch, NoWitness, NotSquare
from .numerics import DEFAULT_TOL, Tolerance, adjoint, certify_unitary, polar_project

DEFAULT_CAP = 10_000
# sort keys are rounded to this grid so that round-off never reorders elements
_KEY_SCALE = 1e9
# products per chunk when building tables (bounds memory)
_CHUNK = 1 << 16


class MatrixSet:
    """Insertion-ordered set of matrices with tolerance-based membership.

    Each matrix is hashed by a fixed random linear functional, bucketed at a
    width well above ``eq_tol``; membership is decided by an exact Frobenius
    comparison against the entries of the neighbouring buckets.
    """

    def __init__(self, n: int, eq_tol: float):
        self.n = n
        self.eq_tol = eq_tol
        rng = np.random.default_rng(0x5EED)
        probe = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        self._probe = np.conj(probe / np.linalg.norm(probe))
        self._width = max(1e-6, 4 * eq_tol)
        self._buckets: dict[int, list[int]] = {}
        self._mats: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self._mats)

    @property
    def matrices(self) -> list[np.ndarray]:
        return self._mats

    def _keys(self, mats: np.ndarray) -> np.ndarray:
        proj = np.real(np.einsum("...ij,ij->...", mats, self._probe))
        return np.floor(proj / self._width).astype(np.int64)

    def _candidates(self, key: int) -> Iterable[int]:
        for k in (key - 1, key, key + 1):
            yield from self._buckets.get(k, ())

    def _match(self, m: np.ndarray, key: int) -> int | None:
        for idx in self._candidates(key):
            if np.linalg.norm(self._mats[idx] - m) <= self.eq_tol:
                return idx
        return None

    def find(self, m: np.ndarray) -> int | None:
        return self._match(m, int(self._keys(m)))

    def add(self, m: np.ndarray) -> tuple[int, bool]:
        """Insert ``m`` unless an equal matrix is present; return ``(index, inserted)``."""
        key = int(self._keys(m))
        idx = self._match(m, key)
        if idx is not None:
            return idx, False
        self._mats.append(m)
        self._buckets.setdefault(key, []).append(len(self._mats) - 1)
        return len(self._mats) - 1, True

    def find_many(self, mats: np.ndarray) -> np.ndarray:
        """Index of each matrix in ``mats`` (``-1`` when absent)."""
        keys = self._keys(mats)
        stored = np.stack(self._mats)
        first = np.full(len(mats), -1, dtype=np.int64)
        for q, key in enumerate(keys.tolist()):
            for idx in self._candidates(key):
                first[q] = idx
                break
        out = np.full(len(mats), -1, dtype=np.int64)
        has = first >= 0
        if np.any(has):
            dist = np.linalg.norm(stored[first[has]] - mats[has], axis=(-2, -1))
            hit = np.flatnonzero(has)[dist <= self.eq_tol]
            out[hit] = first[hit]
        for q in np.flatnonzero(out < 0).tolist():
            found = self._match(mats[q], int(keys[q]))
            if found is not None:
                out[q] = found
        return out


def canonical_key(m: np.ndarray) -> tuple:
    """Sort key: real part of the trace (descending), then entries lexicographically."""
    tr = -int(round(float(np.real(np.trace(m))) * _KEY_SCALE))
    flat = np.stack([np.real(m).ravel(), np.imag(m).ravel()], axis=1).ravel()
    return (tr, *np.rint(flat * _KEY_SCALE).astype(np.int64).tolist())


@dataclass(frozen=True, eq=False)
class FiniteUnitaryGroup:
    """An explicitly enumerated finite group of unitary ``n x n`` matrices."""

    elements: np.ndarray
    generator_indices: tuple[int, ...]
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        elems = np.array(self.elements, dtype=np.complex128)
        if elems.ndim != 3 or elems.shape[1] != elems.shape[2]:
            raise NotSquare(f"elements must have shape (order, n, n), got {elems.shape}")
        elems.flags.writeable = False
        object.__setattr__(self, "elements", elems)
        gens = tuple(int(i) for i in self.generator_indices)
        if any(not 0 <= i < len(elems) for i in gens):
            raise IndexError("generator index out of range")
        object.__setattr__(self, "generator_indices", gens)

    def __len__(self) -> int:
        return self.elements.shape[0]

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def generators(self) -> np.ndarray:
        if not self.generator_indices:
            return self.elements[[self.identity_index]]
        return self.elements[list(self.generator_indices)]

    @cached_property
    def index(self) -> MatrixSet:
        s = MatrixSet(self.dim, self.tol.eq_tol)
        for m in self.elements:
            s.add(m)
        return s

    def index_of(self, m) -> int | None:
        return self.index.find(np.asarray(m, dtype=np.complex128))

    @cached_property
    def identity_index(self) -> int:
        idx = self.index_of(np.eye(self.dim))
        if idx is None:
            raise ValueError("group does not contain the identity")
        return idx

    @cached_property
    def multiplication_table(self) -> np.ndarray:
        """``table[i, j]`` is the index of ``elements[i] @ elements[j]`` (-1 if not closed)."""
        e = self.elements
        big_n = len(e)
        table = np.empty((big_n, big_n), dtype=np.int64)
        rows = max(1, _CHUNK // big_n)
        for start in range(0, big_n, rows):
            block = e[start : start + rows, None] @ e[None, :]
            found = self.index.find_many(block.reshape(-1, self.dim, self.dim))
            table[start : start + rows] = found.reshape(-1, big_n)
        return table

    @cached_property
    def inverse_indices(self) -> np.ndarray:
        return self.index.find_many(adjoint(self.elements))

    @cached_property
    def commutator_table(self) -> np.ndarray:
        """``table[a, b]`` is the index of ``[A, B] = A B A* B*``."""
        mul = self.multiplication_table
        inv = self.inverse_indices
        if np.any(mul < 0) or np.any(inv < 0):
            raise ValueError("element set is not closed")
        ab = mul
        ba_inv = inv[mul.T]
        return mul[ab, ba_inv]

    def is_closed(self) -> bool:
        """Identity present, closed under products and adjoints."""
        if self.index_of(np.eye(self.dim)) is None:
            return False
        return bool(np.all(self.multiplication_table >= 0) and np.all(self.inverse_indices >= 0))

    def element_order(self, i: int) -> int:
        mul = self.multiplication_table
        k, cur = 1, i
        while cur != self.identity_index:
            cur = int(mul[cur, i])
            k += 1
            if k > self.order:
                raise ValueError("element order exceeds group order; table is inconsistent")
        return k


def _sorted_group(mats: Sequence[np.ndarray], gen_idx: Sequence[int], tol: Tolerance) -> FiniteUnitaryGroup:
    keys = [canonical_key(m) for m in mats]
    order = sorted(range(len(mats)), key=keys.__getitem__)
    where = {old: new for new, old in enumerate(order)}
    elems = np.stack([mats[i] for i in order])
    return FiniteUnitaryGroup(elems, tuple(where[i] for i in gen_idx), tol)


def close_group(generators: Sequence, tol: Tolerance = DEFAULT_TOL, cap: int = DEFAULT_CAP) -> FiniteUnitaryGroup:
    """Enumerate the group generated by ``generators``.

    Breadth-first: every frontier element is multiplied on the right by each
    generator, the product is projected back onto the unitary group and kept
    if new.  The result is sorted canonically so it does not depend on the
    traversal.
    """
    gens = [certify_unitary(g, tol) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    if any(g.shape != (n, n) for g in gens):
        raise DimensionMismatch("generators have different dimensions")

    seen = MatrixSet(n, tol.eq_tol)
    seen.add(np.eye(n, dtype=np.complex128))
    gen_idx = []
    frontier = []
    for g in gens:
        idx, new = seen.add(g)
        gen_idx.append(idx)
        if new:
            frontier.append(idx)
    stack = np.stack(gens)
    while frontier:
        current = np.stack([seen.matrices[i] for i in frontier])
        products = polar_project((current[:, None] @ stack[None, :]).reshape(-1, n, n))
        frontier = []
        for p in products:
            idx, new = seen.add(p)
            if new:
                frontier.append(idx)
                if len(seen) > cap:
                    raise CapExceeded(cap)
    return _sorted_group(seen.matrices, gen_idx, tol)


def group_from_elements(mats, tol: Tolerance = DEFAULT_TOL, generators: Sequence | None = None,
                        sort: bool = True) -> FiniteUnitaryGroup:
    """Build a group from an explicit element list (duplicates are merged).

    ``generators`` are looked up among the elements; when omitted a small
    generating set is chosen greedily in element order.
    """
    mats = np.asarray(mats, dtype=np.complex128)
    n = mats.shape[-1]
    seen = MatrixSet(n, tol.eq_tol)
    for m in mats:
        seen.add(m)
    uniq = seen.matrices
    gen_idx: list[int] = []
    if generators is not None:
        for g in generators:
            idx = seen.find(np.asarray(g, dtype=np.complex128))
            if idx is None:
                raise ValueError("generator is not among the elements")
            gen_idx.append(idx)
    grp = _sorted_group(uniq, gen_idx, tol) if sort else FiniteUnitaryGroup(np.stack(uniq), tuple(gen_idx), tol)
    if generators is None:
        grp = FiniteUnitaryGroup(grp.elements, greedy_generators(grp), tol)
    return grp


def greedy_generators(g: FiniteUnitaryGroup, candidates: Sequence[int] | None = None) -> tuple[int, ...]:
    """Pick generators greedily among ``candidates`` (default: all elements in order)."""
    mul = g.multiplication_table
    if np.any(mul < 0):
        raise ValueError("element set is not closed")
    ident = g.identity_index
    reached = {ident}
    chosen: list[int] = []
    for c in (range(g.order) if candidates is None else candidates):
        if c in reached:
            continue
        chosen.append(c)
        queue = deque(reached)
        while queue:
            x = queue.popleft()
            for s in chosen:
                y = int(mul[x, s])
                if y not in reached:
                    reached.add(y)
                    queue.append(y)
    return tuple(chosen)


def subgroup(g: FiniteUnitaryGroup, indices: Iterable[int]) -> FiniteUnitaryGroup:
    """The subgroup formed by ``indices`` (which must be closed), in the parent's order."""
    idx = sorted(set(int(i) for i in indices))
    sub = FiniteUnitaryGroup(g.elements[idx], (), g.tol)
    return FiniteUnitaryGroup(sub.elements, greedy_generators(sub), g.tol)


def conjugate_group(g: FiniteUnitaryGroup, w: np.ndarray) -> FiniteUnitaryGroup:
    """``W G W*`` elementwise; element order and generator indices are kept."""
    w = np.asarray(w, dtype=np.complex128)
    return FiniteUnitaryGroup(w @ g.elements @ adjoint(w), g.generator_indices, g.tol)


def commutator(a, b) -> np.ndarray:
    """``[A, B] = A B A* B*``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"cannot commute shapes {a.shape} and {b.shape}")
    return a @ b @ adjoint(a) @ adjoint(b)


@dataclass(frozen=True)
class CommutatorWitness:
    """``elements[element] = scalar * [elements[a_index], elements[b_index]]``."""

    a_index: int
    b_index: int
    scalar: complex


def derived_elements(g: FiniteUnitaryGroup) -> frozenset[int]:
    """Indices of the elements that are a single commutator ``[A, B]``."""
    return frozenset(np.unique(g.commutator_table).tolist())


def is_commutator_group(g: FiniteUnitaryGroup) -> bool:
    """True when every element is itself a commutator."""
    return len(derived_elements(g)) == g.order


def _scalar_matches(g: FiniteUnitaryGroup, rows: Sequence[int]):
    """For each element in ``rows`` and each distinct commutator C: is ``G C*`` scalar, and which scalar."""
    table = g.commutator_table.ravel()
    comm_idx, first_flat = np.unique(table, return_index=True)
    comms = g.elements[comm_idx]
    n = g.dim
    prod = g.elements[list(rows)][:, None] @ adjoint(comms)[None, :]
    lam = np.trace(prod, axis1=-2, axis2=-1) / n
    resid = np.linalg.norm(prod - lam[..., None, None] * np.eye(n), axis=(-2, -1))
    ok = (resid <= g.tol.eq_tol) & (np.abs(np.abs(lam) - 1) <= g.tol.eq_tol)
    return ok, lam, first_flat


def scalar_commutator_witnesses(g: FiniteUnitaryGroup, prefer_pure: bool = True):
    """Witness for every element plus all scalars found for it.

    Returns ``(witnesses, scalars)`` where ``scalars[i]`` lists the scalar of
    every distinct commutator that matches element ``i``.  Raises
    :class:`NoWitness` for the first element without a decomposition.
    """
    ok, lam, first_flat = _scalar_matches(g, range(g.order))
    witnesses = []
    scalars = []
    for i in range(g.order):
        hits = np.flatnonzero(ok[i])
        if hits.size == 0:
            raise NoWitness(i)
        chosen = hits
        if prefer_pure:
            pure = hits[np.abs(lam[i, hits] - 1) <= g.tol.eq_tol]
            if pure.size:
                chosen = pure
        best = chosen[np.argmin(first_flat[chosen])]
        a, b = divmod(int(first_flat[best]), g.order)
        witnesses.append(CommutatorWitness(a, b, complex(lam[i, best])))
        scalars.append(lam[i, hits])
    return witnesses, scalars


def find_scalar_commutator(g: FiniteUnitaryGroup, element_index: int, prefer_pure: bool = True,
                           require_scalar_in_group: bool = False) -> CommutatorWitness:
    """Write ``G = lambda [A, B]`` with ``|lambda| = 1``.

    Pairs are scanned in canonical order; with ``prefer_pure`` a witness with
    ``lambda = 1`` wins over one needing a scalar.  With
    ``require_scalar_in_group`` only scalars whose matrix ``lambda I`` is an
    element qualify.
    """
    ok, lam, first_flat = _scalar_matches(g, [element_index])
    ok, lam = ok[0], lam[0]
    if require_scalar_in_group:
        for k in np.flatnonzero(ok):
            if g.index_of(lam[k] * np.eye(g.dim)) is None:
                ok[k] = False
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        raise NoWitness(element_index)
    if prefer_pure:
        pure = hits[np.abs(lam[hits] - 1) <= g.tol.eq_tol]
        if pure.size:
            hits = pure
    best = hits[np.argmin(first_flat[hits])]
    a, b = divmod(int(first_flat[best]), g.order)
    return CommutatorWitness(a, b, complex(lam[best]))


@dataclass(frozen=True, eq=False)
class MonomialStructure:
    """Per element: ``(G x)_i = weights[k, i] * x[perms[k, i]]``."""

    perms: np.ndarray
    weights: np.ndarray

    def reconstruct(self, k: int) -> np.ndarray:
        n = self.perms.shape[1]
        m = np.zeros((n, n), dtype=np.complex128)
        m[np.arange(n), self.perms[k]] = self.weights[k]
        return m


def monomial_structure(g: FiniteUnitaryGroup) -> MonomialStructure | None:
    """Split every element into a permutation and unit weights; ``None`` if not monomial."""
    a = np.abs(g.elements)
    tol = g.tol.eq_tol
    if np.any(np.sum(a > tol, axis=2) != 1):
        return None
    perms = np.argmax(a, axis=2)
    rows = np.arange(g.dim)
    weights = g.elements[np.arange(g.order)[:, None], rows[None, :], perms]
    if np.any(np.abs(np.abs(weights) - 1) > tol):
        return None
    if np.any(np.sort(perms, axis=1) != rows[None, :]):
        return None
    return MonomialStructure(perms, weights)


def orbits(ms: MonomialStructure) -> list[list[int]]:
    """Orbits of the coordinate indices under the permutations, ordered by smallest member."""
    n = ms.perms.shape[1]
    label = [-1] * n
    out: list[list[int]] = []
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = len(out)
        orbit = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in set(ms.perms[:, i].tolist()):
                if label[j] < 0:
                    label[j] = len(out)
                    orbit.append(j)
                    queue.append(j)
        out.append(sorted(orbit))
    return out


def is_transitive(ms: MonomialStructure) -> bool:
    return len(orbits(ms)) == 1


def weight_product_hom(g: FiniteUnitaryGroup, ms: MonomialStructure, element_index: int) -> complex:
    """Product of the non-zero entries, equal to ``det(G) * sign(perm)``."""
    return complex(np.prod(ms.weights[element_index]))


def weight_kernel(g: FiniteUnitaryGroup, ms: MonomialStructure) -> FiniteUnitaryGroup:
    """The subgroup of elements whose weights multiply to 1."""
    values = np.prod(ms.weights, axis=1)
    return subgroup(g, np.flatnonzero(np.abs(values - 1) <= 1e-8))


def permutation_sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def lagrange_consistent(g: FiniteUnitaryGroup) -> bool:
    """Every element order divides the group order."""
    return all(g.order % g.element_order(i) == 0 for i in range(g.order))


def class_sum_norm(g: FiniteUnitaryGroup) -> float:
    """``(1/|G|) sum |tr G|^2``, which equals the commutant dimension."""
    tr = np.trace(g.elements, axis1=1, axis2=2)
    return float(np.sum(np.abs(tr) ** 2) / g.order)
