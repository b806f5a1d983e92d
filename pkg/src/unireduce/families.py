"""Generators of small finite unitary groups used by the tests, demos and verify suites.

Every builder returns a list of generator matrices; :func:`corpus` closes
them and records a few structural facts known in advance (order,
irreducibility, monomiality) so that the computed structure can be checked
against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .group import FiniteUnitaryGroup, close_group


def _perm(images) -> np.ndarray:
    """Permutation matrix sending ``e_j`` to ``e_{images[j]}``."""
    n = len(images)
    m = np.zeros((n, n), dtype=np.complex128)
    m[list(images), range(n)] = 1
    return m


def root(m: int, k: int = 1) -> complex:
    return complex(np.exp(2j * np.pi * k / m))


def identity_group(n: int):
    return [np.eye(n, dtype=np.complex128)]


def symmetric_group(n: int):
    """Permutation representation of S_n (reducible: it fixes the all-ones vector)."""
    if n == 1:
        return identity_group(1)
    return [_perm([1, 0, *range(2, n)]), _perm([*range(1, n), 0])]


def cyclic_shift(n: int):
    return [_perm([*range(1, n), 0])]


def signed_permutations(n: int):
    """Hyperoctahedral group of order 2^n n!; irreducible for n >= 2."""
    flip = np.eye(n, dtype=np.complex128)
    flip[0, 0] = -1
    return [*symmetric_group(n), flip]


def weighted_shift(n: int, m: int):
    """Cyclic shift together with ``diag(omega_m, 1, ..., 1)``; order ``n m^n``."""
    d = np.eye(n, dtype=np.complex128)
    d[0, 0] = root(m)
    return [cyclic_shift(n)[0], d]


def twisted_shift(n: int, m: int):
    """``omega_m`` times the cyclic shift; transitive monomial and abelian, hence reducible."""
    return [root(m) * cyclic_shift(n)[0]]


def clock_shift(n: int):
    """Clock and shift matrices; irreducible of order n^3."""
    clock = np.diag([root(n, k) for k in range(n)])
    return [cyclic_shift(n)[0], clock]


def cyclic_diagonal(m: int, exponents):
    return [np.diag([root(m, e) for e in exponents])]


def scalar_group(n: int, m: int):
    return [root(m) * np.eye(n)]


def pauli():
    return [np.array([[0, 1], [1, 0]], dtype=np.complex128), np.diag([1, -1]).astype(np.complex128)]


def quaternion_matrix(a: float, b: float, c: float, d: float) -> np.ndarray:
    """``a + bi + cj + dk`` as an SU(2) matrix."""
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]], dtype=np.complex128)


def quaternion_group():
    return [quaternion_matrix(0, 1, 0, 0), quaternion_matrix(0, 0, 1, 0)]


def dihedral(m: int):
    """Symmetries of the regular m-gon acting on R^2; irreducible for m >= 3."""
    t = 2 * math.pi / m
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], dtype=np.complex128)
    return [rot, np.diag([1, -1]).astype(np.complex128)]


def binary_tetrahedral():
    return [quaternion_matrix(0, 1, 0, 0), quaternion_matrix(0.5, 0.5, 0.5, 0.5)]


def binary_icosahedral():
    phi = (1 + math.sqrt(5)) / 2
    return [quaternion_matrix(0.5, 0.5, 0.5, 0.5), quaternion_matrix(phi / 2, 1 / (2 * phi), 0.5, 0)]


def cube_rotations():
    """Rotation group of the cube (isomorphic to S_4) on C^3; irreducible."""
    quarter = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.complex128)
    return [quarter, _perm([1, 2, 0])]


def _rotation_of(q: np.ndarray) -> np.ndarray:
    """The 3x3 rotation ``X -> q X q*`` on traceless Hermitian matrices in the Pauli basis."""
    basis = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    r = np.empty((3, 3))
    for j, s in enumerate(basis):
        image = q @ s @ q.conj().T
        for i, t in enumerate(basis):
            r[i, j] = np.real(np.trace(t @ image)) / 2
    return r.astype(np.complex128)


def icosahedral_rotations():
    """A_5 as the rotation group of the icosahedron on C^3; irreducible."""
    return [_rotation_of(q) for q in binary_icosahedral()]


def direct_sum(*gen_lists):
    """Block-diagonal sum of representations with matched generator lists."""
    k = len(gen_lists[0])
    if any(len(g) != k for g in gen_lists):
        raise ValueError("generator lists must have equal length")
    out = []
    for i in range(k):
        blocks = [np.asarray(g[i], dtype=np.complex128) for g in gen_lists]
        m = np.zeros((sum(b.shape[0] for b in blocks),) * 2, dtype=np.complex128)
        o = 0
        for b in blocks:
            m[o : o + b.shape[0], o : o + b.shape[0]] = b
            o += b.shape[0]
        out.append(m)
    return out


def trivial_character(k: int, dim: int = 1):
    return [np.eye(dim, dtype=np.complex128) for _ in range(k)]


@dataclass(frozen=True)
class Family:
    name: str
    build: Callable[[], list]
    order: int
    irreducible: bool
    monomial: bool
    transitive: bool = False

    def group(self) -> FiniteUnitaryGroup:
        return _closed(self.name)

    @property
    def dim(self) -> int:
        return self.build()[0].shape[0]


_FAMILIES: dict[str, Family] = {}


def _register(*args, **kw):
    f = Family(*args, **kw)
    _FAMILIES[f.name] = f


for _n in (2, 3, 4):
    _register(f"trivial{_n}", lambda n=_n: identity_group(n), 1, False, True)
    _register(f"sym{_n}", lambda n=_n: symmetric_group(n), math.factorial(_n), False, True, True)
    _register(f"shift{_n}", lambda n=_n: cyclic_shift(n), _n, False, True, True)
_register("sym5", lambda: symmetric_group(5), 120, False, True, True)
_register("shift5", lambda: cyclic_shift(5), 5, False, True, True)
_register("shift6", lambda: cyclic_shift(6), 6, False, True, True)
_register("signed2", lambda: signed_permutations(2), 8, True, True, True)
_register("signed3", lambda: signed_permutations(3), 48, True, True, True)
_register("wshift2_3", lambda: weighted_shift(2, 3), 18, True, True, True)
_register("wshift3_3", lambda: weighted_shift(3, 3), 81, True, True, True)
_register("wshift4_2", lambda: weighted_shift(4, 2), 64, True, True, True)
_register("wshift3_2", lambda: weighted_shift(3, 2), 24, True, True, True)
for _n, _m in ((2, 3), (3, 4), (4, 8)):
    _register(f"twisted{_n}_{_m}", lambda n=_n, m=_m: twisted_shift(n, m), math.lcm(_n, _m), False, True, True)
for _n in (2, 3, 4, 5):
    _register(f"clock{_n}", lambda n=_n: clock_shift(n), _n**3, True, True, True)
_register("diag2", lambda: cyclic_diagonal(2, [0, 1]), 2, False, True)
_register("diag3_4", lambda: cyclic_diagonal(4, [0, 1, 3]), 4, False, True)
_register("diag4_6", lambda: cyclic_diagonal(6, [1, 2, 3, 5]), 6, False, True)
_register("scalar2_3", lambda: scalar_group(2, 3), 3, False, True)
_register("scalar3_4", lambda: scalar_group(3, 4), 4, False, True)
_register("pauli", pauli, 8, True, True, True)
_register("q8", quaternion_group, 8, True, True, True)
_register("dihedral3", lambda: dihedral(3), 6, True, False)
_register("dihedral4", lambda: dihedral(4), 8, True, True, True)
_register("dihedral5", lambda: dihedral(5), 10, True, False)
_register("dihedral8", lambda: dihedral(8), 16, True, False)
_register("binary_tetrahedral", binary_tetrahedral, 24, True, False)
_register("binary_icosahedral", binary_icosahedral, 120, True, False)
_register("cube", cube_rotations, 24, True, True, True)
_register("icosahedral", icosahedral_rotations, 60, True, False)
_register("dihedral4_plus_1", lambda: direct_sum(dihedral(4), trivial_character(2)), 8, False, True)
_register("q8_plus_1", lambda: direct_sum(quaternion_group(), trivial_character(2)), 8, False, True)
_register("binary_icosahedral_plus_1", lambda: direct_sum(binary_icosahedral(), trivial_character(2)), 120, False, False)
_register("pauli_plus_pauli", lambda: direct_sum(pauli(), pauli()), 8, False, True)


def families() -> dict[str, Family]:
    return dict(_FAMILIES)


@lru_cache(maxsize=None)
def _closed(name: str) -> FiniteUnitaryGroup:
    return close_group(_FAMILIES[name].build())


def corpus(max_order: int | None = None, max_dim: int | None = None) -> list[Family]:
    """Registered families, optionally filtered by order and dimension."""
    out = []
    for f in _FAMILIES.values():
        if max_order is not None and f.order > max_order:
            continue
        if max_dim is not None and f.dim > max_dim:
            continue
        out.append(f)
    return out
