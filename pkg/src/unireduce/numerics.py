"""Dense complex linear algebra used by every other module.

Matrices and vectors are plain ``complex128`` numpy arrays.  Functions in
this module never mutate their inputs and hand back read-only arrays, so
values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DependentInput, NearSingular, NotSquare, NotUnitary

#: Largest allowed deviation of a constructed unit vector's norm from 1.
UNIT_NORM_TOL = 1e-12
#: Smallest singular value accepted by :func:`polar_project`.
SINGULAR_TOL = 1e-8
#: Gram determinant below which :func:`gram_schmidt` rejects its input.
GRAM_DET_TOL = 1e-10


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by a computation.

    ``eq_tol`` decides when two matrices are the same group element
    (Frobenius distance), ``unitarity_tol`` bounds ``||U*U - I||_F`` and
    ``residual_tol`` is the acceptance level for eigenvector residuals.
    """

    eq_tol: float = 1e-8
    unitarity_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eq_tol", "unitarity_tol", "residual_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.eq_tol < self.unitarity_tol:
            raise ValueError("eq_tol must be at least unitarity_tol")

    def as_dict(self) -> dict:
        return {"eq_tol": self.eq_tol, "unitarity_tol": self.unitarity_tol, "residual_tol": self.residual_tol}


DEFAULT_TOL = Tolerance()


def frozen(a: np.ndarray) -> np.ndarray:
    """Return ``a`` as a read-only array (copying only if it is writeable)."""
    if a.flags.writeable:
        a = a.copy()
        a.flags.writeable = False
    return a


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array (read-only copy)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if a.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    a.flags.writeable = False
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def unitarity_defect(m: np.ndarray) -> float | np.ndarray:
    """``||M*M - I||_F``; broadcasts over leading axes."""
    n = m.shape[-1]
    return np.linalg.norm(adjoint(m) @ m - np.eye(n), axis=(-2, -1))


def certify_unitary(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Check that ``m`` is unitary to within ``tol.unitarity_tol``.

    Returns the matrix as a read-only complex array; raises
    :class:`NotSquare` or :class:`NotUnitary` (carrying the measured
    defect) otherwise.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")
    defect = float(unitarity_defect(a))
    if defect > tol.unitarity_tol:
        raise NotUnitary(defect, tol.unitarity_tol)
    return a


def polar_project(m) -> np.ndarray:
    """Unitary factor of the polar decomposition, i.e. the nearest unitary.

    Accepts a single square matrix or a stack ``(..., n, n)``.  With
    ``M = W S V*`` the result is ``W V*``.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")
    w, s, vh = np.linalg.svd(a)
    smallest = float(np.min(s)) if s.size else 0.0
    if smallest <= SINGULAR_TOL:
        raise NearSingular(smallest)
    out = w @ vh
    out.flags.writeable = False
    return out


def unit_vector(x) -> np.ndarray:
    """Normalize ``x`` to a read-only complex unit vector."""
    v = np.array(x, dtype=np.complex128).reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValueError("vector must be non-empty and finite")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    v = v / norm
    # a second pass removes the last ulp of drift
    v = v / np.linalg.norm(v)
    assert abs(np.linalg.norm(v) - 1) <= UNIT_NORM_TOL
    v.flags.writeable = False
    return v


def inner(x: np.ndarray, y: np.ndarray) -> complex:
    """``<x, y> = sum_i x_i conj(y_i)``, linear in the first argument."""
    return complex(np.vdot(y, x))


def gram_schmidt(basis: Sequence[Iterable[complex]]) -> list[np.ndarray]:
    """Orthonormalize ``basis`` preserving the flag of spans.

    The k-th output vector spans, together with the first k-1 outputs, the
    same subspace as the first k inputs.  Modified Gram-Schmidt with one
    reorthogonalization pass, which keeps pairwise inner products at the
    1e-15 level for well-conditioned input.
    """
    vecs = [np.array(v, dtype=np.complex128).reshape(-1) for v in basis]
    if not vecs:
        return []
    n = vecs[0].size
    if any(v.size != n for v in vecs):
        raise DependentInput("basis vectors have different lengths")
    if len(vecs) > n:
        raise DependentInput(f"{len(vecs)} vectors in C^{n} cannot be independent")
    a = np.stack(vecs, axis=1)
    gram_det = float(np.real(np.linalg.det(adjoint(a) @ a)))
    if not gram_det > GRAM_DET_TOL:
        raise DependentInput(f"Gram determinant {gram_det:.3e} <= {GRAM_DET_TOL:.0e}")

    out: list[np.ndarray] = []
    for v in vecs:
        w = v.copy()
        for _ in range(2):
            for q in out:
                w -= np.vdot(q, w) * q
        norm = np.linalg.norm(w)
        if norm <= 1e-14:
            raise DependentInput("vector is dependent on its predecessors")
        w /= norm
        w.flags.writeable = False
        out.append(w)
    return out


def columns(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Stack vectors as the columns of a matrix."""
    return np.stack([np.asarray(v) for v in vectors], axis=1)


def null_space(a: np.ndarray, threshold: float) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``a``."""
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.complex128)
    _, s, vh = np.linalg.svd(a)
    full = np.zeros(cols)
    full[: s.size] = s
    keep = full <= threshold
    return np.conj(vh[keep]).T


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    return unit_vector(rng.standard_normal(n) + 1j * rng.standard_normal(n))
