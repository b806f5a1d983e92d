from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

METHODS = ("average", "rho", "monomial", "truncate", "oracle")


@dataclass(frozen=True, eq=False)
class EigenvectorCertificate:
    """A constructed common eigenvector together with the numbers that certify it.

    ``eta`` is the vector the construction produces (for ``truncate`` it is
    generally shorter than 1); ``eta_unit`` is its normalization.
    ``distance_sq`` is ``||xi - eta||^2``.  ``bound_value`` is the proven
    upper bound for ``distance_sq`` on this construction path, or ``None``
    when the theory claims no distance bound there.  ``hypothesis_met``
    records whether the quantitative hypothesis behind that bound holds for
    the measured ``eps``.
    """

    method: str
    eta: np.ndarray
    eta_unit: np.ndarray
    characters: np.ndarray
    max_residual: float
    distance_sq: float
    bound_value: Optional[float]
    bound_holds: bool
    eps: float
    hypothesis_met: bool
    details: dict[str, Any] = field(default_factory=dict)

    def residual_ok(self, residual_tol: float) -> bool:
        return self.max_residual <= residual_tol

    @property
    def falsified(self) -> bool:
        """The hypothesis held but the proven bound did not."""
        return self.hypothesis_met and self.bound_value is not None and not self.bound_holds


def eigen_residuals(elements: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rayleigh quotients ``chi_G = <G v, v>`` and residuals ``||G v - chi_G v||`` for unit ``v``."""
    gv = elements @ v
    chi = gv @ np.conj(v)
    resid = np.linalg.norm(gv - chi[:, None] * v[None, :], axis=1)
    return chi, resid


def certify(method: str, group, xi: np.ndarray, eta: np.ndarray, eps: float, bound_value: Optional[float],
            judge: Callable[[float], bool], hypothesis_met: bool, **details) -> EigenvectorCertificate:
    """Measure residuals and distance for ``eta`` and wrap everything up.

    ``judge`` receives ``||xi - eta||^2`` and decides whether the bound holds.
    """
    eta = np.array(eta, dtype=np.complex128)
    eta_unit = eta / np.linalg.norm(eta)
    _, resid = eigen_residuals(group.elements, eta_unit)
    chi, _ = eigen_residuals(group.generators, eta_unit)
    eta.flags.writeable = False
    eta_unit.flags.writeable = False
    chi.flags.writeable = False
    dist_sq = float(np.linalg.norm(np.asarray(xi) - eta) ** 2)
    return EigenvectorCertificate(
        method=method,
        eta=eta,
        eta_unit=eta_unit,
        characters=chi,
        max_residual=float(np.max(resid)),
        distance_sq=dist_sq,
        bound_value=bound_value,
        bound_holds=bool(judge(dist_sq)),
        eps=float(eps),
        hypothesis_met=hypothesis_met,
        details=details,
    )
