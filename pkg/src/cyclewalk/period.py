"""Periodicity detection for walk operators.

A walk with step operator U is periodic with period T when U^T acts as the
identity.  Two notions are supported:

* strict: U^T = I entrywise (no phase allowance),
* phase-insensitive: U^T = e^{i gamma} I for some common phase gamma.

Both a direct matrix-power search and an eigenvalue-based search are
provided; they must agree and serve as mutual regression oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .walk import unitarity_defect

__all__ = ["PeriodResult", "EigendecompositionError", "find_period_power", "find_period_eigen"]

DEFAULT_T_MAX = 1000
DEFAULT_TOL = 1e-8


class EigendecompositionError(RuntimeError):
    """Eigenvalue computation failed to converge."""


@dataclass(frozen=True)
class PeriodResult:
    """Outcome of a period search up to ``bound`` steps.

    ``period`` is the smallest passing T, or None if no T <= bound passed;
    ``residual`` is the identity distance at the reported T (or the closest
    approach seen when no period was found).
    """

    period: int | None
    residual: float
    bound: int

    @property
    def found(self) -> bool:
        return self.period is not None


def _check_unitary(u: np.ndarray) -> None:
    defect = unitarity_defect(u)
    if defect > 1e-8:
        raise ValueError(f"operator is not unitary (defect {defect:.2e})")


def find_period_power(
    u: np.ndarray,
    t_max: int = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
    phase_insensitive: bool = False,
) -> PeriodResult:
    """Search for the smallest T <= t_max with U^T = I by repeated squaring-free powers.

    In phase-insensitive mode the comparison allows a common phase, fixed
    from the largest-magnitude diagonal entry of U^T.  The residual is the
    Frobenius distance ||U^T - e^{i gamma} I||_F.
    """
    _check_unitary(u)
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    dim = u.shape[0]
    eye = np.eye(dim)
    power = np.eye(dim, dtype=complex)
    best = np.inf
    for t in range(1, t_max + 1):
        power = u @ power
        if phase_insensitive:
            k = int(np.argmax(np.abs(np.diagonal(power))))
            phase = power[k, k] / abs(power[k, k]) if abs(power[k, k]) > 0 else 1.0
        else:
            phase = 1.0
        residual = float(np.linalg.norm(power - phase * eye))
        if residual < best:
            best = residual
        if residual < tol:
            return PeriodResult(period=t, residual=residual, bound=t_max)
    return PeriodResult(period=None, residual=best, bound=t_max)


def find_period_eigen(
    u: np.ndarray,
    t_max: int = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
    phase_insensitive: bool = False,
) -> PeriodResult:
    """Search for the period through the spectrum of U.

    U^T = e^{i gamma} I iff every eigenvalue satisfies lambda_j^T =
    e^{i gamma}.  For each candidate T the common phase is the least-squares
    fit over all eigenvalues (their normalized mean); strict mode forces
    gamma = 0.  The reported residual is max_j |lambda_j^T - e^{i gamma}|.
    """
    _check_unitary(u)
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    try:
        eigenvalues = np.linalg.eigvals(u)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(f"eigenvalue computation failed: {exc}") from exc
    angles = np.angle(eigenvalues)
    best = np.inf
    for t in range(1, t_max + 1):
        powered = np.exp(1j * angles * t)
        if phase_insensitive:
            mean = np.mean(powered)
            phase = mean / abs(mean) if abs(mean) > 1e-12 else 1.0
        else:
            phase = 1.0
        residual = float(np.max(np.abs(powered - phase)))
        if residual < best:
            best = residual
        if residual < tol:
            return PeriodResult(period=t, residual=residual, bound=t_max)
    return PeriodResult(period=None, residual=best, bound=t_max)
