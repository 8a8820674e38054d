"""ADMM for the LASSO problem ``min 1/2 ||A x - b||^2 + lam ||x||_1``.

Iteration (scaled dual ``u``, splitting ``x = z``)::

    x <- (A^T A + rho I)^-1 (A^T b + rho (z - u))
    z <- soft_threshold(x + u, lam / rho)
    u <- u + x - z

Stopping uses the usual absolute/relative primal and dual residual tests.
:class:`AdmmLassoSolver` factors ``A^T A + rho I`` once and then solves any
number of right-hand sides; each one stops on its own criterion, so solving
a batch gives the same iterates as solving its columns one at a time (up to
floating-point summation order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ConfigurationError, NumericError


def soft_threshold(v, k):
    """``sign(v) * max(|v| - k, 0)``, elementwise."""
    if np.any(np.asarray(k) < 0):
        raise ConfigurationError("threshold must be non-negative")
    out = np.sign(v) * np.maximum(np.abs(v) - k, 0.0)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class AdmmSettings:
    rho: float = 1.0
    eps_abs: float = 1e-4
    eps_rel: float = 1e-3
    max_iter: int = 500

    def __post_init__(self):
        if not (self.rho > 0 and self.eps_abs > 0 and self.eps_rel > 0):
            raise ConfigurationError("rho, eps_abs and eps_rel must be positive")
        if self.max_iter < 1:
            raise ConfigurationError("max_iter must be at least 1")


@dataclass(frozen=True, eq=False)
class LassoProblem:
    A: np.ndarray
    b: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        if A.ndim != 2 or b.shape != (A.shape[0],):
            raise ConfigurationError(f"inconsistent shapes A{A.shape}, b{b.shape}")
        if not self.lam > 0:
            raise ConfigurationError("lambda must be positive")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class AdmmResult:
    solution: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    objective: float
    converged: bool


@dataclass(frozen=True)
class AdmmBatchResult:
    """Per-problem arrays; row ``k`` of ``solutions`` solves row ``k`` of ``b``."""

    solutions: np.ndarray
    iterations: np.ndarray
    primal_residual: np.ndarray
    dual_residual: np.ndarray
    objective: np.ndarray
    converged: np.ndarray


def lasso_objective(prob: LassoProblem, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    r = prob.A @ x - prob.b
    return 0.5 * float(r @ r) + prob.lam * float(np.abs(x).sum())


class AdmmLassoSolver:
    """Reusable solver for a fixed ``A`` and ``lam``."""

    def __init__(self, A, lam: float = 1.0, settings: AdmmSettings | None = None):
        self.A = np.asarray(A, dtype=np.float64)
        if self.A.ndim != 2:
            raise ConfigurationError("A must be a matrix")
        if not lam > 0:
            raise ConfigurationError("lambda must be positive")
        self.lam = float(lam)
        self.settings = settings or AdmmSettings()
        n = self.A.shape[1]
        gram = self.A.T @ self.A + self.settings.rho * np.eye(n)
        self._factor = cho_factor(gram, lower=True)

    def solve(self, b) -> AdmmBatchResult:
        """Solve for every row of ``b`` (shape ``(k, p)``)."""
        B = np.atleast_2d(np.asarray(b, dtype=np.float64))
        if B.shape[1] != self.A.shape[0]:
            raise ConfigurationError(
                f"right-hand sides have length {B.shape[1]}, A has {self.A.shape[0]} rows"
            )
        st = self.settings
        A, rho, lam = self.A, st.rho, self.lam
        n, k = A.shape[1], B.shape[0]
        with np.errstate(invalid="ignore", over="ignore"):
            Atb = A.T @ B.T
        X = np.zeros((n, k))
        Z = np.zeros((n, k))
        U = np.zeros((n, k))
        iters = np.zeros(k, dtype=np.int64)
        r_norm = np.zeros(k)
        s_norm = np.zeros(k)
        converged = np.zeros(k, dtype=bool)
        active = np.arange(k)
        sqrt_n = np.sqrt(n)

        for it in range(1, st.max_iter + 1):
            z_old = Z[:, active]
            u_old = U[:, active]
            with np.errstate(invalid="ignore", over="ignore"):
                x = cho_solve(
                    self._factor, Atb[:, active] + rho * (z_old - u_old), check_finite=False
                )
                z = soft_threshold(x + u_old, lam / rho)
                u = u_old + x - z
            bad = ~np.all(np.isfinite(x) & np.isfinite(u), axis=0)
            if bad.any():
                raise NumericError(
                    "non-finite iterate", iteration=it, block=int(active[bad][0])
                )
            r = np.linalg.norm(x - z, axis=0)
            s = rho * np.linalg.norm(z - z_old, axis=0)
            eps_pri = sqrt_n * st.eps_abs + st.eps_rel * np.maximum(
                np.linalg.norm(x, axis=0), np.linalg.norm(z, axis=0)
            )
            eps_dual = sqrt_n * st.eps_abs + st.eps_rel * rho * np.linalg.norm(u, axis=0)
            X[:, active], Z[:, active], U[:, active] = x, z, u
            iters[active] = it
            r_norm[active], s_norm[active] = r, s
            done = (r <= eps_pri) & (s <= eps_dual)
            converged[active[done]] = True
            active = active[~done]
            if active.size == 0:
                break

        sol = Z.T.copy()
        resid = sol @ A.T - B
        objective = 0.5 * np.einsum("ij,ij->i", resid, resid) + lam * np.abs(sol).sum(axis=1)
        return AdmmBatchResult(sol, iters, r_norm, s_norm, objective, converged)


def admm_lasso(prob: LassoProblem, settings: AdmmSettings | None = None) -> AdmmResult:
    res = AdmmLassoSolver(prob.A, prob.lam, settings).solve(prob.b[None, :])
    return AdmmResult(
        solution=res.solutions[0],
        iterations=int(res.iterations[0]),
        primal_residual=float(res.primal_residual[0]),
        dual_residual=float(res.dual_residual[0]),
        objective=float(res.objective[0]),
        converged=bool(res.converged[0]),
    )
