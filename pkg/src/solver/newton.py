from __future__ import annotations

import logging
from typing import Callable

import numpy as np
from scipy.optimize import OptimizeResult

logger = logging.getLogger(__name__)


def forward_jacobian(fun: Callable[[np.ndarray], np.ndarray], x: np.ndarray, fx: np.ndarray, step: float) -> np.ndarray:
    jac = np.empty((fx.size, x.size))
    for j in range(x.size):
        xj = x.copy()
        xj[j] += step
        jac[:, j] = (fun(xj) - fx) / step
    return jac


def damped_newton(fun: Callable[[np.ndarray], np.ndarray], x0, tol: float = 1e-10, maxiter: int = 60,
                  step: float = 1e-7, min_damping: float = 1.0 / 64, polish: int = 2) -> OptimizeResult:
    """Damped Gauss–Newton on a residual vector.

    Square, under- and overdetermined systems are all handled through a
    least-squares step (minimum-norm when underdetermined). A step is halved
    until the residual norm decreases; if it still does not decrease at
    ``min_damping`` the iteration stops. Once below ``tol``, up to ``polish``
    further steps are taken while they keep improving the residual.

    Returns a ``scipy.optimize.OptimizeResult`` with ``x``, ``fun``,
    ``success``, ``nit`` and ``residual_norm``.
    """
    x = np.array(x0, dtype=float)
    fx = np.asarray(fun(x), dtype=float)
    norm = float(np.linalg.norm(fx))
    if not np.isfinite(norm):
        return OptimizeResult(x=x, fun=fx, success=False, nit=0, residual_norm=norm,
                              message="non-finite residual at start")
    nit = 0
    extra = polish
    while nit < maxiter:
        if norm < tol:
            if extra <= 0 or norm == 0.0:
                break
            extra -= 1
        nit += 1
        jac = forward_jacobian(fun, x, fx, step)
        delta, *_ = np.linalg.lstsq(jac, -fx, rcond=None)
        damping = 1.0
        accepted = False
        while damping >= min_damping:
            trial = x + damping * delta
            ft = np.asarray(fun(trial), dtype=float)
            nt = float(np.linalg.norm(ft))
            if np.isfinite(nt) and nt < norm:
                accepted = True
                break
            damping *= 0.5
        if not accepted:
            if norm >= tol:
                logger.debug("newton stalled at |F|=%.3e after %d iterations", norm, nit)
            break
        x, fx, norm = trial, ft, nt
    success = norm < tol
    return OptimizeResult(x=x, fun=fx, success=success, nit=nit, residual_norm=norm,
                          message="converged" if success else "no convergence")
