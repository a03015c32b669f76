"""Shared numerical utilities: entropies, optimization, quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

#: Shared eigenvalue clamp used before entropies and PSD checks.
EIG_CLAMP = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 4000
    tolerance: float = 1e-9
    seed: int = 7

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def von_neumann_entropy(rho: np.ndarray, tol: float = 1e-10) -> float:
    """Entropy -Tr(rho log2 rho) in bits, with tiny negatives clamped."""
    rho = np.asarray(rho, dtype=complex)
    if np.linalg.norm(rho - rho.conj().T) > tol:
        raise ValueError("matrix is not Hermitian")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -tol:
        raise ValueError(f"matrix is not PSD (min eigenvalue {evals.min()})")
    if abs(evals.sum() - 1.0) > tol:
        raise ValueError(f"trace {evals.sum()} deviates from 1")
    evals = np.clip(evals, 0.0, None)
    nz = evals[evals > EIG_CLAMP]
    return float(-(nz * np.log2(nz)).sum())


def _entropy_fast(rho: np.ndarray) -> float:
    """Entropy without precondition checks, for optimizer hot paths."""
    evals = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    nz = evals[evals > EIG_CLAMP]
    return float(-(nz * np.log2(nz)).sum())


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    converged: bool
    restarts_used: int


def nelder_mead_maximize(f, x0, config: OptimizerConfig = OptimizerConfig()) -> OptimizeResult:
    """Multi-start Nelder-Mead maximization; deterministic for a fixed config.

    Restart k perturbs x0 with seeded Gaussian noise of growing scale and
    polishes the running best; the best point across restarts wins.
    """
    x0 = np.asarray(x0, dtype=float)
    rng = np.random.default_rng(config.seed)
    best_x, best_f = x0, f(x0)
    converged = False
    for k in range(config.restarts):
        if k == 0:
            start = x0
        elif k % 2 == 1:
            start = best_x + rng.normal(scale=0.25 * (1 + k // 4), size=x0.shape)
        else:
            start = x0 + rng.normal(scale=0.5 * (1 + k // 4), size=x0.shape)
        res = optimize.minimize(
            lambda x: -f(x),
            start,
            method="Nelder-Mead",
            options={
                "xatol": config.tolerance,
                "fatol": config.tolerance,
                "maxiter": config.max_iters,
                "maxfev": config.max_iters,
            },
        )
        if -res.fun > best_f:
            best_f, best_x = -res.fun, res.x
        converged = converged or bool(res.success)
    return OptimizeResult(best_x, best_f, converged, config.restarts)


def bisect_zero(g, lo: float, hi: float, tol: float = 1e-3) -> float:
    """Smallest point where g drops to <= 0, assuming g(lo) > 0 >= g(hi)."""
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0 >= g_hi):
        raise ValueError(f"invalid bracket: g({lo})={g_lo}, g({hi})={g_hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def softmax(x: np.ndarray) -> np.ndarray:
    z = np.exp(x - np.max(x))
    return z / z.sum()


def sphere_quadrature(f, n_points, seed: int = 0):
    """Average of f(theta, phi) over the uniform sphere.

    An integer n_points runs Monte Carlo and returns (mean, stderr);
    a (n_theta, n_phi) pair runs Gauss-Legendre in cos(theta) times a
    trapezoid rule in phi and returns (value, 0.0).
    """
    if isinstance(n_points, tuple):
        n_th, n_ph = n_points
        nodes, weights = np.polynomial.legendre.leggauss(n_th)
        thetas = np.arccos(nodes)
        phis = np.linspace(0.0, 2 * np.pi, n_ph, endpoint=False)
        vals = np.array([[f(th, ph) for ph in phis] for th in thetas])
        return float((weights @ vals.mean(axis=1)) / 2.0), 0.0
    rng = np.random.default_rng(seed)
    cos_th = rng.uniform(-1.0, 1.0, n_points)
    phis = rng.uniform(0.0, 2 * np.pi, n_points)
    vals = np.array([f(th, ph) for th, ph in zip(np.arccos(cos_th), phis)])
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(n_points))
    return mean, stderr
