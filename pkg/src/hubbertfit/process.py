"""The Hubbert diffusion process.

A nonhomogeneous lognormal diffusion with drift r(t)*x and diffusion
sigma^2*x^2, whose mean function is the Hubbert curve.  Transition laws
are lognormal:

    ln X(t) | X(s)=y  ~  N( ln y + 2*ln((eta+alpha^s)/(eta+alpha^t))
                              + (ln(alpha) - sigma^2/2)*(t-s),
                            sigma^2*(t-s) )

Paths admit an exact solution driven by a standard Wiener process, so
simulation on a grid needs only cumulative Gaussian increments (no SDE
integrator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import alpha_pow, _check_eta_alpha
from .errors import OrderingError, ParameterDomainError
from .likelihood import PanelData

__all__ = [
    "InitialDistribution",
    "ProcessParams",
    "PathGrid",
    "transition_logpdf",
    "mean",
    "conditional_mean",
    "finite_dim_params",
    "simulate_paths",
]

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class InitialDistribution:
    """Lognormal law of X(t0): ln X(t0) ~ N(mu0, sigma0_sq).

    A degenerate start at x0 is the special case (ln x0, 0) and behaves
    identically everywhere.
    """

    mu0: float
    sigma0_sq: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma0_sq < 0.0:
            raise ParameterDomainError(
                f"sigma0_sq must be nonnegative, got {self.sigma0_sq}"
            )

    @classmethod
    def degenerate(cls, x0: float) -> "InitialDistribution":
        if not x0 > 0.0:
            raise ParameterDomainError(f"x0 must be positive, got {x0}")
        return cls(mu0=math.log(x0), sigma0_sq=0.0)

    @classmethod
    def lognormal(cls, mu0: float, sigma0_sq: float) -> "InitialDistribution":
        return cls(mu0=mu0, sigma0_sq=sigma0_sq)

    @property
    def mean(self) -> float:
        return math.exp(self.mu0 + 0.5 * self.sigma0_sq)


@dataclass(frozen=True)
class ProcessParams:
    """Hubbert diffusion parameters (eta, alpha, sigma) plus the initial law.

    sigma = 0 is accepted as an explicit deterministic mode for simulation;
    estimation requires sigma > 0.
    """

    eta: float
    alpha: float
    sigma: float
    init: InitialDistribution
    t0: float = 0.0

    def __post_init__(self) -> None:
        _check_eta_alpha(self.eta, self.alpha)
        if self.sigma < 0.0:
            raise ParameterDomainError(f"sigma must be nonnegative, got {self.sigma}")

    def require_diffusive(self) -> None:
        if not self.sigma > 0.0:
            raise ParameterDomainError("sigma must be strictly positive here")


@dataclass(frozen=True)
class PathGrid:
    """Strictly increasing observation times; times[0] is the initial time t0."""

    times: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise OrderingError("grid needs at least two time points")
        if not np.all(np.diff(times) > 0.0):
            raise OrderingError("grid times must be strictly increasing")
        object.__setattr__(self, "times", times)

    @property
    def t0(self) -> float:
        return float(self.times[0])


def _log_mean_shift(eta: float, alpha: float, s, t) -> np.ndarray:
    """2*ln((eta+alpha^s)/(eta+alpha^t)) without forming the ratio."""
    return 2.0 * (
        np.log(eta + alpha_pow(alpha, s)) - np.log(eta + alpha_pow(alpha, t))
    )


def transition_logpdf(x, t: float, y: float, s: float, p: ProcessParams):
    """Log transition density ln f(x, t | y, s); lognormal in x."""
    p.require_diffusive()
    if not s < t:
        raise OrderingError(f"require s < t, got s={s}, t={t}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or y <= 0.0:
        raise ParameterDomainError("states must be strictly positive")
    dt = t - s
    var = p.sigma**2 * dt
    log_mean = (
        math.log(y)
        + _log_mean_shift(p.eta, p.alpha, s, t)
        + (math.log(p.alpha) - 0.5 * p.sigma**2) * dt
    )
    z = np.log(x) - log_mean
    out = -np.log(x) - 0.5 * (_LOG_2PI + math.log(var)) - z**2 / (2.0 * var)
    return out if out.ndim else float(out)


def mean(t, p: ProcessParams):
    """E[X(t)]: a Hubbert curve through (t0, E[X0]) with t0 = 0."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < p.t0):
        raise OrderingError("t must be >= t0")
    return conditional_mean(t, p.init.mean, p.t0, p.eta, p.alpha)


def conditional_mean(t, y: float, s: float, eta: float, alpha: float):
    """E[X(t) | X(s) = y] = y * ((eta+alpha^s)/(eta+alpha^t))^2 * alpha^(t-s)."""
    _check_eta_alpha(eta, alpha)
    if y <= 0.0:
        raise ParameterDomainError("conditioning value y must be positive")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < s):
        raise OrderingError(f"require t >= s, got t={t}, s={s}")
    log_m = (
        math.log(y)
        + _log_mean_shift(eta, alpha, s, t_arr)
        + (t_arr - s) * math.log(alpha)
    )
    out = np.exp(log_m)
    return out if out.ndim else float(out)


def finite_dim_params(times, p: ProcessParams) -> tuple[np.ndarray, np.ndarray]:
    """Log-scale mean vector and covariance matrix of (X(t1), ..., X(tn)).

    mu_i   = mu0 + 2*ln((eta+alpha^t0)/(eta+alpha^t_i))
                 + (ln(alpha) - sigma^2/2)*(t_i - t0)
    sig_ij = sigma0^2 + sigma^2*(min(t_i, t_j) - t0)
    """
    times = np.asarray(times, dtype=float)
    if times.size and not np.all(np.diff(times) > 0.0):
        raise OrderingError("times must be strictly increasing")
    if np.any(times < p.t0):
        raise OrderingError("all times must be >= t0")
    t0 = p.t0
    mu = (
        p.init.mu0
        + _log_mean_shift(p.eta, p.alpha, t0, times)
        + (math.log(p.alpha) - 0.5 * p.sigma**2) * (times - t0)
    )
    cov = p.init.sigma0_sq + p.sigma**2 * (np.minimum.outer(times, times) - t0)
    return mu, cov


def simulate_paths(
    p: ProcessParams, grid: PathGrid, n_paths: int, seed: int
) -> PanelData:
    """Draw sample paths on the grid using the exact solution.

    X(t_j) = X(t0) * ((eta+alpha^t0)/(eta+alpha^t_j))^2 * alpha^(t_j - t0)
             * exp(sigma*W(t_j - t0) - sigma^2/2*(t_j - t0))

    W is built from independent Gaussian increments generated path-major
    (all increments of path 0, then path 1, ...), so a fixed seed gives a
    reproducible panel.  X(t0) is drawn once per path before the increment
    loop; with sigma = 0 every path equals the deterministic curve.
    """
    if n_paths < 1:
        raise ParameterDomainError(f"n_paths must be >= 1, got {n_paths}")
    if grid.t0 != p.t0:
        raise OrderingError(
            f"grid starts at {grid.t0} but the process t0 is {p.t0}"
        )
    rng = np.random.default_rng(seed)
    times = grid.times
    t0 = grid.t0
    n_steps = times.size - 1

    if p.init.sigma0_sq > 0.0:
        x_start = np.exp(
            p.init.mu0 + math.sqrt(p.init.sigma0_sq) * rng.standard_normal(n_paths)
        )
    else:
        x_start = np.full(n_paths, math.exp(p.init.mu0))

    # Deterministic trend through (t0, 1); scaled per path by its start value.
    log_trend = _log_mean_shift(p.eta, p.alpha, t0, times) + (times - t0) * math.log(
        p.alpha
    )

    if p.sigma > 0.0:
        increments = rng.standard_normal((n_paths, n_steps)) * np.sqrt(np.diff(times))
        w = np.concatenate(
            [np.zeros((n_paths, 1)), np.cumsum(increments, axis=1)], axis=1
        )
        noise = p.sigma * w - 0.5 * p.sigma**2 * (times - t0)
    else:
        noise = np.zeros((n_paths, times.size))

    values = x_start[:, None] * np.exp(log_trend[None, :] + noise)
    return PanelData(
        times=[times.copy() for _ in range(n_paths)],
        values=[values[i] for i in range(n_paths)],
    )
