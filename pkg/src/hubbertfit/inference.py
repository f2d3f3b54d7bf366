"""End-to-end fitting and asymptotic uncertainty.

The pipeline shifts all times so the panel starts at 0 (which rescales
eta to eta' = alpha^(-first_time) * eta and keeps it well away from the
underflow regime), estimates the initial-distribution parameters in
closed form, builds the bounded search box, and minimizes the likelihood
objective with the hybrid VNS-SA search.

Standard errors come from the Fisher information of the transition
likelihood; errors of parametric functions (peak, peak time, forecast
means) follow by the delta method with analytic gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bounds_mod
from . import likelihood as lik
from . import optimize as opt
from .curve import alpha_pow
from .errors import ConditioningError, OrderingError, ParameterDomainError
from .likelihood import PanelData, SufficientStats
from .process import conditional_mean

from scipy.stats import norm as _norm

__all__ = [
    "FitResult",
    "Forecast",
    "PeakEstimate",
    "fisher_information",
    "asymptotic_cov",
    "delta_error",
    "peak_time_gradient",
    "peak_gradient",
    "conditional_mean_gradient",
    "estimate_peak",
    "forecast",
    "fit",
]

_COND_LIMIT = 1e12


def fisher_information(theta, data) -> np.ndarray:
    """Fisher information of the transition likelihood.

    theta is the (eta, alpha, sigma) triple; the matrix is parametrized
    in (eta, alpha, sigma^2), which is the form whose inverse feeds the
    delta method below.  Built from per-transition sums over the panel's
    (time-shifted) observation times; symmetric by construction.
    """
    eta, alpha, sigma = (float(v) for v in theta)
    if not eta > 0.0 or not 0.0 < alpha < 1.0 or not sigma > 0.0:
        raise ParameterDomainError(f"invalid theta {theta}")
    stats = data if isinstance(data, SufficientStats) else SufficientStats.from_panel(data)

    s_t = stats.u_times[stats.pair_lo]
    t_t = stats.u_times[stats.pair_hi]
    a_s = alpha_pow(alpha, s_t)
    a_t = alpha_pow(alpha, t_t)
    ws = eta + a_s
    wt = eta + a_t
    s_prod = ws * wt
    w = a_t - a_s
    # d/d(alpha) of ln((eta+alpha^s)/(eta+alpha^t)), times s_prod
    v = s_t * a_s / alpha * wt - t_t * a_t / alpha * ws

    c = stats.pair_count
    inv_dt = 1.0 / stats.pair_dt
    w_over_s = w / s_prod
    v_over_s = v / s_prod
    m1 = float(np.sum(c * w_over_s**2 * inv_dt))
    m2 = float(np.sum(c * v_over_s**2 * inv_dt))
    m3 = float(np.sum(c * w_over_s * v_over_s * inv_dt))
    x1 = float(np.sum(c * w_over_s))
    x2 = float(np.sum(c * v_over_s))
    z2 = stats.z2
    n_trans = stats.n_transitions
    sigma_sq = sigma * sigma

    i_ee = 4.0 * m1
    i_ea = 4.0 * m3 + 2.0 * x1 / alpha
    i_aa = 4.0 * m2 + z2 / alpha**2 + 4.0 * x2 / alpha
    i_ev = -x1
    i_av = -x2 - z2 / (2.0 * alpha)
    i_vv = 0.5 * n_trans / sigma_sq + 0.25 * z2
    return (
        np.array([[i_ee, i_ea, i_ev], [i_ea, i_aa, i_av], [i_ev, i_av, i_vv]])
        / sigma_sq
    )


def asymptotic_cov(info: np.ndarray, n_eff: int) -> np.ndarray:
    """inverse(info) / n_eff, with a conditioning guard.

    info is the per-effective-observation information; pass the total
    information divided by n_eff to get the usual total-inverse.
    """
    info = np.asarray(info, dtype=float)
    cond = np.linalg.cond(info)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise ConditioningError(
            f"information matrix is numerically singular (cond ~ {cond:.3e})"
        )
    return np.linalg.inv(info) / n_eff


def delta_error(grad, cov: np.ndarray) -> float:
    """Asymptotic standard error sqrt(grad^T cov grad) of a scalar function."""
    grad = np.asarray(grad, dtype=float)
    cov = np.asarray(cov, dtype=float)
    q = float(grad @ cov @ grad)
    scale = max(1.0, float(np.trace(cov)) * float(grad @ grad))
    if q < -1e-12 * scale:
        raise ConditioningError(f"negative delta-method quadratic form {q}")
    return math.sqrt(max(q, 0.0))


# ---------------------------------------------------------------------------
# Analytic gradients with respect to (eta, alpha, sigma)
# ---------------------------------------------------------------------------


def peak_time_gradient(eta: float, alpha: float) -> np.ndarray:
    """Gradient of t_max = ln(eta)/ln(alpha)."""
    la = math.log(alpha)
    return np.array(
        [1.0 / (eta * la), -math.log(eta) / (alpha * la * la), 0.0]
    )


def peak_gradient(eta: float, alpha: float, y: float, s: float) -> np.ndarray:
    """Gradient of the peak value y*(eta+alpha^s)^2/(4*eta*alpha^s).

    The expression is symmetric in (eta, alpha^s), which gives matching
    signs on the two partials; the sigma component is zero.
    """
    a = alpha_pow(alpha, s)
    d_eta = y * (eta + a) * (eta - a) / (4.0 * eta**2 * a)
    d_a = y * (eta + a) * (a - eta) / (4.0 * eta * a**2)
    return np.array([d_eta, d_a * s * a / alpha, 0.0])


def conditional_mean_gradient(
    eta: float, alpha: float, y: float, s: float, t: float
) -> np.ndarray:
    """Gradient of m(t | y, s) = y*((eta+alpha^s)/(eta+alpha^t))^2*alpha^(t-s)."""
    a_s = alpha_pow(alpha, s)
    a_t = alpha_pow(alpha, t)
    m = conditional_mean(t, y, s, eta, alpha)
    dlog_eta = 2.0 * (1.0 / (eta + a_s) - 1.0 / (eta + a_t))
    dlog_alpha = (
        2.0 * (s * a_s / alpha / (eta + a_s) - t * a_t / alpha / (eta + a_t))
        + (t - s) / alpha
    )
    return np.array([m * dlog_eta, m * dlog_alpha, 0.0])


# ---------------------------------------------------------------------------
# Fit pipeline
# ---------------------------------------------------------------------------


@dataclass
class FitResult:
    """MLE of the Hubbert diffusion with asymptotic errors.

    theta_hat is on the shifted clock (times minus time_shift_k), so its
    eta is the reparametrized eta' = alpha^(-k)*eta.  cov and std_errors
    are in the (eta, alpha, sigma) parametrization; the sigma row/column
    of the information inverse is mapped from sigma^2 by its Jacobian.
    """

    theta_hat: tuple
    mu1_hat: float
    sigma1_sq_hat: float
    objective_value: float
    log_likelihood: float
    fisher: np.ndarray
    cov: np.ndarray
    std_errors: tuple
    time_shift_k: float
    n_obs: int
    d: int
    box: bounds_mod.SolutionBox
    seed: object = None
    algorithm: str = "vns-sa"
    n_restarts: int = 1
    stop_reason: str = ""
    n_evals: int = 0
    warnings: list = field(default_factory=list)

    @property
    def eta_unshifted(self) -> float:
        """eta on the original clock: alpha^k * eta'."""
        eta, alpha, _ = self.theta_hat
        return eta * alpha_pow(alpha, self.time_shift_k)

    @property
    def initial_mean(self) -> float:
        return math.exp(self.mu1_hat + 0.5 * self.sigma1_sq_hat)


@dataclass
class PeakEstimate:
    peak_time: float
    peak_time_se: float
    peak: float
    peak_se: float
    peak_passed: bool


@dataclass
class Forecast:
    times: np.ndarray
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    s: float
    x_s: float


def _cov_eta_alpha_sigma(info: np.ndarray, sigma: float) -> np.ndarray:
    """Map the (eta, alpha, sigma^2) information inverse to (eta, alpha, sigma)."""
    cov_v = np.linalg.inv(info)
    jac = np.diag([1.0, 1.0, 1.0 / (2.0 * sigma)])
    return jac @ cov_v @ jac


def estimate_peak(fit: FitResult, y: float | None = None, s: float | None = None) -> PeakEstimate:
    """Peak time and peak value with delta-method errors.

    Without (y, s) the unconditional version is used: the peak of the
    mean function through the estimated initial mean.  With a
    conditioning point (y, s) on the original clock, the conditional
    version y*(eta+alpha^s')^2/(4*eta*alpha^s') applies, s' = s - k.
    Times are reported on the original clock.
    """
    eta, alpha, _ = fit.theta_hat
    k = fit.time_shift_k
    t_max_shifted = math.log(eta) / math.log(alpha)
    t_grad = peak_time_gradient(eta, alpha)
    t_se = delta_error(t_grad, fit.cov)

    if (y is None) != (s is None):
        raise ParameterDomainError("provide both y and s, or neither")
    if y is None:
        y_eff, s_shifted = fit.initial_mean, 0.0
    else:
        if y <= 0.0:
            raise ParameterDomainError("conditioning value y must be positive")
        y_eff, s_shifted = y, s - k

    a_s = alpha_pow(alpha, s_shifted)
    peak = y_eff * (eta + a_s) ** 2 / (4.0 * eta * a_s)
    p_grad = peak_gradient(eta, alpha, y_eff, s_shifted)
    p_se = delta_error(p_grad, fit.cov)

    # Peak lies after the first observation iff eta' < alpha^0 = 1.
    return PeakEstimate(
        peak_time=t_max_shifted + k,
        peak_time_se=t_se,
        peak=peak,
        peak_se=p_se,
        peak_passed=eta >= 1.0,
    )


def forecast(
    fit: FitResult,
    s: float,
    x_s: float,
    horizon_times,
    level: float = 0.95,
) -> Forecast:
    """Conditional-mean forecast with symmetric normal confidence bands.

    Band width comes from the delta-method error of the conditional mean
    as a function of (eta, alpha); the confidence level defaults to 95%
    and is a free choice, not something the model pins down.
    """
    if not 0.0 < level < 1.0:
        raise ParameterDomainError(f"level must lie in (0, 1), got {level}")
    times = np.atleast_1d(np.asarray(horizon_times, dtype=float))
    if np.any(times <= s):
        raise OrderingError("all horizon times must lie strictly after s")
    if x_s <= 0.0:
        raise ParameterDomainError("x_s must be positive")
    eta, alpha, _ = fit.theta_hat
    k = fit.time_shift_k
    s_shift = s - k
    point = conditional_mean(times - k, x_s, s_shift, eta, alpha)
    z = float(_norm.ppf(0.5 + level / 2.0))
    half = np.array(
        [
            z * delta_error(conditional_mean_gradient(eta, alpha, x_s, s_shift, t), fit.cov)
            for t in times - k
        ]
    )
    point = np.atleast_1d(point)
    return Forecast(
        times=times,
        point=point,
        lower=point - half,
        upper=point + half,
        level=level,
        s=s,
        x_s=x_s,
    )


def fit(
    data: PanelData,
    urr: float | None = None,
    sa_config: opt.SAConfig = opt.SAConfig(),
    vns_config: opt.VNSConfig = opt.VNSConfig(),
    seed=None,
    n_restarts: int = 1,
    algorithm: str = "vns-sa",
    sigma_cap: float = bounds_mod.SIGMA_UPPER_DEFAULT,
) -> FitResult:
    """Full estimation pipeline; deterministic for a fixed seed.

    Times are shifted by k = first observation time, the box is built
    from the shifted panel (with the optional URR), and the objective is
    minimized over (eta, alpha, sigma) by the requested algorithm, best
    of n_restarts.
    """
    k = data.t_first
    shifted = data.shifted(k)
    mu1, sigma1_sq = lik.initial_mle(shifted)
    box = bounds_mod.build_box(shifted, urr=urr, sigma_cap=sigma_cap)
    stats = SufficientStats.from_panel(shifted)

    def objective(theta):
        eta, alpha, sigma = theta
        return lik.objective(stats, eta, alpha, sigma * sigma)

    result = opt.multistart(
        objective,
        box,
        sa_config=sa_config,
        vns_config=vns_config,
        seed=seed,
        n_restarts=n_restarts,
        algorithm=algorithm,
    )
    best = result.best
    eta_hat, alpha_hat, sigma_hat = (float(v) for v in best.theta)

    warnings = []
    info = fisher_information((eta_hat, alpha_hat, sigma_hat), stats)
    n_eff = stats.n_transitions
    try:
        # Unit information and /n_eff cancel into the total-information inverse.
        asymptotic_cov(info / n_eff, n_eff)
        cov = _cov_eta_alpha_sigma(info, sigma_hat)
    except ConditioningError as exc:
        warnings.append(str(exc))
        cov = np.full((3, 3), np.nan)

    ll = lik.log_likelihood(
        stats, mu1, sigma1_sq, eta_hat, alpha_hat, sigma_hat**2
    )
    stop_reason = (
        result.stop_reason if isinstance(result, opt.SAResult) else result.phase1.stop_reason
    )
    return FitResult(
        theta_hat=(eta_hat, alpha_hat, sigma_hat),
        mu1_hat=mu1,
        sigma1_sq_hat=sigma1_sq,
        objective_value=best.value,
        log_likelihood=ll,
        fisher=info,
        cov=cov,
        std_errors=tuple(float(v) for v in np.sqrt(np.diag(cov))),
        time_shift_k=k,
        n_obs=stats.n_obs,
        d=stats.d,
        box=box,
        seed=seed,
        algorithm=algorithm,
        n_restarts=n_restarts,
        stop_reason=stop_reason,
        n_evals=result.n_evals,
        warnings=warnings,
    )
