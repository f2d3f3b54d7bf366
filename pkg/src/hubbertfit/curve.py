"""Deterministic Hubbert-curve analytics.

The production-rate curve is the derivative of the logistic function
l(t) = k / (eta + alpha^t), normalized so it passes through (t0, x0):

    x(t) = x0 * ((eta + alpha^t0) / (eta + alpha^t))^2 * alpha^(t - t0)

All alpha^t powers are evaluated as exp(t * ln(alpha)); for 0 < alpha < 1
this underflows gracefully to 0.0 at large t instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError

__all__ = [
    "CurveParams",
    "logistic_value",
    "hubbert_value",
    "peak_time",
    "peak_value",
    "inflection_times",
    "urr",
    "shift_parameters",
]

# Visibility threshold for the first inflection point: t_inf1 > t0 iff
# eta < alpha^t0 * (2 - sqrt(3)).
ETA_VISIBILITY_FACTOR = 2.0 - math.sqrt(3.0)


def _check_eta_alpha(eta: float, alpha: float) -> None:
    if not eta > 0.0:
        raise ParameterDomainError(f"eta must be positive, got {eta}")
    if not 0.0 < alpha < 1.0:
        raise ParameterDomainError(f"alpha must lie in (0, 1), got {alpha}")


def alpha_pow(alpha: float, t):
    """alpha^t computed in the log domain. Accepts scalar or array t."""
    return np.exp(np.multiply(t, math.log(alpha)))


@dataclass(frozen=True)
class CurveParams:
    """Parameters of a Hubbert curve.

    eta is dimensionless, alpha is a per-time-unit decay base in (0, 1),
    x0 the production rate at the initial time t0.  The time unit is
    whatever the data uses (years in the oil applications); alpha's
    meaning depends on that unit.
    """

    eta: float
    alpha: float
    x0: float
    t0: float = 0.0

    def __post_init__(self) -> None:
        _check_eta_alpha(self.eta, self.alpha)
        if not self.x0 > 0.0:
            raise ParameterDomainError(f"x0 must be positive, got {self.x0}")

    @property
    def peak_after_start(self) -> bool:
        """True iff the maximum occurs strictly after t0 (eta < alpha^t0)."""
        return self.eta < alpha_pow(self.alpha, self.t0)


def logistic_value(t, k: float, eta: float, alpha: float):
    """Logistic curve k / (eta + alpha^t); strictly increasing in t."""
    _check_eta_alpha(eta, alpha)
    if not k > 0.0:
        raise ParameterDomainError(f"k must be positive, got {k}")
    return k / (eta + alpha_pow(alpha, t))


def hubbert_value(t, p: CurveParams):
    """Production rate x(t); equals x0 exactly at t = t0."""
    a_t0 = alpha_pow(p.alpha, p.t0)
    a_t = alpha_pow(p.alpha, t)
    return p.x0 * ((p.eta + a_t0) / (p.eta + a_t)) ** 2 * np.exp(
        np.multiply(np.subtract(t, p.t0), math.log(p.alpha))
    )


def peak_time(eta: float, alpha: float) -> float:
    """Time of the maximum, ln(eta)/ln(alpha); satisfies alpha^t_max = eta."""
    _check_eta_alpha(eta, alpha)
    return math.log(eta) / math.log(alpha)


def peak_value(p: CurveParams) -> float:
    """Maximum production rate x0*(eta + alpha^t0)^2 / (4*eta*alpha^t0).

    By AM-GM this is >= x0, with equality iff eta = alpha^t0.
    """
    a_t0 = alpha_pow(p.alpha, p.t0)
    return p.x0 * (p.eta + a_t0) ** 2 / (4.0 * p.eta * a_t0)


def inflection_times(eta: float, alpha: float) -> tuple[float, float]:
    """The two inflection points, symmetric about the peak time.

    Returns (t_inf1, t_inf2) with t_inf1 < t_max < t_inf2.  The first one
    is visible (t_inf1 > t0) iff eta < alpha^t0 * (2 - sqrt(3)).
    """
    t_max = peak_time(eta, alpha)
    offset = math.log(2.0 + math.sqrt(3.0)) / math.log(alpha)
    # ln(2 - sqrt(3)) = -ln(2 + sqrt(3)), so the points sit at t_max -+ |offset|
    return (t_max + offset, t_max - offset)


def urr(p: CurveParams) -> float:
    """Area under the curve over all time (ultimate recoverable resources).

    URR = -x0 * (eta + alpha^t0)^2 / (eta * alpha^t0 * ln(alpha)); positive
    because ln(alpha) < 0.
    """
    a_t0 = alpha_pow(p.alpha, p.t0)
    return -p.x0 * (p.eta + a_t0) ** 2 / (p.eta * a_t0 * math.log(p.alpha))


def shift_parameters(eta: float, alpha: float, k: float) -> float:
    """eta of the time-shifted curve t -> t + k, i.e. eta' = eta * alpha^(-k).

    peak_time(eta', alpha) = peak_time(eta, alpha) - k, and the peak value
    is unchanged when t0 is shifted alongside.  Used to keep eta well away
    from zero when times are large calendar values.
    """
    _check_eta_alpha(eta, alpha)
    return eta * math.exp(-k * math.log(alpha))
