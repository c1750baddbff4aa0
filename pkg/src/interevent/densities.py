"""Waiting-time density, survival probability, mean time, and phase label.

For a weight density ``rho(eps)`` the unconditional waiting-time density is

    psi(t) = int rho(eps) * exp(-t / tau(eps)) / tau(eps) deps,

with ``tau(eps) = tau0 * exp(beta * eps)``.  Delta, Uniform and Laplace
weights integrate in closed form; the stretched-exponential weight is
evaluated by adaptive quadrature of the mixing integral.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as _special

from .core import (
    AsymptoticRangeWarning,
    Delta,
    Laplace,
    ModelDomainError,
    ModelParams,
    NoFiniteMeanError,
    StretchedExp,
    Uniform,
    UnsupportedModelError,
    _log_peak_quad,
    scaled_lower_incomplete_gamma,
    scaled_upper_incomplete_gamma,
)

__all__ = [
    "Phase",
    "PhaseLabel",
    "tau_of_epsilon",
    "ptd",
    "ptd_tail",
    "sojourn",
    "characteristic_time",
    "phase",
]


class Phase(enum.Enum):
    HIGH_TEMPERATURE = "HighTemperature"
    CRITICAL = "Critical"
    LOW_TEMPERATURE = "LowTemperature"


@dataclass(frozen=True)
class PhaseLabel:
    """Finite-mean classification, with the tail exponent where a power law exists."""

    kind: Phase
    tail_exponent: float | None = None


def tau_of_epsilon(eps, params: ModelParams):
    """Trapping time ``tau0 * exp(beta * eps)`` at depth ``eps``."""
    e = np.asarray(eps, dtype=float)
    out = params.tau0 * np.exp(params.beta * e)
    return float(out) if np.isscalar(eps) or e.ndim == 0 else out


def _map_times(fn, t):
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ModelDomainError("t must be finite and nonnegative")
    if arr.ndim == 0:
        return float(fn(float(arr)))
    return np.array([fn(float(x)) for x in arr.ravel()]).reshape(arr.shape)


def _stretched_norm(alpha: float) -> float:
    # total weight mass: 2 sigma Gamma(1 + 1/alpha), sigma factored out by standardizing
    return 2.0 * math.exp(_special.gammaln(1.0 + 1.0 / alpha))


def _stretched_log_weight(x: float, alpha: float) -> float:
    return -abs(x) ** alpha


def ptd(t, params: ModelParams, rtol: float = 1e-8):
    """Waiting-time density ``psi(t)``.

    Accepts a scalar or array of times ``t >= 0``.  The value at t = 0 is the
    exact limit; it is ``inf`` where the density diverges at the origin
    (Laplace weight with beta*sigma >= 1, stretched weight with alpha <= 1
    in its divergent range).
    """
    w = params.weight
    tau0, beta = params.tau0, params.beta

    if isinstance(w, Delta):
        tau_mu = tau0 * math.exp(beta * w.mu)

        def kernel(x: float) -> float:
            return math.exp(-x / tau_mu) / tau_mu

        return _map_times(kernel, t)

    if isinstance(w, Uniform):
        db = beta * w.half_width
        tau_plus = tau0 * math.exp(db)
        tau_minus = tau0 * math.exp(-db)
        rate_gap = 1.0 / tau_minus - 1.0 / tau_plus

        def kernel(x: float) -> float:
            u = x * rate_gap
            if u < 1e-8:
                # two-term series of -expm1(-u)/x; avoids 0/0 at the origin
                return math.exp(-x / tau_plus) * rate_gap * (1.0 - 0.5 * u) / (2.0 * db)
            return math.exp(-x / tau_plus) * (-math.expm1(-u)) / (2.0 * db * x)

        return _map_times(kernel, t)

    if isinstance(w, Laplace):
        sb = beta * w.sigma
        a_low = 1.0 + 1.0 / sb
        a_up = 1.0 - 1.0 / sb

        def kernel(x: float) -> float:
            if x == 0.0:
                if sb < 1.0:
                    return 1.0 / (tau0 * (1.0 - sb * sb))
                return math.inf
            z = x / tau0
            val = scaled_lower_incomplete_gamma(a_low, z)
            val += scaled_upper_incomplete_gamma(a_up, z)
            return val / (2.0 * sb * tau0)

        return _map_times(kernel, t)

    if isinstance(w, StretchedExp):
        alpha = w.alpha
        bs = beta * w.sigma
        scale = tau0 * math.exp(beta * w.mu)
        log_pref = -math.log(_stretched_norm(alpha)) - math.log(scale)

        def kernel(x: float) -> float:
            c = x / scale
            if c == 0.0:
                if alpha < 1.0 or (alpha == 1.0 and bs >= 1.0):
                    return math.inf
                seed = -((bs / alpha) ** (1.0 / (alpha - 1.0))) if alpha > 1.0 else 0.0
            else:
                seed = max(0.0, math.log(c) / bs)

            def logf(y: float) -> float:
                u = -bs * y
                tail = 0.0 if c == 0.0 else (math.inf if u > 700.0 else c * math.exp(u))
                if math.isinf(tail):
                    return -math.inf
                return _stretched_log_weight(y, alpha) - bs * y - tail

            return math.exp(_log_peak_quad(logf, seed, rtol=rtol) + log_pref)

        return _map_times(kernel, t)

    raise UnsupportedModelError(f"no density for weight {type(w).__name__}")


def ptd_tail(t, params: ModelParams):
    """Power-law tail ``(Gamma(1 + 1/(sigma*beta)) / (2 sigma beta tau0)) * (tau0/t)**(1 + 1/(sigma*beta))``.

    Laplace weight only.  Valid deep in the tail; evaluating at t < 10*tau0
    raises :class:`AsymptoticRangeWarning` but still returns the formula.
    """
    w = params.weight
    if not isinstance(w, Laplace):
        raise UnsupportedModelError("the power-law tail form exists only for the Laplace weight")
    sb = params.beta * w.sigma
    tau0 = params.tau0
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise ModelDomainError("tail evaluation needs t > 0")
    if np.any(arr < 10.0 * tau0):
        warnings.warn(
            "tail form evaluated at t < 10*tau0; the asymptote may not have set in",
            AsymptoticRangeWarning,
            stacklevel=2,
        )
    delta = 1.0 + 1.0 / sb
    pref = math.exp(_special.gammaln(delta)) / (2.0 * sb * tau0)
    out = pref * (tau0 / arr) ** delta
    return float(out) if arr.ndim == 0 else out


# 64-point Gauss-Legendre for the narrow-uniform fallback
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _clamp_unit(v):
    # cancellation in the E1/quadrature branches can overshoot by ~1e-13
    if isinstance(v, np.ndarray):
        return np.clip(v, 0.0, 1.0)
    return min(1.0, max(0.0, v))


def sojourn(t, params: ModelParams, rtol: float = 1e-8):
    """Survival probability ``Psi(t) = P(waiting time > t)``, in [0, 1]."""
    w = params.weight
    tau0, beta = params.tau0, params.beta

    if isinstance(w, Delta):
        tau_mu = tau0 * math.exp(beta * w.mu)
        return _map_times(lambda x: math.exp(-x / tau_mu), t)

    if isinstance(w, Uniform):
        db = beta * w.half_width
        tau_plus = tau0 * math.exp(db)
        tau_minus = tau0 * math.exp(-db)

        def kernel(x: float) -> float:
            if x == 0.0:
                return 1.0
            if db < 1e-3:
                # E1 difference cancels; integrate exp(-x/tau(eps)) directly
                eps = w.half_width * _GL_NODES
                vals = np.exp(-x / (tau0 * np.exp(beta * eps)))
                return float(np.dot(_GL_WEIGHTS, vals) / 2.0)
            return (float(_special.exp1(x / tau_plus)) - float(_special.exp1(x / tau_minus))) / (2.0 * db)

        return _clamp_unit(_map_times(kernel, t))

    if isinstance(w, Laplace):
        sb = beta * w.sigma
        c = 1.0 / sb

        def kernel(x: float) -> float:
            if x == 0.0:
                return 1.0
            z = x / tau0
            val = scaled_lower_incomplete_gamma(c, z)
            val += scaled_upper_incomplete_gamma(-c, z)
            return val / (2.0 * sb)

        return _clamp_unit(_map_times(kernel, t))

    if isinstance(w, StretchedExp):
        alpha = w.alpha
        bs = beta * w.sigma
        scale = tau0 * math.exp(beta * w.mu)
        log_norm = math.log(_stretched_norm(alpha))

        def kernel(x: float) -> float:
            if x == 0.0:
                return 1.0
            c = x / scale
            seed = max(0.0, math.log(c) / bs)

            def logf(y: float) -> float:
                u = -bs * y
                if u > 700.0:
                    return -math.inf
                return _stretched_log_weight(y, alpha) - c * math.exp(u)

            return math.exp(_log_peak_quad(logf, seed, rtol=rtol) - log_norm)

        return _clamp_unit(_map_times(kernel, t))

    raise UnsupportedModelError(f"no survival function for weight {type(w).__name__}")


def characteristic_time(params: ModelParams) -> float:
    """Mean waiting time where it exists; raises :class:`NoFiniteMeanError` otherwise."""
    w = params.weight
    tau0, beta = params.tau0, params.beta
    if isinstance(w, Delta):
        return tau0 * math.exp(beta * w.mu)
    if isinstance(w, Uniform):
        db = beta * w.half_width
        if db < 1e-4:
            return tau0 * (1.0 + db * db / 6.0 + db ** 4 / 120.0)
        return tau0 * math.sinh(db) / db
    if isinstance(w, Laplace):
        sb = beta * w.sigma
        if sb >= 1.0:
            raise NoFiniteMeanError(
                f"mean waiting time diverges for sigma*beta = {sb} >= 1"
            )
        return tau0 / (1.0 - sb * sb)
    if isinstance(w, StretchedExp):
        from . import moments as _moments

        return _moments.moment(1.0, params)
    raise UnsupportedModelError(f"no mean for weight {type(w).__name__}")


def phase(params: ModelParams) -> PhaseLabel:
    """Finite-mean phase classification.

    Only the Laplace weight has a transition: the mean exists for
    beta*sigma < 1, the boundary beta*sigma == 1 (compared exactly as
    supplied) is critical, and beyond it rare deep traps dominate.  The tail
    exponent 1 + 1/(sigma*beta) of the density's power law rides along.
    """
    w = params.weight
    if isinstance(w, Laplace):
        sb = params.beta * w.sigma
        exponent = 1.0 + 1.0 / sb
        if sb < 1.0:
            return PhaseLabel(Phase.HIGH_TEMPERATURE, exponent)
        if sb == 1.0:
            return PhaseLabel(Phase.CRITICAL, exponent)
        return PhaseLabel(Phase.LOW_TEMPERATURE, exponent)
    return PhaseLabel(Phase.HIGH_TEMPERATURE, None)
