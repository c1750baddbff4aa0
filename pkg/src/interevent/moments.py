"""Analytic q-moments of waiting times for every weight family.

All moments share the structure ``<t^q> = Gamma(1+q) * tau0^q * W(q)`` where
``W`` is the weight's moment-generating factor in the depth variable.  The
stretched-exponential family additionally gets a saddle-point approximation
of its generating integral, the closed multifractal (MF) law it implies, and
a heuristic saturating variant (HMF) whose exponent turns monofractal at
large order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as _special

from .core import (
    Delta,
    DivergentMomentError,
    Laplace,
    ModelDomainError,
    ModelParams,
    QMomentCurve,
    SeriesTruncationWarning,
    StretchedExp,
    Uniform,
    UnsupportedModelError,
    _log_peak_quad,
)

__all__ = [
    "MFParams",
    "HMFParams",
    "SaddlePointResult",
    "SeriesMomentResult",
    "Scales",
    "conditional_moment",
    "moment_delta",
    "moment_uniform",
    "moment_laplace",
    "iq_quadrature",
    "log_iq_quadrature",
    "moment_stretched_series",
    "moment_gaussian",
    "saddlepoint_iq",
    "moment_mf",
    "log_moment_mf",
    "moment_hmf",
    "log_moment_hmf",
    "hmf_exponent",
    "fd_relation",
    "scales",
    "moment",
    "log_norm_moment",
    "model_curve",
    "mf_curve",
    "hmf_curve",
    "monofractal_curve",
]


# ---------------------------------------------------------------------------
# Parameter containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MFParams:
    """Multifractal moment-law parameters: exponent shape, log scale, curvature scale.

    ``c0`` plays the role of ln(tau0) + mu*beta; ``b`` is the coefficient of
    ``|q|**(alpha/(alpha-1))`` in the log moment.
    """

    alpha: float
    c0: float
    b: float

    def __post_init__(self):
        if not (self.alpha > 1 and math.isfinite(self.alpha)):
            raise ModelDomainError("alpha must exceed 1")
        if not math.isfinite(self.c0):
            raise ModelDomainError("c0 must be finite")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ModelDomainError("b must be positive")


@dataclass(frozen=True)
class HMFParams:
    """Saturating (heuristic) variant: adds the damping scale ``b1``."""

    alpha: float
    c0: float
    b: float
    b1: float

    def __post_init__(self):
        if not (self.alpha > 1 and math.isfinite(self.alpha)):
            raise ModelDomainError("alpha must exceed 1")
        if not math.isfinite(self.c0):
            raise ModelDomainError("c0 must be finite")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ModelDomainError("b must be positive")
        if not (self.b1 > 0 and math.isfinite(self.b1)):
            raise ModelDomainError("b1 must be positive")


@dataclass(frozen=True)
class SaddlePointResult:
    """Saddle-point approximation of the generating integral I(q).

    ``value = prefactor * exp(exponent_coeff * |q|**(alpha/(alpha-1)))``.
    ``lam`` is the dimensionless largeness parameter (beta*sigma)**(alpha/(alpha-1));
    ``x0`` the saddle location in the rescaled depth variable; ``h_x0`` and
    ``h2_x0`` the rescaled exponent and its (positive) second derivative there.
    """

    value: float
    prefactor: float
    exponent_coeff: float
    lam: float
    x0: float
    h_x0: float
    h2_x0: float


@dataclass(frozen=True)
class SeriesMomentResult:
    """Partial sum of the even-order expansion of a stretched-weight moment."""

    value: float
    terms_used: int
    converged: bool


@dataclass(frozen=True)
class Scales:
    """The four named scales of the stretched-weight moment law."""

    l: float
    b: float
    L: float
    lam: float


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _check_order(q: float) -> None:
    if not (math.isfinite(q) and q > -1.0):
        raise DivergentMomentError(f"moments exist only for q > -1 (got q = {q})")


def _safe_exp(x: float) -> float:
    if x > 709.0:
        return math.inf
    return math.exp(x)


def _log_sinhc(x: float) -> float:
    # ln(sinh(x)/x), even in x, stable near 0 and for large |x|
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    if ax < 1e-4:
        return math.log1p(ax * ax / 6.0 + ax ** 4 / 120.0)
    if ax < 20.0:
        return math.log(math.sinh(ax) / ax)
    return ax - math.log(2.0 * ax) + math.log1p(-math.exp(-2.0 * ax))


def _log_scale(params: ModelParams) -> float:
    mu = getattr(params.weight, "mu", 0.0)
    return math.log(params.tau0) + params.beta * mu


# ---------------------------------------------------------------------------
# Closed-form moments
# ---------------------------------------------------------------------------


def conditional_moment(q: float, eps: float, params: ModelParams) -> float:
    """``<t^q | eps> = Gamma(1+q) * tau(eps)^q`` for one trap depth."""
    _check_order(q)
    return _safe_exp(
        _special.gammaln(1.0 + q) + q * (math.log(params.tau0) + params.beta * eps)
    )


def moment_delta(q: float, params: ModelParams) -> float:
    if not isinstance(params.weight, Delta):
        raise UnsupportedModelError("moment_delta needs a Delta weight")
    _check_order(q)
    return conditional_moment(q, params.weight.mu, params)


def moment_uniform(q: float, params: ModelParams) -> float:
    if not isinstance(params.weight, Uniform):
        raise UnsupportedModelError("moment_uniform needs a Uniform weight")
    _check_order(q)
    db = params.beta * params.weight.half_width
    return _safe_exp(
        _special.gammaln(1.0 + q) + q * math.log(params.tau0) + _log_sinhc(q * db)
    )


def moment_laplace(q: float, params: ModelParams) -> float:
    if not isinstance(params.weight, Laplace):
        raise UnsupportedModelError("moment_laplace needs a Laplace weight")
    _check_order(q)
    sb = params.beta * params.weight.sigma
    if abs(q) * sb >= 1.0:
        raise DivergentMomentError(
            f"Laplace-weight moment diverges for |q|*beta*sigma = {abs(q) * sb} >= 1"
        )
    return _safe_exp(
        _special.gammaln(1.0 + q)
        + q * math.log(params.tau0)
        - math.log1p(-((q * sb) ** 2))
    )


# ---------------------------------------------------------------------------
# Stretched-exponential weight: generating integral and its approximations
# ---------------------------------------------------------------------------


def log_iq_quadrature(q: float, alpha: float, beta_sigma: float, rtol: float = 1e-10) -> float:
    """``ln I(q)`` with ``I(q) = int exp(-|y|^alpha + q*beta*sigma*y) dy``."""
    if not alpha > 1:
        raise DivergentMomentError(
            f"the generating integral converges only for alpha > 1 (got {alpha})"
        )
    if not (beta_sigma > 0 and math.isfinite(beta_sigma)):
        raise ModelDomainError("beta_sigma must be positive")
    if not math.isfinite(q):
        raise ModelDomainError("q must be finite")
    s = q * beta_sigma
    if s == 0.0:
        return math.log(2.0) + float(_special.gammaln(1.0 + 1.0 / alpha))
    seed = math.copysign((abs(s) / alpha) ** (1.0 / (alpha - 1.0)), s)

    def logf(y: float) -> float:
        return -abs(y) ** alpha + s * y

    return _log_peak_quad(logf, seed, rtol=rtol)


def iq_quadrature(q: float, alpha: float, beta_sigma: float, rtol: float = 1e-10) -> float:
    """Adaptive quadrature of the generating integral I(q)."""
    return _safe_exp(log_iq_quadrature(q, alpha, beta_sigma, rtol=rtol))


def moment_stretched_series(
    q: float, params: ModelParams, tol: float = 1e-12, n_max: int = 500
) -> SeriesMomentResult:
    """Even-order series for the stretched-weight moment.

    ``<t^q> = Gamma(1+q) (tau0 l)^q / Gamma(1/alpha) * sum_n
    Gamma((2n+1)/alpha) (q sigma beta)^(2n) / (2n)!``, summed until the next
    term's relative contribution drops below ``tol``.  The series converges
    slowly when ``q sigma beta`` is large; hitting ``n_max`` first yields the
    partial value, ``converged=False`` and a :class:`SeriesTruncationWarning`.
    """
    w = params.weight
    if not isinstance(w, StretchedExp):
        raise UnsupportedModelError("moment_stretched_series needs a StretchedExp weight")
    if not w.alpha > 1:
        raise DivergentMomentError(
            f"stretched-weight moments diverge for alpha <= 1 (got {w.alpha})"
        )
    _check_order(q)
    if not (tol > 0 and n_max >= 1):
        raise ValueError("tol must be positive and n_max >= 1")
    alpha = w.alpha
    x = abs(q) * params.beta * w.sigma

    def log_term(n: int) -> float:
        if n == 0:
            return float(_special.gammaln(1.0 / alpha))
        return float(
            _special.gammaln((2 * n + 1) / alpha)
            + 2 * n * math.log(x)
            - _special.gammaln(2 * n + 1)
        )

    log_sum = log_term(0)
    terms = 1
    converged = x == 0.0
    while not converged:
        nxt = log_term(terms)
        rel = math.exp(nxt - float(np.logaddexp(log_sum, nxt)))
        if rel < tol:
            converged = True
            break
        if terms >= n_max:
            warnings.warn(
                f"series truncated at {terms} terms before reaching tol={tol}",
                SeriesTruncationWarning,
                stacklevel=2,
            )
            break
        log_sum = float(np.logaddexp(log_sum, nxt))
        terms += 1
    value = _safe_exp(
        _special.gammaln(1.0 + q)
        + q * _log_scale(params)
        - _special.gammaln(1.0 / alpha)
        + log_sum
    )
    return SeriesMomentResult(value=value, terms_used=terms, converged=converged)


def moment_gaussian(q: float, params: ModelParams) -> float:
    """Closed form at alpha = 2: ``Gamma(1+q) tau0^q l^q L^(q^2)`` with ``L = e^((sigma beta)^2/4)``."""
    w = params.weight
    if not (isinstance(w, StretchedExp) and w.alpha == 2.0):
        raise UnsupportedModelError("moment_gaussian needs a StretchedExp weight with alpha = 2")
    _check_order(q)
    bs = params.beta * w.sigma
    return _safe_exp(
        _special.gammaln(1.0 + q) + q * _log_scale(params) + (q * bs) ** 2 / 4.0
    )


def saddlepoint_iq(q: float, alpha: float, beta_sigma: float) -> SaddlePointResult:
    """Laplace-method approximation of the generating integral I(q).

    Exact at alpha = 2; accuracy improves as ``lam`` grows and degrades near
    q = 0, where the prefactor loses normalization (callers can gate on
    ``lam``).  Raises at q = 0 where the expansion degenerates.
    """
    if not alpha > 1:
        raise DivergentMomentError(
            f"the generating integral converges only for alpha > 1 (got {alpha})"
        )
    if not (beta_sigma > 0 and math.isfinite(beta_sigma)):
        raise ModelDomainError("beta_sigma must be positive")
    if q == 0.0:
        raise ModelDomainError("saddle point degenerates at q = 0")
    if not math.isfinite(q):
        raise ModelDomainError("q must be finite")
    gamma = alpha / (alpha - 1.0)
    lam = beta_sigma ** gamma
    aq = abs(q)
    x0 = math.copysign((aq / alpha) ** (1.0 / (alpha - 1.0)), q)
    h_x0 = -(alpha - 1.0) * (aq / alpha) ** gamma
    h2_x0 = alpha * (alpha - 1.0) * (aq / alpha) ** ((alpha - 2.0) / (alpha - 1.0))
    prefactor = lam ** (1.0 / alpha) * math.sqrt(2.0 * math.pi / (lam * h2_x0))
    exponent_coeff = lam * (alpha - 1.0) / alpha ** gamma
    value = _safe_exp(math.log(prefactor) + exponent_coeff * aq ** gamma)
    return SaddlePointResult(
        value=value,
        prefactor=prefactor,
        exponent_coeff=exponent_coeff,
        lam=lam,
        x0=x0,
        h_x0=h_x0,
        h2_x0=h2_x0,
    )


# ---------------------------------------------------------------------------
# MF / HMF moment laws
# ---------------------------------------------------------------------------


def log_moment_mf(q: float, p: MFParams) -> float:
    _check_order(q)
    gamma = p.alpha / (p.alpha - 1.0)
    return float(_special.gammaln(1.0 + q)) + q * p.c0 + p.b * abs(q) ** gamma


def moment_mf(q: float, p: MFParams) -> float:
    """``exp(ln Gamma(1+q) + q c0 + b |q|^(alpha/(alpha-1)))``."""
    return _safe_exp(log_moment_mf(q, p))


def hmf_exponent(q: float, p: HMFParams) -> float:
    """Saturating exponent ``phi(q) = (1/b1)(1 - exp(-b1 |q|^(1/(alpha-1)))) |q|``."""
    s = abs(q) ** (1.0 / (p.alpha - 1.0))
    return (-math.expm1(-p.b1 * s)) * abs(q) / p.b1


def log_moment_hmf(q: float, p: HMFParams) -> float:
    _check_order(q)
    return float(_special.gammaln(1.0 + q)) + q * p.c0 + p.b * hmf_exponent(q, p)


def moment_hmf(q: float, p: HMFParams) -> float:
    """Saturating variant of the multifractal law; monofractal at large |q|."""
    return _safe_exp(log_moment_hmf(q, p))


def fd_relation(sigma: float, alpha: float, beta: float) -> float:
    """Depth offset ``mu = k sigma^(alpha/(alpha-1))`` that merges the two scales.

    With this ``mu`` the linear scale ``l = e^(beta mu)`` equals ``e^b``, i.e.
    ``b = mu beta``; ``k = (1 - 1/alpha)(beta/alpha)^(1/(alpha-1))``.
    """
    if not alpha > 1:
        raise ModelDomainError(f"the scale relation needs alpha > 1 (got {alpha})")
    if not (beta > 0 and math.isfinite(beta)):
        raise ModelDomainError("beta must be positive")
    if sigma < 0:
        raise ModelDomainError("sigma must be nonnegative")
    k = (1.0 - 1.0 / alpha) * (beta / alpha) ** (1.0 / (alpha - 1.0))
    return k * sigma ** (alpha / (alpha - 1.0))


def scales(params: ModelParams) -> Scales:
    """The four named scales (l, b, L, lam) of the stretched-weight law."""
    w = params.weight
    if not isinstance(w, StretchedExp):
        raise UnsupportedModelError("scales are defined for the StretchedExp weight")
    if not w.alpha > 1:
        raise ModelDomainError(f"scales need alpha > 1 (got {w.alpha})")
    alpha = w.alpha
    bs = params.beta * w.sigma
    gamma = alpha / (alpha - 1.0)
    l = math.exp(params.beta * w.mu)
    b = (alpha - 1.0) * (bs / alpha) ** gamma
    return Scales(l=l, b=b, L=_safe_exp(b), lam=bs ** gamma)


# ---------------------------------------------------------------------------
# Dispatcher and curve builders
# ---------------------------------------------------------------------------


def log_norm_moment(q: float, params: ModelParams, rtol: float = 1e-10) -> float:
    """``ln(<t^q> / Gamma(1+q))`` for any weight family (exact 0 at q = 0)."""
    _check_order(q)
    if q == 0.0:
        return 0.0
    w = params.weight
    if isinstance(w, Delta):
        return q * (math.log(params.tau0) + params.beta * w.mu)
    if isinstance(w, Uniform):
        db = params.beta * w.half_width
        return q * math.log(params.tau0) + _log_sinhc(q * db)
    if isinstance(w, Laplace):
        sb = params.beta * w.sigma
        if abs(q) * sb >= 1.0:
            raise DivergentMomentError(
                f"Laplace-weight moment diverges for |q|*beta*sigma = {abs(q) * sb} >= 1"
            )
        return q * math.log(params.tau0) - math.log1p(-((q * sb) ** 2))
    if isinstance(w, StretchedExp):
        if not w.alpha > 1:
            raise DivergentMomentError(
                f"stretched-weight moments diverge for alpha <= 1 (got {w.alpha})"
            )
        bs = params.beta * w.sigma
        if w.alpha == 2.0:
            return q * _log_scale(params) + (q * bs) ** 2 / 4.0
        norm = math.log(2.0) + float(_special.gammaln(1.0 + 1.0 / w.alpha))
        return q * _log_scale(params) + log_iq_quadrature(q, w.alpha, bs, rtol=rtol) - norm
    raise UnsupportedModelError(f"no moment law for weight {type(w).__name__}")


def moment(q: float, params: ModelParams, rtol: float = 1e-10) -> float:
    """``<t^q>`` for any weight family (closed form, or quadrature where needed)."""
    _check_order(q)
    return _safe_exp(float(_special.gammaln(1.0 + q)) + log_norm_moment(q, params, rtol=rtol))


def _as_q_grid(q_grid) -> np.ndarray:
    q = np.atleast_1d(np.asarray(q_grid, dtype=float))
    return q


def model_curve(q_grid, params: ModelParams, rtol: float = 1e-10) -> QMomentCurve:
    """Analytic normalized log-moment curve for a weight family."""
    q = _as_q_grid(q_grid)
    vals = np.array([log_norm_moment(float(x), params, rtol=rtol) for x in q])
    return QMomentCurve(q_grid=q, log_norm_moment=vals, n_samples=0)


def mf_curve(q_grid, p: MFParams) -> QMomentCurve:
    q = _as_q_grid(q_grid)
    gamma = p.alpha / (p.alpha - 1.0)
    vals = q * p.c0 + p.b * np.abs(q) ** gamma
    return QMomentCurve(q_grid=q, log_norm_moment=vals, n_samples=0)


def hmf_curve(q_grid, p: HMFParams) -> QMomentCurve:
    q = _as_q_grid(q_grid)
    vals = q * p.c0 + p.b * np.array([hmf_exponent(float(x), p) for x in q])
    return QMomentCurve(q_grid=q, log_norm_moment=vals, n_samples=0)


def monofractal_curve(q_grid, ln_tau: float) -> QMomentCurve:
    """Pure single-scale curve ``ln(<t^q>/Gamma(1+q)) = q ln(tau)``."""
    q = _as_q_grid(q_grid)
    return QMomentCurve(q_grid=q, log_norm_moment=q * float(ln_tau), n_samples=0)
