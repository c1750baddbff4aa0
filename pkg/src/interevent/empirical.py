"""Empirical pipeline: ingestion, q-moment and survival estimation, collapse diagnostics.

The collapse diagnostics rewrite a normalized log-moment curve so that data
generated by a given moment law lands on a known reference shape: a flat
line at 1 for the single-scale (monofractal) law, the identity line for the
multifractal law, and ``1 - exp(-x)`` for the saturating variant.  Points
where a diagnostic is undefined (q = 0, or q < 0 where only positive orders
make sense) are returned as NaN so the caller can see exactly what was
skipped; CLI output filters them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _special

from .core import (
    EventSeries,
    IngestError,
    ModelDomainError,
    QMomentCurve,
)
from .moments import HMFParams, MFParams

__all__ = [
    "DEFAULT_Q_GRID",
    "IngestOptions",
    "ingest",
    "empirical_qmoments",
    "empirical_sojourn",
    "rescaled_log_moment",
    "mono_collapse",
    "mf_collapse",
    "hmf_collapse",
    "transformed_moment",
    "scale_q",
]

# 0 to 20 in steps of 0.1, q = 0 pinned exactly
DEFAULT_Q_GRID = np.linspace(0.0, 20.0, 201)


@dataclass(frozen=True)
class IngestOptions:
    """How raw records become durations.

    ``input_kind`` is ``"durations"`` (pass-through) or ``"timestamps"``
    (successive differences).  ``min_duration`` is a resolution floor; the
    default 0 drops only non-positive intervals.  ``gap_cutoff``, when set,
    drops intervals longer than the cutoff as session breaks.
    """

    input_kind: str = "durations"
    gap_cutoff: float | None = None
    min_duration: float = 0.0

    def __post_init__(self):
        if self.input_kind not in ("durations", "timestamps"):
            raise ValueError("input_kind must be 'durations' or 'timestamps'")
        if self.min_duration < 0:
            raise ValueError("min_duration must be nonnegative")
        if self.gap_cutoff is not None and not self.gap_cutoff > self.min_duration:
            raise ValueError("gap_cutoff must exceed min_duration")


def ingest(records, opts: IngestOptions = IngestOptions()) -> EventSeries:
    """Turn raw records into an :class:`EventSeries`, counting what was dropped.

    Timestamps must be monotone nondecreasing; the first offending index is
    reported otherwise.  Drops (non-positive, below the floor, beyond the
    session cutoff) are tallied per reason, order is preserved.
    """
    arr = np.asarray(records, dtype=float)
    if arr.ndim != 1:
        raise IngestError("records must be one-dimensional")
    if arr.size and not np.all(np.isfinite(arr)):
        idx = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise IngestError(f"non-finite record at index {idx}", index=idx)
    if opts.input_kind == "timestamps":
        if arr.size < 2:
            raise IngestError("need at least two timestamps")
        diffs = np.diff(arr)
        if np.any(diffs < 0):
            idx = int(np.flatnonzero(diffs < 0)[0]) + 1
            raise IngestError(f"timestamps decrease at index {idx}", index=idx)
        durations = diffs
    else:
        durations = arr

    dropped: dict[str, int] = {}
    keep = np.ones(durations.shape, dtype=bool)

    non_positive = durations <= 0
    if np.any(non_positive):
        dropped["non_positive"] = int(non_positive.sum())
        keep &= ~non_positive
    if opts.min_duration > 0:
        below = keep & (durations < opts.min_duration)
        if np.any(below):
            dropped["below_min_duration"] = int(below.sum())
            keep &= ~below
    if opts.gap_cutoff is not None:
        breaks = keep & (durations > opts.gap_cutoff)
        if np.any(breaks):
            dropped["session_break"] = int(breaks.sum())
            keep &= ~breaks

    return EventSeries(durations=durations[keep], source=opts.input_kind, dropped=dropped)


def empirical_qmoments(series: EventSeries, q_grid=None) -> QMomentCurve:
    """Normalized log moments ``ln(<t^q>/Gamma(1+q))`` via log-sum-exp.

    Working on ``q * ln(t)`` keeps orders up to 20 on second-to-day durations
    inside float range.  Delta-method standard errors of each log value,
    ``sqrt((<t^{2q}>/<t^q>^2 - 1)/N)``, ride along for weighted fitting.
    """
    if len(series) == 0:
        raise ValueError("cannot estimate moments of an empty series")
    q = np.atleast_1d(np.asarray(DEFAULT_Q_GRID if q_grid is None else q_grid, dtype=float))
    if np.any(q <= -1.0):
        raise ModelDomainError("moment orders must exceed -1")
    log_t = np.log(series.durations)
    n = log_t.size
    log_mean = np.empty_like(q)
    log_mean2 = np.empty_like(q)
    for i, qi in enumerate(q):
        log_mean[i] = _special.logsumexp(qi * log_t) - math.log(n)
        log_mean2[i] = _special.logsumexp(2.0 * qi * log_t) - math.log(n)
    values = log_mean - _special.gammaln(1.0 + q)
    values[q == 0.0] = 0.0
    ratio = np.exp(np.minimum(log_mean2 - 2.0 * log_mean, 700.0))
    stderr = np.sqrt(np.maximum(ratio - 1.0, 0.0) / n)
    return QMomentCurve(q_grid=q, log_norm_moment=values, n_samples=n, stderr=stderr)


def empirical_sojourn(series: EventSeries, t_grid):
    """Fraction of durations exceeding each grid time (the survival estimate)."""
    if len(series) == 0:
        raise ValueError("cannot estimate the survival function of an empty series")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(t < 0):
        raise ModelDomainError("t_grid must be nonnegative")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    ordered = np.sort(series.durations)
    n = ordered.size
    exceed = n - np.searchsorted(ordered, t, side="right")
    psi = exceed / n
    return float(psi[0]) if np.isscalar(t_grid) else psi


# ---------------------------------------------------------------------------
# Collapse diagnostics
# ---------------------------------------------------------------------------


def rescaled_log_moment(curve: QMomentCurve, tau_char: float, theta: float) -> np.ndarray:
    """Log of the moment curve rescaled from its own time unit onto a common one.

    ``curve(q) + q (ln theta - ln tau_char)``: datasets following the same
    single-scale law with different characteristic times collapse onto
    ``q ln(theta)``.
    """
    if not (tau_char > 0 and theta > 0):
        raise ModelDomainError("tau_char and theta must be positive")
    return curve.log_norm_moment + curve.q_grid * (math.log(theta) - math.log(tau_char))


def mono_collapse(curve: QMomentCurve, tau_char: float) -> np.ndarray:
    """``curve(q) / (q ln(tau_char))``: 1 at every q for a single-scale law.

    q = 0 points are undefined and returned as NaN.
    """
    if not tau_char > 0:
        raise ModelDomainError("tau_char must be positive")
    ln_tau = math.log(tau_char)
    if ln_tau == 0.0:
        raise ModelDomainError("mono_collapse is undefined for ln(tau_char) = 0")
    q = curve.q_grid
    out = np.full(q.shape, np.nan)
    ok = q != 0.0
    out[ok] = curve.log_norm_moment[ok] / (q[ok] * ln_tau)
    return out


def mf_collapse(curve: QMomentCurve, p: MFParams) -> np.ndarray:
    """``curve(q)/q - c0``: equals ``b q^(1/(alpha-1))`` exactly on a multifractal curve.

    Only q > 0 is meaningful; other points come back NaN.
    """
    q = curve.q_grid
    out = np.full(q.shape, np.nan)
    ok = q > 0.0
    out[ok] = curve.log_norm_moment[ok] / q[ok] - p.c0
    return out


def hmf_collapse(curve: QMomentCurve, p: HMFParams) -> np.ndarray:
    """``(b1/b)(curve(q)/q - c0)``: lies on ``1 - exp(-x)`` for a saturating curve,
    with ``x = b1 q^(1/(alpha-1))``.  Only q > 0; other points NaN."""
    q = curve.q_grid
    out = np.full(q.shape, np.nan)
    ok = q > 0.0
    out[ok] = (p.b1 / p.b) * (curve.log_norm_moment[ok] / q[ok] - p.c0)
    return out


def transformed_moment(curve: QMomentCurve, p: HMFParams) -> np.ndarray:
    """``b1 (curve(q)/q - c0)``, i.e. ``b * hmf_collapse``: linear in b across datasets."""
    q = curve.q_grid
    out = np.full(q.shape, np.nan)
    ok = q > 0.0
    out[ok] = p.b1 * (curve.log_norm_moment[ok] / q[ok] - p.c0)
    return out


def scale_q(q, market: HMFParams, reference: HMFParams):
    """Order rescaling that maps a market's saturating curve onto the reference's.

    ``q_hat = (b1_ref/b1_mkt)**(alpha_mkt - 1) * q**((alpha_mkt-1)/(alpha_ref-1))``,
    so that ``b1_mkt * q_hat**(1/(alpha_mkt-1)) = b1_ref * q**(1/(alpha_ref-1))``:
    the market curve evaluated at ``q_hat`` sits where the reference curve
    sits at ``q``.
    """
    arr = np.asarray(q, dtype=float)
    if np.any(arr <= 0):
        raise ModelDomainError("order rescaling needs q > 0")
    factor = (reference.b1 / market.b1) ** (market.alpha - 1.0)
    expo = (market.alpha - 1.0) / (reference.alpha - 1.0)
    out = factor * arr ** expo
    return float(out) if arr.ndim == 0 else out
