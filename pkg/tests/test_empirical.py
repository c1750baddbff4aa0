import math
from fractions import Fraction

import numpy as np
import pytest

import interevent as iv
from interevent.core import IngestError, ModelDomainError
from interevent.empirical import DEFAULT_Q_GRID, IngestOptions


def test_default_grid_shape():
    assert DEFAULT_Q_GRID[0] == 0.0
    assert DEFAULT_Q_GRID[-1] == 20.0
    assert len(DEFAULT_Q_GRID) == 201


def test_ingest_durations_drop_accounting():
    data = np.array([1.0, -2.0, 0.0, 0.5, 3.0])
    s = iv.ingest(data, IngestOptions(input_kind="durations", min_duration=0.6))
    assert np.array_equal(s.durations, [1.0, 3.0])
    assert s.dropped["non_positive"] == 2
    assert s.dropped["below_min_duration"] == 1


def test_ingest_timestamps():
    stamps = np.array([0.0, 1.0, 3.0, 3.0, 10.0])
    s = iv.ingest(stamps, IngestOptions(input_kind="timestamps"))
    # zero-length gap dropped, others kept
    assert np.array_equal(s.durations, [1.0, 2.0, 7.0])
    assert s.dropped["non_positive"] == 1


def test_ingest_timestamps_must_be_ordered():
    stamps = np.array([0.0, 2.0, 1.5, 3.0])
    with pytest.raises(IngestError) as exc:
        iv.ingest(stamps, IngestOptions(input_kind="timestamps"))
    assert exc.value.index == 2


def test_ingest_rejects_non_finite_with_index():
    data = np.array([1.0, np.inf, 2.0])
    with pytest.raises(IngestError) as exc:
        iv.ingest(data, IngestOptions(input_kind="durations"))
    assert exc.value.index == 1


def test_ingest_session_breaks():
    stamps = np.array([0.0, 1.0, 100.0, 101.5])
    s = iv.ingest(stamps, IngestOptions(input_kind="timestamps", gap_cutoff=50.0))
    assert np.array_equal(s.durations, [1.0, 1.5])
    assert s.dropped["session_break"] == 1


def test_ingest_option_validation():
    with pytest.raises(ValueError):
        IngestOptions(input_kind="bogus")
    with pytest.raises(ValueError):
        IngestOptions(input_kind="durations", gap_cutoff=1.0, min_duration=2.0)


def _series(values):
    return iv.EventSeries(durations=np.asarray(values, dtype=float), source="unit")


def test_qmoments_match_exact_rational_arithmetic():
    # the log-sum-exp path must agree with exact arithmetic on integer data
    data = [1, 2, 3, 5, 8, 13]
    s = _series(data)
    qs = np.array([0.0, 1.0, 2.0, 3.0, 7.0])
    curve = iv.empirical_qmoments(s, qs)
    for q, got in zip(qs[1:], curve.log_norm_moment[1:]):
        mean_q = Fraction(sum(Fraction(x) ** int(q) for x in data), len(data))
        expected = math.log(mean_q) - math.lgamma(1.0 + q)
        assert got == pytest.approx(expected, abs=1e-12)
    assert curve.log_norm_moment[0] == 0.0
    assert curve.n_samples == len(data)


def test_qmoments_stderr_formula():
    data = [1.0, 2.0, 4.0]
    s = _series(data)
    curve = iv.empirical_qmoments(s, np.array([0.0, 1.0]))
    m1 = np.mean(data)
    m2 = np.mean(np.square(data))
    expected = math.sqrt((m2 / m1**2 - 1.0) / len(data))
    assert curve.stderr[1] == pytest.approx(expected, rel=1e-12)
    assert curve.stderr[0] == 0.0


def test_qmoments_survive_extreme_magnitudes():
    # values spanning hundreds of orders of magnitude must not overflow
    s = _series([1e-200, 1e-100, 1e100, 1e200])
    curve = iv.empirical_qmoments(s, np.array([0.0, 2.0, 5.0]))
    assert np.all(np.isfinite(curve.log_norm_moment))
    expected = 5.0 * math.log(1e200) - math.log(4.0) - math.lgamma(6.0)
    assert curve.log_norm_moment[2] == pytest.approx(expected, rel=1e-12)
    assert np.all(np.isfinite(curve.stderr))


def test_qmoments_grid_validation():
    s = _series([1.0, 2.0])
    with pytest.raises(ValueError):
        iv.empirical_qmoments(s, np.array([0.0, 0.0]))
    with pytest.raises(ValueError):
        iv.empirical_qmoments(s, np.array([-1.5, 0.0]))


def test_empirical_sojourn_small_case():
    s = _series([1.0, 2.0, 3.0])
    grid = np.array([0.5, 1.0, 2.5, 3.0])
    psi = iv.empirical_sojourn(s, grid)
    assert np.allclose(psi, [1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0])
    with pytest.raises(ValueError):
        iv.empirical_sojourn(s, np.array([1.0, 0.5]))


def test_rescaled_log_moment():
    q = np.array([0.0, 1.0, 2.0])
    curve = iv.monofractal_curve(q, 2.0)
    theta = math.exp(3.0)
    out = iv.rescaled_log_moment(curve, math.exp(2.0), theta)
    # substituting theta for tau scales the line to slope ln(theta)
    assert out[1] == pytest.approx(3.0, rel=1e-12)
    assert out[2] == pytest.approx(6.0, rel=1e-12)


def test_mono_collapse():
    q = np.array([0.0, 1.0, 4.0])
    curve = iv.monofractal_curve(q, 1.7)
    out = iv.mono_collapse(curve, math.exp(1.7))
    assert math.isnan(out[0])
    assert out[1] == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ModelDomainError):
        iv.mono_collapse(curve, 1.0)
    with pytest.raises(ModelDomainError):
        iv.mono_collapse(curve, -2.0)


def test_mf_collapse_properties():
    q = np.linspace(0.0, 4.0, 41)
    p = iv.MFParams(alpha=1.8, c0=-1.0, b=0.6)
    curve = iv.mf_curve(q, p)
    out = iv.mf_collapse(curve, p)
    assert math.isnan(out[0])
    x = 0.6 * q[1:] ** (1.0 / 0.8)
    assert np.allclose(out[1:], x, atol=1e-12)


def test_hmf_collapse_and_transform():
    q = np.linspace(0.0, 20.0, 201)
    p = iv.HMFParams(alpha=1.91, c0=-3.0, b=2.5, b1=0.33)
    curve = iv.hmf_curve(q, p)
    out = iv.hmf_collapse(curve, p)
    x = 0.33 * q[1:] ** (1.0 / 0.91)
    assert np.allclose(out[1:], -np.expm1(-x), atol=1e-12)

    tr = iv.transformed_moment(curve, p)
    assert np.allclose(tr[1:], 2.5 / 0.33 * (-np.expm1(-x)) * 0.33, atol=1e-10)


def test_scale_q_identity_and_domain():
    market = iv.HMFParams(alpha=1.85, c0=-1.5, b=0.9, b1=0.4)
    ref = iv.HMFParams(alpha=1.91, c0=-3.0, b=2.5, b1=0.33)
    q = np.array([0.5, 1.0, 2.0, 5.0, 12.0])
    qhat = iv.scale_q(q, market, ref)
    # defining property: the saturation arguments coincide after mapping
    lhs = market.b1 * qhat ** (1.0 / (market.alpha - 1.0))
    rhs = ref.b1 * q ** (1.0 / (ref.alpha - 1.0))
    assert np.allclose(lhs, rhs, rtol=1e-12)
    assert np.all(np.diff(qhat) > 0)

    with pytest.raises(ModelDomainError):
        iv.scale_q(np.array([0.0, 1.0]), market, ref)
    with pytest.raises(ModelDomainError):
        iv.scale_q(-1.0, market, ref)


def test_scale_q_is_identity_on_same_market():
    p = iv.HMFParams(alpha=1.78, c0=0.1, b=1.07, b1=0.20)
    q = np.linspace(0.1, 10.0, 25)
    assert np.allclose(iv.scale_q(q, p, p), q, rtol=1e-12)
