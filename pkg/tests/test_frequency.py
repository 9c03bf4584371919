"""Frequency response, phase unwrapping, Nyquist curve, stability margins."""

import cmath
import math

import numpy as np
import pytest

from ltilab.frequency import (
    FrequencyGrid,
    default_grid,
    densify_for_delay,
    freq_response,
    log_grid,
    margins,
    nyquist_curve,
    unwrap_phase,
)
from ltilab.parsing import parse_expression
from ltilab.polynomial import eval_complex
from ltilab.transfer import make_tf


class TestGrid:
    def test_endpoints(self):
        g = default_grid(2)
        assert g.omegas[0] == pytest.approx(0.01, rel=1e-15)
        assert g.omegas[1] == pytest.approx(1000.0, rel=1e-15)

    def test_decade_spacing(self):
        g = default_grid(6)
        assert np.allclose(g.omegas, [0.01, 0.1, 1, 10, 100, 1000], rtol=1e-12)

    def test_log_uniform_ratio(self):
        g = default_grid(1000)
        assert len(g) == 1000
        assert g.omegas[1] / g.omegas[0] == pytest.approx(10 ** (5 / 999), rel=1e-12)

    def test_too_small(self):
        with pytest.raises(ValueError):
            default_grid(1)


class TestFreqResponse:
    def test_first_order_at_unit_frequency(self):
        fr = freq_response(make_tf([1], [1, 1]), FrequencyGrid((1.0,)))
        assert fr.values[0] == pytest.approx(0.5 - 0.5j, abs=1e-15)
        assert fr.mag_db[0] == pytest.approx(-3.0102999566398116, abs=1e-9)
        assert fr.phase_deg[0] == pytest.approx(-45.0, abs=1e-9)

    def test_static_gain_limit_with_delay(self):
        fr = freq_response(make_tf([3], [1, 1], 0.5), FrequencyGrid((1e-8, 1e-7)))
        assert abs(fr.values[0]) == pytest.approx(3.0, rel=1e-9)
        assert fr.phase_deg[0] == pytest.approx(0.0, abs=1e-4)
        assert fr.mag_db[0] == pytest.approx(20 * math.log10(3), abs=1e-6)

    def test_pure_delay_phase(self):
        tf = make_tf([1], [1], 2.0)
        grid = densify_for_delay(log_grid(1e-2, 10.0, 200), tf.delay)
        fr = freq_response(tf, grid)
        assert np.allclose(np.abs(fr.values), 1.0, atol=1e-12)
        k = int(np.argmin(np.abs(fr.omegas - 10.0)))
        assert fr.omegas[k] == pytest.approx(10.0, rel=1e-12)
        assert fr.phase_deg[k] == pytest.approx(math.degrees(-20.0), abs=1e-6)
        # every sample tracks -L*omega radians
        assert np.allclose(
            np.radians(fr.phase_deg), -2.0 * fr.omegas, atol=1e-6
        )

    def test_identity_with_polynomial_evaluation(self):
        tf = make_tf([1, 0.5], [1, 3, 2])
        grid = default_grid(50)
        fr = freq_response(tf, grid)
        for k, w in enumerate(grid.omegas):
            expected = eval_complex(tf.num, 1j * w) / eval_complex(tf.den, 1j * w)
            assert fr.values[k] == expected  # same arithmetic path, exact

    def test_conjugate_symmetry(self):
        tf = make_tf([1, 0.2], [1, 0.4, 1.0], 0.3)
        for w in (0.05, 0.7, 3.0, 40.0):
            assert tf.evaluate(-1j * w) == pytest.approx(
                tf.evaluate(1j * w).conjugate(), rel=1e-12
            )

    def test_monotone_first_order_magnitude(self):
        fr = freq_response(make_tf([1], [1, 1]), default_grid(500))
        assert np.all(np.diff(fr.mag_db) < 0)

    def test_singular_point_marked(self):
        # pole exactly at j*1: den = 1 + s^2
        fr = freq_response(make_tf([1], [1, 0, 1]), FrequencyGrid((0.5, 1.0, 2.0)))
        assert not fr.singular[0] and fr.singular[1] and not fr.singular[2]
        assert math.isinf(fr.mag_db[1])


class TestUnwrap:
    def test_wrap_jump(self):
        out = unwrap_phase([-170.0, 175.0], [1.0, 2.0])
        assert np.allclose(out, [-170.0, -185.0])

    def test_no_jump_untouched(self):
        out = unwrap_phase([-45.0, -90.0, -135.0], [1.0, 2.0, 3.0])
        assert np.allclose(out, [-45.0, -90.0, -135.0])

    def test_first_sample_wrapped_into_principal_range(self):
        out = unwrap_phase([470.0], [1.0])
        assert out[0] == pytest.approx(110.0)
        out = unwrap_phase([-180.0], [1.0])
        assert out[0] == pytest.approx(180.0)

    def test_delay_plus_lag_closed_form(self):
        tf = make_tf([1], [1, 1], 2.0)
        grid = densify_for_delay(default_grid(1000), tf.delay)
        fr = freq_response(tf, grid)
        want = -np.degrees(np.arctan(fr.omegas)) - np.degrees(2.0 * fr.omegas)
        assert np.allclose(fr.phase_deg, want, atol=math.degrees(1e-3))
        # spot value at exactly omega = 100 (grid built to land on it)
        g100 = densify_for_delay(log_grid(1e-2, 100.0, 500), tf.delay)
        fr100 = freq_response(tf, g100)
        expected_100 = -math.degrees(math.atan(100.0)) - math.degrees(200.0)
        assert fr100.phase_deg[-1] == pytest.approx(expected_100, abs=1e-3)

    def test_misaligned_sequences(self):
        with pytest.raises(ValueError):
            unwrap_phase([0.0, 1.0], [1.0])


class TestDensify:
    def test_identity_without_delay(self):
        g = default_grid(10)
        assert densify_for_delay(g, 0.0) is g

    def test_inserts_points_for_large_delay(self):
        g = FrequencyGrid((100.0, 200.0))
        dense = densify_for_delay(g, 2.0)
        gaps = np.diff(dense.omegas)
        assert np.all(gaps <= math.pi / 4 + 1e-12)
        assert dense.omegas[0] == 100.0 and dense.omegas[-1] == 200.0

    def test_small_frequencies_unchanged(self):
        g = FrequencyGrid((0.01, 0.02))
        assert densify_for_delay(g, 0.5).omegas == (0.01, 0.02)


class TestNyquist:
    def test_point_from_response(self):
        fr = freq_response(make_tf([1], [1, 1]), FrequencyGrid((1.0,)))
        pts = nyquist_curve(fr)
        assert pts[0, 0] == pytest.approx(0.5, abs=1e-12)
        assert pts[0, 1] == pytest.approx(-0.5, abs=1e-12)

    def test_first_order_circle(self):
        fr = freq_response(make_tf([1], [1, 1]), default_grid(400))
        pts = nyquist_curve(fr)
        residuals = (pts[:, 0] - 0.5) ** 2 + pts[:, 1] ** 2 - 0.25
        assert np.max(np.abs(residuals)) <= 1e-9

    def test_static_system(self):
        fr = freq_response(make_tf([2], [1]), default_grid(10))
        pts = nyquist_curve(fr)
        assert np.allclose(pts[:, 0], 2.0) and np.allclose(pts[:, 1], 0.0)


class TestMargins:
    def test_quadruple_lag_gain_margin(self):
        m = margins(parse_expression("1/(1+s)^4"))
        assert m.gain_margin == pytest.approx(4.0, abs=1e-3)
        assert m.gm_db == pytest.approx(12.0412, abs=0.01)
        assert m.omega_pc == pytest.approx(1.0, abs=1e-3)

    def test_integrator_lag_phase_margin(self):
        m = margins(parse_expression("1/(s*(1+s))"))
        assert m.omega_gc == pytest.approx(0.7861513778, abs=1e-4)
        assert m.phase_margin_deg == pytest.approx(51.827, abs=0.01)
        assert m.gain_margin == math.inf
        assert m.omega_pc is None

    def test_first_order_infinite_margins(self):
        for k in (0.5, 1.0, 3.0, 5.0):
            m = margins(make_tf([k], [1, 1]))
            assert m.gain_margin == math.inf
            assert m.omega_pc is None

    def test_gain_margin_with_delay(self):
        # 1/(1+s) * e^{-s}: phase hits -180 deg where atan(w) + w = pi
        m = margins(parse_expression("1/(1+s)*exp(-1*s)"))
        w = m.omega_pc
        assert math.atan(w) + w == pytest.approx(math.pi, abs=1e-6)
        assert m.gain_margin == pytest.approx(math.sqrt(1 + w * w), rel=1e-6)

    def test_no_unity_crossing_means_no_phase_margin(self):
        m = margins(make_tf([0.5], [1, 1]))
        assert m.phase_margin_deg is None
        assert m.omega_gc is None
