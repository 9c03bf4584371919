"""Polynomial arithmetic, root finding, and root/coefficient round trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltilab.polynomial import (
    Polynomial,
    eval_complex,
    from_roots,
    multiply,
    residual,
    roots,
    sort_roots,
)

from conftest import random_stable_roots


class TestEval:
    def test_linear_at_j(self):
        assert eval_complex(Polynomial([1, 1]), 1j) == 1 + 1j

    def test_constant(self):
        p = Polynomial([1, 0])
        for s in (0j, 3 + 2j, -17.5 + 0j):
            assert eval_complex(p, s) == 1.0

    def test_root_of_factored_quadratic(self):
        # (1+s)(1+2s) = 1 + 3s + 2s^2 vanishes at s = -1
        assert eval_complex(Polynomial([1, 3, 2]), -1 + 0j) == 0.0


class TestRoots:
    def test_linear(self):
        assert roots(Polynomial([1, 1])) == [(-1 + 0j)]

    def test_two_real(self):
        got = roots(Polynomial([1, 3, 2]))
        assert np.allclose(got, [-1.0, -0.5])

    def test_complex_pair(self):
        # w0=1, zeta=0.5: s^2 + s + 1 scaled to ascending [1, 1, 1]
        got = roots(Polynomial([1.0, 2 * 0.5 * 1.0, 1.0]))
        want = sort_roots([complex(-0.5, -0.8660254037844386), complex(-0.5, 0.8660254037844386)])
        assert np.allclose(got, want, atol=1e-12)

    def test_constant_rejected(self):
        with pytest.raises(ValueError, match="constant polynomial has no roots"):
            roots(Polynomial([2.0]))

    def test_conjugate_pairing(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            p = from_roots(random_stable_roots(rng), 1.0)
            if p.degree < 1:
                continue
            got = roots(p)
            complexes = [r for r in got if abs(r.imag) > 1e-9]
            for r in complexes:
                assert any(abs(r.conjugate() - other) <= 1e-9 * (1 + abs(r)) for other in complexes)


class TestMultiply:
    def test_hand_expansion(self):
        assert multiply(Polynomial([1, 1]), Polynomial([1, 2])).coeffs == (1.0, 3.0, 2.0)

    def test_identity(self):
        assert multiply(Polynomial([1]), Polynomial([3, 4, 5])).coeffs == (3.0, 4.0, 5.0)

    def test_zero_annihilates(self):
        assert multiply(Polynomial([0]), Polynomial([1, 1])).coeffs == (0.0,)

    @given(
        st.lists(st.floats(-10, 10), min_size=1, max_size=5),
        st.lists(st.floats(-10, 10), min_size=1, max_size=5),
        st.lists(st.floats(-10, 10), min_size=1, max_size=5),
    )
    @settings(max_examples=100, deadline=None)
    def test_commutative_associative(self, a, b, c):
        pa, pb, pc = Polynomial(a), Polynomial(b), Polynomial(c)
        ab = multiply(pa, pb)
        ba = multiply(pb, pa)
        assert len(ab.coeffs) == len(ba.coeffs)
        for x, y in zip(ab.coeffs, ba.coeffs):
            assert x == pytest.approx(y, rel=1e-12, abs=1e-300)
        left = multiply(multiply(pa, pb), pc)
        right = multiply(pa, multiply(pb, pc))
        assert len(left.coeffs) == len(right.coeffs)
        for x, y in zip(left.coeffs, right.coeffs):
            assert x == pytest.approx(y, rel=1e-12, abs=1e-12)


class TestFromRoots:
    def test_single_root(self):
        assert from_roots([-1 + 0j], 1.0).coeffs == (1.0, 1.0)

    def test_two_roots_with_gain(self):
        assert from_roots([-1 + 0j, -0.5 + 0j], 2.0).coeffs == (1.0, 3.0, 2.0)

    def test_empty_product(self):
        assert from_roots([], 3.0).coeffs == (3.0,)

    def test_non_conjugate_rejected(self):
        with pytest.raises(ValueError, match="not closed under conjugation"):
            from_roots([complex(-1, 2)], 1.0)

    def test_conjugate_pair_gives_real_coeffs(self):
        p = from_roots([complex(-1, 2), complex(-1, -2)], 1.0)
        assert p.coeffs == (5.0, 2.0, 1.0)


class TestRoundTrip:
    def test_random_stable_sets(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            want = random_stable_roots(rng)
            p = from_roots(want, 1.0)
            got = roots(p)
            assert len(got) == len(want)
            for g, w in zip(got, sort_roots(want)):
                assert abs(g - w) <= 1e-6 * (1.0 + abs(w))

    def test_residuals(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            p = from_roots(random_stable_roots(rng), 1.0)
            if p.degree < 1:
                continue
            for r in roots(p):
                assert residual(p, r) <= 1e-8


class TestTrimming:
    def test_phantom_leading_coefficient(self):
        p = Polynomial([1.0, 2.0, 1e-20])
        assert p.degree == 1
        assert p.coeffs == (1.0, 2.0)

    def test_zero_polynomial(self):
        p = Polynomial([0.0, 0.0, 0.0])
        assert p.coeffs == (0.0,)
        assert p.is_zero

    def test_interior_small_coefficients_kept(self):
        p = Polynomial([1.0, 1e-20, 1.0])
        assert p.degree == 2
        assert p.coeffs[1] == 1e-20

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            Polynomial([1.0, float("inf")])
