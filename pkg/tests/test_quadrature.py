import math

import numpy as np
import pytest

from dunkl_dihedral.exceptions import ParameterError
from dunkl_dihedral.forms import circle_pairing, closed_norm, gaussian_pairing
from dunkl_dihedral.harmonic import harmonic_labels, label_poly, small_p
from dunkl_dihedral.polyalg import TBAR, Z, ZBAR, T, VectorPoly, m_parity
from dunkl_dihedral.quadrature import (
    AngularRule,
    SingularRule,
    circle_pairing_numeric,
    f12_reflection_closed,
    f12_reflection_integrals,
    g1_integral,
    g1_integral_closed,
    gaussian_pairing_numeric,
    gram_numeric,
    plane_samples,
    radial_moment,
    spin_normalization,
)
from dunkl_dihedral.scalars import Params

PARAMS = [Params(3, 1, 0.2), Params(5, 2, -0.3), Params(6, 1, 0.1), Params(7, 3, 0.35)]


@pytest.fixture(scope="module")
def rules():
    return {m: AngularRule.build(m) for m in (3, 4, 5, 6, 7)}


class TestRules:
    @pytest.mark.parametrize("level", [8, 10, 12])
    def test_arcsine_mass(self, level):
        rule = SingularRule.build(level)
        assert rule.integrate(lambda u, w: 1 / np.sqrt(u * w)) == pytest.approx(math.pi, abs=1e-12)

    @pytest.mark.parametrize("m", [3, 5, 7])
    def test_angular_weights(self, m):
        rule = AngularRule.build(m)
        assert np.sum(rule.weights) == pytest.approx(math.pi / m, abs=1e-13)
        assert np.all(rule.weights > 0)
        # distance to the far wall is carried by one_minus_u, not by nodes
        assert np.all(rule.u > 0) and np.all(rule.one_minus_u > 0)

    def test_complement_is_exact(self):
        rule = SingularRule.build(6)
        assert np.allclose(rule.u + rule.one_minus_u, 1.0, rtol=0, atol=2.3e-16)
        assert rule.one_minus_u.min() > 0

    def test_bad_level(self):
        with pytest.raises(ParameterError):
            SingularRule.build(0)

    def test_radial_moments(self):
        assert radial_moment(0) == 1
        assert radial_moment(2) == 2
        assert radial_moment(4) == 8
        assert radial_moment(1) == pytest.approx(math.sqrt(math.pi / 2))
        with pytest.raises(ParameterError):
            radial_moment(-1)


class TestGaussianNumeric:
    @pytest.mark.parametrize("p", PARAMS)
    def test_spin(self, p, rules):
        assert gaussian_pairing_numeric(T, T, p, rules[p.m]) == pytest.approx(2, rel=1e-9)
        assert spin_normalization(p, rules[p.m]) == pytest.approx(2, rel=1e-9)

    @pytest.mark.parametrize("p", PARAMS)
    def test_small_p_norms(self, p, rules):
        for fam in (1, 2):
            for n in (1, p.m - p.ell, p.m + 1):
                f = small_p(fam, n, p)
                got = gaussian_pairing_numeric(f, f, p, rules[p.m])
                assert got.real == pytest.approx(gaussian_pairing(f, f, p).real, rel=1e-6)
                assert abs(got.imag) < 1e-6 * abs(got)

    @pytest.mark.parametrize("p", PARAMS[:2])
    def test_parity_vanishing(self, p, rules):
        f, g = Z * T, ZBAR * T
        assert m_parity(f, p) != m_parity(g, p)
        assert abs(gaussian_pairing_numeric(f, g, p, rules[p.m])) < 1e-8

    def test_mixed_degree(self, rules):
        p = Params(5, 2, 0.25)
        f = T + Z * ZBAR * T
        assert gaussian_pairing_numeric(f, f, p, rules[5]) == pytest.approx(gaussian_pairing(f, f, p), rel=1e-8)

    def test_refinement(self):
        p = Params(5, 1, 0.15)
        f = small_p(1, 6, p)
        a = gaussian_pairing_numeric(f, f, p, AngularRule.build(5, 10))
        b = gaussian_pairing_numeric(f, f, p, AngularRule.build(5, 12))
        assert abs(a - b) <= 1e-8 * abs(b)

    def test_gram_numeric_matches_pairwise(self, rules):
        p = Params(4, 1, 0.2)
        polys = [label_poly(lab, p) for lab in harmonic_labels(3, p)]
        G = gram_numeric(polys, p, rules[4])
        samples = plane_samples(p, rules[4])
        for i in (0, 3, 7):
            for j in (0, 3, 7):
                want = gaussian_pairing_numeric(polys[i], polys[j], p, rules[4], samples)
                assert G[i, j] == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_gram_numeric_needs_homogeneous(self, rules):
        with pytest.raises(ParameterError):
            gram_numeric([T + Z * T], Params(3, 1, 0.1), rules[3])

    def test_rule_for_other_m(self, rules):
        with pytest.raises(ParameterError):
            spin_normalization(Params(5, 1, 0.1), rules[3])


class TestCircleNumeric:
    @pytest.mark.parametrize("p", PARAMS)
    def test_values(self, p, rules):
        assert circle_pairing_numeric(T, T, p, rules[p.m]) == pytest.approx(2, rel=1e-9)
        assert circle_pairing_numeric(Z * T, Z * T, p, rules[p.m]) == pytest.approx(2, rel=1e-8)

    def test_parity_selection(self, rules):
        p = Params(3, 1, 0.2)
        assert abs(circle_pairing_numeric(T, TBAR, p, rules[3])) < 1e-9

    @pytest.mark.parametrize("p", PARAMS)
    def test_triangle(self, p, rules):
        # algebraic form, plane quadrature and chamber sum on the harmonic basis
        samples = plane_samples(p, rules[p.m])
        for lab in harmonic_labels(2 * p.m + 2, p)[::5]:
            f = label_poly(lab, p)
            n = f.degree()
            alg = closed_norm(lab, p)
            plane = gaussian_pairing_numeric(f, f, p, rules[p.m], samples).real
            chamber = circle_pairing_numeric(f, f, p, rules[p.m]).real * 2**n * math.factorial(n)
            assert plane == pytest.approx(alg, rel=1e-6)
            assert chamber == pytest.approx(alg, rel=1e-6)
            assert circle_pairing(f, f, p).real * 2**n * math.factorial(n) == pytest.approx(alg, rel=1e-9)

    def test_input_checks(self, rules):
        p = Params(3, 1, 0.2)
        with pytest.raises(ParameterError):
            circle_pairing_numeric(T + Z * T, T, p, rules[3])
        with pytest.raises(ParameterError):
            circle_pairing_numeric(Z * T, T, p, rules[3])
        assert circle_pairing_numeric(VectorPoly.zero(), T, p, rules[3]) == 0


class TestSingularIntegrals:
    def test_g1_kappa_zero(self):
        p = Params(5, 1, 0.0)
        want = 2 * math.pi * math.cos(math.pi * p.delta)
        assert g1_integral(p) == pytest.approx(want, rel=1e-12)

    def test_g1_example(self):
        # delta = 0.15 is realised by m = 20, ell = 7
        p = Params(20, 7, 0.2)
        assert p.delta == pytest.approx(0.15)
        want = 2 * math.pi * math.cos(0.15 * math.pi) / math.cos(0.2 * math.pi)
        assert g1_integral_closed(p) == pytest.approx(want)
        assert g1_integral(p) == pytest.approx(want, rel=1e-6)

    @pytest.mark.parametrize("p", PARAMS)
    def test_g1_half_range(self, p):
        assert g1_integral(p, half=True) == pytest.approx(g1_integral(p), rel=1e-8)

    def test_reflection_integrals(self):
        first, second = f12_reflection_integrals(0.2)
        want1 = math.pi / 2 * math.cos(0.2 * math.pi) + math.sin(0.2 * math.pi) / 0.4
        want2 = -math.pi / 2 * math.cos(0.2 * math.pi) + math.sin(0.2 * math.pi) / 0.4
        assert first == pytest.approx(want1, rel=1e-10)
        assert second == pytest.approx(want2, rel=1e-10)
        assert first + second == pytest.approx(math.sin(0.2 * math.pi) / 0.2, rel=1e-10)
        assert f12_reflection_closed(0.2) == pytest.approx((want1, want2))

    @pytest.mark.parametrize("delta", [0.05, 0.3, 0.45])
    def test_reflection_integrals_other_delta(self, delta):
        got = f12_reflection_integrals(delta)
        assert got == pytest.approx(f12_reflection_closed(delta), rel=1e-9)
