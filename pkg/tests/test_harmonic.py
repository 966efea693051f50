from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dunkl_dihedral import forms
from dunkl_dihedral.dunkl import apply_D, apply_Dbar, laplacian
from dunkl_dihedral.exceptions import ParameterError
from dunkl_dihedral.harmonic import (
    HarmonicLabel,
    big_p,
    classify,
    degree_basis,
    degree_labels,
    divide_by_z,
    eval_at_one,
    exceptional_k,
    f_basis,
    f_basis_from_big_p,
    harmonic_labels,
    is_exceptional,
    q_at_one,
    q_coeff_closed,
    q_poly,
    small_p,
)
from dunkl_dihedral.polyalg import TBAR, Z, ZBAR, T, VectorPoly, distance, evaluate, sigma0
from dunkl_dihedral.scalars import Params
from oracles import big_p_by_recurrence, q_coeff_mpmath, small_p_by_rules, sweep_params

SWEEP = sweep_params()
kappas = st.floats(-0.49, 0.49)
lams = st.sampled_from([1 / 3, 2 / 3, 0.2, 0.4, 0.6, 0.8, 1 / 7, 6 / 7])


def rel(f: VectorPoly, g: VectorPoly) -> float:
    return distance(f, g) / max(f.max_abs(), g.max_abs(), 1e-300)


class TestQ:
    def test_base_cases(self):
        assert q_poly(1, 0, 0.3, 0.5).coef(0, 0) == 1
        assert q_poly(2, 0, 0.3, 0.5).coef(0, 0) == pytest.approx(0.6)

    def test_first_step(self):
        k, lam = 0.3, 0.4
        q = q_poly(1, 1, k, lam)
        assert q.coef(1, 0) == 1
        assert q.coef(0, 1) == pytest.approx(k**2 / (lam * (lam + 1)))

    def test_frozen_coefficient(self):
        # exact rational recurrence at kappa = 1/5, lambda = 2/3
        want = Fraction(2007, 68750)
        assert q_poly(1, 3, 0.2, 2 / 3).coef(1, 2) == pytest.approx(float(want), rel=1e-14)
        assert q_coeff_closed(1, 3, 2, 0.2, 2 / 3) == pytest.approx(float(want), rel=1e-14)

    @given(kappas, lams, st.integers(0, 12))
    def test_recurrence_equals_closed_form(self, k, lam, n):
        for kind in (1, 2):
            q = q_poly(kind, n, k, lam)
            for j in range(n + 1):
                closed = q_coeff_closed(kind, n, j, k, lam)
                assert q.coef(n - j, j).real == pytest.approx(closed, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("kind", [1, 2])
    def test_closed_form_against_mpmath(self, kind):
        for n in range(0, 8):
            for j in range(n + 1):
                got = q_coeff_closed(kind, n, j, 0.31, 0.45)
                assert got == pytest.approx(q_coeff_mpmath(kind, n, j, 0.31, 0.45), rel=1e-12, abs=1e-15)

    @given(kappas, lams, st.integers(0, 12))
    def test_value_at_one(self, k, lam, n):
        for kind in (1, 2):
            total = sum(c for _, c in q_poly(kind, n, k, lam).items()).real
            assert total == pytest.approx(q_at_one(kind, n, k, lam), rel=1e-11, abs=1e-12)

    @given(lams, st.integers(0, 10))
    def test_value_at_one_kappa_zero(self, lam, n):
        assert q_at_one(1, n, 0.0, lam) == pytest.approx(1.0)
        assert q_at_one(2, n, 0.0, lam) == 0.0

    def test_q_at_one_n0(self):
        k, lam = 0.2, 0.7
        assert q_at_one(1, 0, k, lam) == pytest.approx(((lam + k) + (lam - k)) / (2 * lam))

    def test_bad_lambda(self):
        with pytest.raises(ParameterError):
            q_poly(1, 2, 0.1, 0.0)


class TestBigP:
    @pytest.mark.parametrize("p", [Params(3, 1, 0.25), Params(5, 2, -0.3), Params(7, 3, 0.1)])
    def test_base_cases(self, p):
        m, ell, k = p.m, p.ell, p.kappa
        want1 = VectorPoly.monomial(m - ell + 1, 0, "t") + VectorPoly.monomial(1, m - ell, "tbar", m * k / (m - ell))
        want2 = VectorPoly.monomial(ell + 1, 0, "tbar") + VectorPoly.monomial(1, ell, "t", m * k / ell)
        assert rel(big_p(1, 0, p), want1) < 1e-15
        assert rel(big_p(2, 0, p), want2) < 1e-15

    @pytest.mark.parametrize("p", SWEEP[::3])
    def test_q_assembly_matches_recurrence(self, p):
        for fam in (1, 2):
            for k in range(4):
                assert rel(big_p(fam, k, p), big_p_by_recurrence(fam, k, p)) < 1e-13

    @pytest.mark.parametrize("p", SWEEP[::2])
    def test_harmonic(self, p):
        for fam in (1, 2):
            for k in range(3):
                P = big_p(fam, k, p)
                assert laplacian(P, p).max_abs() <= 1e-10 * P.coef_norm()

    def test_degrees(self):
        p = Params(7, 2, 0.2)
        for k in range(3):
            assert big_p(1, k, p).degree() == 7 * (k + 1) - 2 + 1
            assert big_p(2, k, p).degree() == 7 * k + 2 + 1


class TestSmallP:
    @pytest.mark.parametrize("p", SWEEP)
    def test_closed_classification_matches_rules(self, p):
        for fam in (1, 2):
            for n in range(1, 2 * p.m + 3):
                assert rel(small_p(fam, n, p), small_p_by_rules(fam, n, p)) < 1e-13

    def test_examples(self):
        p = Params(5, 2, 0.3)
        assert small_p(1, 1, p) == Z * T
        for n in range(1, 3):
            assert small_p(2, n, p) == VectorPoly.monomial(n, 0, "tbar")
        q = Params(3, 1, 0.25)
        assert small_p(1, 3, q) == big_p(1, 0, q)

    @pytest.mark.parametrize("p", SWEEP[1::2])
    def test_harmonic_with_images(self, p):
        for fam in (1, 2):
            for n in range(1, 2 * p.m + 3):
                for f in (small_p(fam, n, p), sigma0(small_p(fam, n, p))):
                    assert laplacian(f, p).max_abs() <= 1e-10 * f.coef_norm()

    @pytest.mark.parametrize("p", SWEEP[::4])
    def test_leading_terms(self, p):
        for n in range(1, 2 * p.m + 3):
            assert small_p(1, n, p).component("t").coef(n, 0) == 1
            assert small_p(2, n, p).component("tbar").coef(n, 0) == 1

    def test_classification_ranges(self):
        p = Params(5, 2)
        assert classify(1, 3, p) == (-1, 3)
        assert classify(1, 4, p) == (0, 0)
        assert classify(2, 2, p) == (-1, 2)
        assert classify(2, 3 + 5 * 2 + 4, p) == (2, 4)


class TestExceptional:
    def test_detection(self):
        p = Params(3, 1, 0.2)
        assert [n for n in range(1, 9) if is_exceptional(1, n, p)] == [2, 5, 8]
        assert [n for n in range(1, 9) if is_exceptional(2, n, p)] == [1, 4, 7]
        assert exceptional_k(1, 2, p) == -1 and exceptional_k(1, 5, p) == 0
        with pytest.raises(ParameterError):
            exceptional_k(1, 3, p)

    def test_f_basis_edge(self):
        p = Params(5, 2, 0.3)
        e = 3
        want = VectorPoly.monomial(e, 0, "t") + VectorPoly.monomial(0, e, "tbar", 5 * 0.3 / e)
        assert rel(f_basis(1, e, p), want) < 1e-15

    @pytest.mark.parametrize("p", SWEEP)
    def test_f_basis_two_routes_and_kernel(self, p):
        for fam in (1, 2):
            for n in range(1, 2 * p.m + 3):
                if not is_exceptional(fam, n, p):
                    continue
                f = f_basis(fam, n, p)
                assert rel(f, f_basis_from_big_p(fam, n, p)) < 1e-13
                assert apply_Dbar(f, p).max_abs() <= 1e-12 * f.max_abs()

    def test_divide_by_z(self):
        assert divide_by_z(Z * Z * ZBAR * T) == Z * ZBAR * T
        with pytest.raises(ParameterError):
            divide_by_z(ZBAR * T)


class TestEvaluation:
    @pytest.mark.parametrize("p", SWEEP)
    def test_matches_polynomial_value(self, p):
        # evaluation uses 1 <= r <= m, construction uses 0 <= r < m
        for fam in (1, 2):
            for n in range(1, 3 * p.m + 2):
                got = np.array(eval_at_one(fam, n, p))
                want = np.array(evaluate(small_p(fam, n, p), 1.0))
                assert np.allclose(got, want, rtol=1e-12, atol=1e-13)

    def test_kappa_zero(self):
        p = Params(7, 2, 0.0)
        for n in range(1, 20):
            assert eval_at_one(1, n, p) == (1, 0)
            assert eval_at_one(2, n, p) == (0, 1)

    def test_requires_positive_degree(self):
        with pytest.raises(ParameterError):
            eval_at_one(1, 0, Params(3, 1))


class TestDegreeBasis:
    def test_generic_degree_one(self):
        p = Params(5, 2, 0.2)
        assert degree_basis(1, p) == [Z * T, ZBAR * TBAR, Z * TBAR, ZBAR * T]

    def test_degree_zero(self):
        assert degree_basis(0, Params(3, 1, 0.1)) == [T, TBAR]

    def test_exceptional_swap(self):
        p = Params(3, 1, 0.2)
        names = [lab.name for lab in degree_labels(2, p)]
        assert names[:2] == ["p1[2]+s0p1[2]", "p1[2]-s0p1[2]"]
        assert [lab.combo for lab in degree_labels(2, p, "raw")] == [None] * 4

    @pytest.mark.parametrize("p", SWEEP[::2])
    def test_orthogonal_style_is_diagonal(self, p):
        for n in range(0, 2 * p.m + 3):
            g = forms.label_gram(degree_labels(n, p), p)
            assert g.offdiagonal_ratio() <= 1e-9

    def test_label_validation(self):
        with pytest.raises(ParameterError):
            HarmonicLabel(3, 1)
        with pytest.raises(ParameterError):
            degree_labels(1, Params(3, 1), "weird")

    def test_label_count(self):
        p = Params(4, 1, 0.1)
        assert len(harmonic_labels(5, p)) == 2 + 4 * 5

    def test_D_lowers_through_basis(self):
        # D^n p_n = n! t for family 1 in the trivial range
        p = Params(7, 2, 0.3)
        f = small_p(1, 4, p)
        for _ in range(4):
            f = apply_D(f, p)
        assert rel(f, 24 * T) < 1e-14
