import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dunkl_dihedral.exceptions import ParameterError
from dunkl_dihedral.polyalg import (
    TBAR,
    Z,
    ZBAR,
    GroupElement,
    ScalarPoly,
    T,
    VectorPoly,
    apply_group,
    distance,
    evaluate,
    group_elements,
    homogeneous_components,
    identity,
    m_parity,
    parity_components,
    random_vector_poly,
    sigma0,
    star,
    tau_matrix,
    to_real_components,
)
from dunkl_dihedral.scalars import Params

seeds = st.integers(0, 2**32 - 1)


def rand_poly(seed, degree=5):
    return random_vector_poly(np.random.default_rng(seed), degree)


class TestScalarPoly:
    def test_arithmetic(self):
        p = 2 * Z * Z * ZBAR + 3
        assert p.coef(2, 1) == 2 and p.coef(0, 0) == 3
        assert (p - p).is_zero()
        assert p.degree() == 3

    def test_star_examples(self):
        assert star(1j * Z) == -1j * ZBAR
        p = 2 * Z * Z * ZBAR + 3
        assert star(p) == 2 * Z * ZBAR * ZBAR + 3

    @given(seeds)
    def test_star_involution(self, seed):
        p = rand_poly(seed).comp_t
        assert star(star(p)) == p

    def test_derivatives(self):
        p = Z * Z * Z * ZBAR
        assert p.dz() == 3 * Z * Z * ZBAR
        assert p.dzbar() == Z * Z * Z

    def test_evaluation_vectorized(self):
        p = Z * ZBAR + 2 * Z
        z = np.array([1 + 1j, -2.0, 0.5j])
        assert np.allclose(p(z), np.abs(z) ** 2 + 2 * z)

    def test_small_terms_dropped(self):
        p = ScalarPoly({(1, 0): 1e-20, (0, 0): 1.0})
        assert p == ScalarPoly.constant(1.0)

    def test_exponent_bounds(self):
        with pytest.raises(OverflowError):
            ScalarPoly({(-1, 0): 1.0})
        with pytest.raises(OverflowError):
            ScalarPoly.monomial(2**15 + 1, 0) * ScalarPoly.monomial(2**15, 0)


class TestVectorPoly:
    def test_evaluate_examples(self):
        assert evaluate(Z * T, 2 + 1j) == pytest.approx((2 + 1j, 0))
        assert evaluate(T + TBAR, 0.3 - 2j) == pytest.approx((1, 1))
        assert evaluate(Z * ZBAR * T, 1 + 1j) == pytest.approx((2, 0))

    def test_records_round_trip(self):
        f = rand_poly(7, 6)
        text = json.dumps(f.to_records())
        assert VectorPoly.from_records(json.loads(text)) == f

    def test_records_schema(self):
        rec = (Z * T).to_records()
        assert rec == [{"a": 1, "b": 0, "component": "t", "re": 1.0, "im": 0.0}]

    def test_term_order(self):
        f = Z * TBAR + ZBAR * T + Z * T + T
        keys = [(a, b, c) for a, b, c, _ in f.terms()]
        assert keys == sorted(keys, key=lambda k: (k[0], k[1], k[2] != "t"))

    def test_homogeneous_components(self):
        parts = homogeneous_components(Z * T + TBAR)
        assert [d for d, _ in parts] == [0, 1]
        assert parts[0][1] == TBAR and parts[1][1] == Z * T
        assert homogeneous_components(VectorPoly.zero()) == []
        assert len(homogeneous_components(Z * Z * T)) == 1

    @given(seeds)
    def test_homogeneous_parts_sum_back(self, seed):
        f = rand_poly(seed)
        total = VectorPoly.zero()
        for d, part in homogeneous_components(f):
            assert part.is_homogeneous() and part.degree() == d
            total = total + part
        assert distance(total, f) == 0

    def test_real_components(self):
        assert np.allclose(to_real_components((1, 1)), (2, 0))
        assert np.allclose(to_real_components((1, -1)), (0, 2j))
        assert np.allclose(to_real_components((1, 0)), (1, 1j))


class TestGroup:
    @pytest.mark.parametrize("m", [3, 4, 5, 7])
    def test_group_closure_and_order(self, m):
        elems = group_elements(m)
        assert len(set(elems)) == 2 * m
        for a in elems:
            assert a * a.inverse() == identity(m)
            for b in elems:
                assert a * b in elems

    @pytest.mark.parametrize("m", [3, 5])
    def test_point_action_composes(self, m):
        z = 0.7 + 0.3j
        for a in group_elements(m):
            for b in group_elements(m):
                # the product acts as: first b, then a on polynomials, i.e. x -> (x a) b
                assert (a * b).act_point(z) == pytest.approx(b.act_point(a.act_point(z)))

    @pytest.mark.parametrize("m, ell", [(3, 1), (5, 2), (7, 3)])
    def test_action_is_homomorphism(self, m, ell):
        p = Params(m, ell, 0.1)
        f = rand_poly(3, 4)
        for a in group_elements(m):
            for b in group_elements(m):
                lhs = apply_group(a * b, f, p)
                rhs = apply_group(a, apply_group(b, f, p), p)
                assert distance(lhs, rhs) < 1e-12

    def test_sigma0_examples(self):
        assert sigma0(Z * T) == ZBAR * TBAR
        assert sigma0(Z * Z * ZBAR * TBAR) == Z * ZBAR * ZBAR * T

    @given(seeds)
    def test_sigma0_involution(self, seed):
        f = rand_poly(seed)
        assert sigma0(sigma0(f)) == f

    def test_sigma0_matches_group(self):
        p = Params(5, 2, 0.2)
        f = rand_poly(11)
        assert distance(apply_group(GroupElement("reflection", 0, 5), f, p), sigma0(f)) < 1e-15

    def test_identity_acts_trivially(self):
        p = Params(5, 1)
        f = rand_poly(5)
        assert apply_group(GroupElement("rotation", 0, 5), f, p) == f

    def test_reflection_on_t(self):
        p = Params(4, 1)
        g = apply_group(GroupElement("reflection", 1, 4), T, p)
        assert distance(g, 1j * TBAR) < 1e-15

    @pytest.mark.parametrize("m, ell", [(3, 1), (5, 2), (6, 1)])
    def test_tau_is_unitary(self, m, ell):
        p = Params(m, ell)
        for w in group_elements(m):
            t = tau_matrix(w, p)
            assert np.allclose(t @ t.conj().T, np.eye(2), atol=1e-15)

    def test_bad_element(self):
        with pytest.raises(ParameterError):
            GroupElement("shear", 0, 3)


class TestParity:
    def test_examples(self):
        p = Params(5, 2)
        assert m_parity(T, p) == 2
        assert m_parity(TBAR, p) == 3
        assert m_parity(Z * T + ZBAR * T, p) is None

    @given(seeds)
    def test_components_partition(self, seed):
        p = Params(7, 3)
        f = rand_poly(seed)
        parts = parity_components(f, p)
        total = VectorPoly.zero()
        for r, part in parts.items():
            assert m_parity(part, p) == r
            total = total + part
        assert distance(total, f) < 1e-15

    @given(seeds)
    def test_rotations_keep_reflections_negate(self, seed):
        p = Params(5, 1)
        f = random_vector_poly(np.random.default_rng(seed), 4, homogeneous=True)
        for r, part in parity_components(f, p).items():
            for w in group_elements(5):
                image = apply_group(w, part, p)
                want = (-r) % 5 if w.is_reflection else r
                assert m_parity(image, p) == want
