import numpy as np
import pytest

import quasikit as qk
from quasikit.algebra import LevelRangeError, NotQuasiInvertibleError, OwnerMismatchError

from conftest import scalar


class TestQuasiProduct:
    def test_zero_is_identity(self, m4, rng):
        a = m4.random_element(rng, 0.5)
        z = m4.zero()
        assert qk.quasi_product(a, z).bit_equal(a)
        assert qk.quasi_product(z, a).bit_equal(a)
        assert qk.quasi_product(z, z).bit_equal(z)

    def test_scalar_example(self, m1):
        # 1 . 2 = 1 + 2 + 1*2
        out = qk.quasi_product(scalar(m1, 1), scalar(m1, 2))
        assert out.payload[0, 0] == 5

    def test_matrix_example(self):
        m2 = qk.matrix_algebra(2)
        a = m2.element([[0, 1], [0, 0]])
        b = m2.element([[0, 0], [1, 0]])
        out = qk.quasi_product(a, b)
        np.testing.assert_allclose(out.payload, [[1, 1], [1, 0]])

    def test_associativity(self, m4, rng):
        for _ in range(50):
            a, b, c = (m4.random_element(rng, 0.5) for _ in range(3))
            lhs = qk.quasi_product(qk.quasi_product(a, b), c)
            rhs = qk.quasi_product(a, qk.quasi_product(b, c))
            assert (lhs - rhs).top_norm() <= 1e-12

    def test_unitization_consistency(self, m4, rng):
        # (1+a)(1+b) = 1 + a.b, checked on explicitly augmented matrices
        a = m4.random_element(rng, 0.5)
        b = m4.random_element(rng, 0.5)
        one = np.eye(4)
        lhs = (one + a.payload) @ (one + b.payload)
        rhs = one + qk.quasi_product(a, b).payload
        np.testing.assert_allclose(lhs, rhs, atol=1e-14)

    def test_anti_multiplicative_star(self, m4, rng):
        a = m4.random_element(rng, 0.5)
        b = m4.random_element(rng, 0.5)
        lhs = qk.quasi_product(a, b).star()
        rhs = qk.quasi_product(b.star(), a.star())
        assert (lhs - rhs).top_norm() <= 1e-14

    def test_owner_mismatch(self, m4, m8, rng):
        with pytest.raises(OwnerMismatchError):
            qk.quasi_product(m4.random_element(rng), m8.random_element(rng))


class TestQuasiInverse:
    def test_zero(self, m4):
        assert qk.quasi_inverse(m4.zero()).bit_equal(m4.zero())

    def test_scalar_oracle(self, m1):
        # (1+a)^{-1} - 1 at a=1 is -1/2
        out = qk.quasi_inverse(scalar(m1, 1))
        assert abs(out.payload[0, 0] - (-0.5)) < 1e-15

    def test_nilpotent(self):
        # (1+a)^{-1} = 1 - a for nilpotent a
        m2 = qk.matrix_algebra(2)
        a = m2.element([[0, 1], [0, 0]])
        out = qk.quasi_inverse(a)
        np.testing.assert_allclose(out.payload, [[0, -1], [0, 0]], atol=1e-15)

    def test_two_sided(self, m4, rng):
        for _ in range(50):
            a = m4.random_element(rng, 0.6)
            ai = qk.quasi_inverse(a)
            assert qk.quasi_product(a, ai).top_norm() <= 1e-12
            assert qk.quasi_product(ai, a).top_norm() <= 1e-12

    def test_group_antihomomorphism(self, m4, rng):
        for _ in range(50):
            a = m4.random_element(rng, 0.5)
            b = m4.random_element(rng, 0.5)
            lhs = qk.quasi_inverse(qk.quasi_product(a, b))
            rhs = qk.quasi_product(qk.quasi_inverse(b), qk.quasi_inverse(a))
            assert (lhs - rhs).top_norm() <= 1e-10

    def test_neumann_cross_check(self, m4, rng):
        a = m4.random_element(rng, 0.3)
        direct = qk.quasi_inverse(a)
        series = qk.quasi_inverse_neumann(a, terms=80)
        assert (direct - series).top_norm() <= 1e-13

    def test_singular_raises(self, m1):
        with pytest.raises(NotQuasiInvertibleError):
            qk.quasi_inverse(scalar(m1, -1))

    def test_circle_pointwise(self, circle, rng):
        a = circle.random_element(rng, 0.1, degree=1)
        ai = qk.quasi_inverse(a)
        assert qk.quasi_product(a, ai).seminorm(0) <= 1e-10

    def test_circle_singular_raises(self, circle):
        payload = np.zeros(17, complex)
        payload[8] = -1.0  # constant function -1, so 1 + f = 0
        with pytest.raises(NotQuasiInvertibleError):
            qk.quasi_inverse(circle.element(payload))


class TestQuasiUnitary:
    def test_zero(self, m4):
        ok, defect = qk.is_quasi_unitary(m4.zero())
        assert ok and defect == 0.0

    def test_scalar_minus_two(self, m1):
        # 1 + u = -1 has modulus one
        ok, defect = qk.is_quasi_unitary(scalar(m1, -2))
        assert ok and defect <= 1e-15

    def test_scalar_one_fails(self, m1):
        ok, defect = qk.is_quasi_unitary(scalar(m1, 1))
        assert not ok
        assert abs(defect - 3.0) < 1e-15

    def test_unitary_shift(self, m4, rng):
        w = m4.random_unitary_payload(rng)
        u = m4.element(w - np.eye(4))
        ok, defect = qk.is_quasi_unitary(u)
        assert ok and defect <= 1e-14


class TestSeminormContracts:
    @pytest.mark.parametrize("kind", ["matrix", "circle", "path", "tracial"])
    def test_contracts_sampled(self, kind, rng, m4, circle):
        if kind == "matrix":
            alg = m4
        elif kind == "circle":
            alg = circle
        elif kind == "tracial":
            alg = qk.matrix_algebra(6, tracial_level0=True)
        else:
            alg = qk.path_algebra(m4, 5)
        count = alg.seminorms.count
        for _ in range(200):
            a = alg.random_element(rng, 0.6)
            b = alg.random_element(rng, 0.6)
            lam = complex(rng.standard_normal(), rng.standard_normal())
            for n in range(count - 1):
                assert a.seminorm(n) <= a.seminorm(n + 1) + 1e-12
                assert a.star().seminorm(n) <= a.seminorm(n + 1) + 1e-12
                assert (a * b).seminorm(n) <= (
                    a.seminorm(n + 1) * b.seminorm(n + 1) + 1e-12
                )
            assert abs((lam * a).seminorm(0) - abs(lam) * a.seminorm(0)) <= 1e-10
            assert (a + b).seminorm(0) <= a.seminorm(0) + b.seminorm(0) + 1e-12

    def test_level_range(self, m4, rng):
        a = m4.random_element(rng)
        with pytest.raises(LevelRangeError):
            a.seminorm(99)


class TestStarProductMargin:
    def test_equal_arguments(self, m4, rng):
        a = m4.random_element(rng, 0.5)
        assert qk.star_product_margin(a, a, 0) >= 0.0

    def test_zero(self, m4):
        assert qk.star_product_margin(m4.zero(), m4.zero(), 0) == 0.0

    def test_sampled_matrix(self, rng):
        m3 = qk.matrix_algebra(3)
        for _ in range(1000):
            b = m3.random_element(rng, 0.8)
            c = m3.random_element(rng, 0.8)
            assert qk.star_product_margin(b, c, 0) >= -1e-12

    def test_sampled_circle(self, circle, rng):
        for _ in range(300):
            b = circle.random_element(rng, 0.5)
            c = circle.random_element(rng, 0.5)
            for n in range(4):
                assert qk.star_product_margin(b, c, n) >= -1e-12

    def test_level_precondition(self, m4, rng):
        a = m4.random_element(rng)
        with pytest.raises(LevelRangeError):
            qk.star_product_margin(a, a, 4)  # needs level 6 of 6


class TestCanonicalDistance:
    def test_self_distance_zero(self, m4, rng):
        a = m4.random_element(rng)
        assert qk.canonical_distance(a, a) == 0.0

    def test_capped_series(self, m1):
        # |0 - 3| = 3 > 1 at every level, so each level contributes 2^{-n}
        d = qk.canonical_distance(scalar(m1, 0), scalar(m1, 3))
        expected = sum(2.0**-n for n in range(m1.seminorms.count))
        assert abs(d - expected) < 1e-15

    def test_translation_invariance(self, m4, rng):
        a, b, c = (m4.random_element(rng) for _ in range(3))
        d1 = qk.canonical_distance(a, b)
        d2 = qk.canonical_distance(a + c, b + c)
        assert abs(d1 - d2) <= 1e-12

    def test_symmetry(self, m4, rng):
        a, b = m4.random_element(rng), m4.random_element(rng)
        assert qk.canonical_distance(a, b) == qk.canonical_distance(b, a)


class TestSerialization:
    @pytest.mark.parametrize("kind", ["matrix", "circle", "path"])
    def test_round_trip(self, kind, rng, m4, circle):
        alg = {"matrix": m4, "circle": circle}.get(kind) or qk.path_algebra(m4, 5)
        a = alg.random_element(rng, 0.7)
        doc = qk.element_to_json(a)
        assert doc["algebra"] == alg.instance_id
        back = qk.element_from_json(alg, doc)
        assert back.bit_equal(a)

    def test_wrong_algebra_rejected(self, m4, m8, rng):
        doc = qk.element_to_json(m4.random_element(rng))
        with pytest.raises(OwnerMismatchError):
            qk.element_from_json(m8, doc)


class TestCircleInstance:
    def test_star_is_conjugate(self, circle, rng):
        f = circle.random_element(rng, 0.5)
        vals = circle.values(f.payload)
        star_vals = circle.values(f.star().payload)
        np.testing.assert_allclose(star_vals, np.conj(vals), atol=1e-12)

    def test_product_is_pointwise(self, circle, rng):
        # degrees <= cap/2, so the convolution stays exact
        f = circle.random_element(rng, 0.5, degree=3)
        g = circle.random_element(rng, 0.5, degree=3)
        lhs = circle.values((f * g).payload)
        rhs = circle.values(f.payload) * circle.values(g.payload)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_derivative_weighting(self, circle):
        # |e^{i m theta}|_n = 2^n m^n for m >= 1
        payload = np.zeros(17, complex)
        payload[8 + 2] = 1.0
        f = circle.element(payload)
        assert abs(f.seminorm(0) - 1.0) < 1e-12
        assert abs(f.seminorm(1) - 2.0 * 2.0) < 1e-12
        assert abs(f.seminorm(2) - 4.0 * 4.0) < 1e-12


class TestPathInstance:
    def test_point_extraction(self, m4, rng):
        pa = qk.path_algebra(m4, 5)
        inner = [m4.random_element(rng, 0.4) for _ in range(5)]
        e = pa.from_points(inner)
        for i, x in enumerate(inner):
            assert pa.point(e, i).bit_equal(x)

    def test_sup_seminorm(self, m4, rng):
        pa = qk.path_algebra(m4, 5)
        e = pa.random_element(rng, 0.4)
        sup = max(pa.point(e, i).seminorm(0) for i in range(5))
        assert abs(e.seminorm(0) - sup) < 1e-14

    def test_ops_pointwise(self, m4, rng):
        pa = qk.path_algebra(m4, 4)
        x, y = pa.random_element(rng, 0.4), pa.random_element(rng, 0.4)
        prod = x * y
        for i in range(4):
            assert pa.point(prod, i).bit_equal(pa.point(x, i) * pa.point(y, i))
        star = x.star()
        for i in range(4):
            assert pa.point(star, i).bit_equal(pa.point(x, i).star())
