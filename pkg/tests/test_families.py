import csv

import numpy as np
import pytest

import quasikit as qk
from quasikit.families import (
    SamplingGrid,
    Tolerances,
    check_morphism,
    joint_modulus_delta,
    uniform_grid,
)


@pytest.fixture
def grid4(m4, rng):
    return SamplingGrid(
        uniform_grid(0.0, 10.0, 11),
        tuple(m4.random_element(rng, 0.4) for _ in range(3)),
        (0, 1, 5),
    )


def circle_wave(circle, m):
    payload = np.zeros(2 * circle.degree_cap + 1, complex)
    payload[circle.degree_cap + m] = 1.0
    return circle.element(payload)


class TestExactHom:
    def test_all_defects_zero(self, m4, grid4):
        F = qk.exact_hom(m4)
        rep = check_morphism(F, grid4)
        assert rep.passed
        for row in rep.rows:
            assert row.defect_star == 0.0
            assert row.defect_scalar == 0.0
            assert row.defect_add == 0.0
            assert row.defect_mul == 0.0

    def test_bound_is_constant_norm(self, m4, grid4):
        F = qk.exact_hom(m4)
        a = grid4.test_elements[0]
        profile = qk.boundedness_profile(F, a, grid4)
        for n, sup in profile.items():
            assert abs(sup - a.seminorm(n)) < 1e-15


class TestCompressionFamily:
    def test_identity_beyond_size(self, rng):
        F = qk.compression_family(8)
        m8 = F.domain
        a = m8.random_element(rng, 0.4)
        b = m8.random_element(rng, 0.4)
        for t in (8.0, 9.5, 20.0):
            assert F(a, t).bit_equal(a)
            assert qk.defect_mul(F, a, b, t, 5) == 0.0
            assert qk.defect_add(F, a, b, t, 5) == 0.0
            assert qk.defect_star(F, a, t, 5) == 0.0

    def test_contractive_bound(self, rng):
        F = qk.compression_family(8)
        a = F.domain.random_element(rng, 0.6)
        grid = SamplingGrid(uniform_grid(0, 12, 13), (a,), (0, 5))
        profile = qk.boundedness_profile(F, a, grid)
        for n, sup in profile.items():
            assert sup <= a.seminorm(n) + 1e-12

    def test_speed_parameter(self, rng):
        slow = qk.compression_family(8, speed=0.5)
        a = slow.domain.random_element(rng, 0.4)
        assert not slow(a, 10.0).bit_equal(a)  # needs t = 16 at half speed
        assert slow(a, 16.0).bit_equal(a)

    def test_weights_continuous_in_t(self, rng):
        F = qk.compression_family(4)
        a = F.domain.random_element(rng, 0.4)
        eps = 1e-9
        jump = (F(a, 2.0 + eps) - F(a, 2.0)).top_norm()
        assert jump <= 1e-7


class TestPerturbedHom:
    def test_star_defect_vanishes_on_hermitian(self, m4, rng):
        F = qk.perturbed_hom(m4, 1.0)
        h = m4.random_selfadjoint(rng, 0.4)
        assert qk.defect_star(F, h, 1.0, 5) <= 1e-14

    def test_mul_defect_rate(self, m4, rng):
        # d(t) = e^{-t} |a^2 a' + a a'^2 - (a a')^2 + e^{-t} a^2 a'^2|
        F = qk.perturbed_hom(m4, 1.0)
        a = m4.random_element(rng, 0.4)
        b = m4.random_element(rng, 0.4)
        ratio = qk.defect_mul(F, a, b, 2.0, 5) / qk.defect_mul(F, a, b, 1.0, 5)
        assert abs(ratio - np.exp(-1)) <= 0.2 * np.exp(-1)

    def test_log_slope(self, m4, rng):
        F = qk.perturbed_hom(m4, 1.0)
        a = m4.random_element(rng, 0.4)
        b = m4.random_element(rng, 0.4)
        ts = np.linspace(1.0, 6.0, 11)
        ds = [qk.defect_mul(F, a, b, t, 5) for t in ts]
        slope = np.polyfit(ts, np.log(ds), 1)[0]
        assert -1.2 <= slope <= -0.8

    def test_closed_form_defect(self, m1):
        # scalar case: the expansion is exact
        F = qk.perturbed_hom(m1, 1.0)
        a = m1.element([[0.3]])
        b = m1.element([[0.2]])
        t = 1.5
        e = np.exp(-t)
        expected = abs(
            e * (0.3**2 * 0.2 + 0.3 * 0.2**2 - (0.3 * 0.2) ** 2)
            + e**2 * 0.3**2 * 0.2**2
        )
        assert abs(qk.defect_mul(F, a, b, t, 5) - expected) < 1e-14

    def test_bounded_profile(self, m4, rng):
        F = qk.perturbed_hom(m4, 1.0)
        a = m4.random_element(rng, 0.4)
        grid = SamplingGrid(uniform_grid(0, 10, 11), (a,), (0, 5))
        profile = qk.boundedness_profile(F, a, grid)
        for n, sup in profile.items():
            assert sup <= a.seminorm(n) + (a * a).seminorm(n) + 1e-12


class TestToeplitzFamily:
    def test_matrix_against_direct_construction(self, circle):
        # independent oracle: build the shift matrix by hand
        F = qk.toeplitz_family(circle, 16)
        f = circle_wave(circle, 1)
        T = F(f, 16.0)
        np.testing.assert_array_equal(T.payload, np.eye(16, k=-1))

    def test_frozen_defect_baseline(self, circle):
        # oracle run at orders 16 and 64 for the symbols e^{+-i theta};
        # the product defect is the rank-one corner compression error, of
        # normalised trace norm exactly 1/order
        fpos = circle_wave(circle, 1)
        fneg = circle_wave(circle, -1)
        values = {}
        for order in (16, 64):
            F = qk.toeplitz_family(circle, order)
            values[order] = qk.defect_mul(F, fpos, fneg, float(order), 0)
        assert values[16] == 0.0625
        assert values[64] == 0.015625
        assert values[64] <= 0.5 * values[16]

    def test_defect_is_corner_projection(self, circle):
        fpos = circle_wave(circle, 1)
        fneg = circle_wave(circle, -1)
        F = qk.toeplitz_family(circle, 16)
        lhs = (F(fpos, 16.0) * F(fneg, 16.0) - F(fpos * fneg, 16.0)).payload
        expected = np.zeros((16, 16), complex)
        expected[0, 0] = -1.0
        np.testing.assert_allclose(lhs, expected, atol=1e-15)

    def test_continuity_between_orders(self, circle):
        F = qk.toeplitz_family(circle, 8)
        f = circle_wave(circle, 1)
        eps = 1e-9
        jump = (F(f, 3.0 + eps) - F(f, 3.0)).seminorm(1)
        assert jump <= 1e-7

    def test_hermitian_symbol_gives_hermitian_matrix(self, circle, rng):
        F = qk.toeplitz_family(circle, 8)
        h = circle.random_selfadjoint(rng, 0.4)
        T = F(h, 8.0)
        assert (T - T.star()).top_norm() <= 1e-12


class TestHomotopyFamily:
    def test_endpoints_bit_identical(self, m4, rng):
        F = qk.exact_hom(m4)
        G = qk.perturbed_hom(m4, 1.0)
        h = qk.homotopy_family(F, G, grid_size=7)
        pa = h.codomain
        a = m4.random_element(rng, 0.4)
        for t in (0.0, 1.5, 4.0):
            x = h(a, t)
            assert pa.point(x, 0).bit_equal(F(a, t))
            assert pa.point(x, 6).bit_equal(G(a, t))

    def test_custom_blend(self, m4, rng):
        F = qk.exact_hom(m4)
        G = qk.perturbed_hom(m4, 1.0)
        h = qk.homotopy_family(F, G, blend=lambda p: p**2, grid_size=5)
        a = m4.random_element(rng, 0.4)
        x = h(a, 1.0)
        mid = h.codomain.point(x, 2)  # p = 1/2, weight 1/4
        expected = 0.75 * F(a, 1.0) + 0.25 * G(a, 1.0)
        assert (mid - expected).top_norm() <= 1e-15


class TestZeroPreservation:
    def test_all_builtins_fix_zero(self, m4, circle):
        families = [
            qk.exact_hom(m4),
            qk.compression_family(8),
            qk.perturbed_hom(m4, 1.0),
            qk.toeplitz_family(circle, 8),
            qk.homotopy_family(qk.exact_hom(m4), qk.perturbed_hom(m4, 1.0)),
        ]
        for F in families:
            for t in (0.0, 0.7, 3.0, 12.0):
                assert F(F.domain.zero(), t).top_norm() == 0.0


class TestModulus:
    def test_exact_hom_first_rung(self, m4, grid4, rng):
        F = qk.exact_hom(m4)
        entry = qk.asymptotic_continuity_modulus(F, grid4.test_elements[0], 0.1, grid4, rng)
        assert entry.found
        assert entry.eta == 0.1  # isometry: eta = eps works immediately
        assert entry.start_time == 0.0

    def test_compression_contraction(self, rng):
        F = qk.compression_family(8)
        a = F.domain.random_element(rng, 0.4)
        grid = SamplingGrid(uniform_grid(0, 10, 11), (a,), (0, 5))
        entry = qk.asymptotic_continuity_modulus(F, a, 0.1, grid, rng)
        assert entry.found
        assert entry.eta == 0.1

    def test_joint_delta(self, m4, grid4, rng):
        F = qk.perturbed_hom(m4, 1.0)
        res = joint_modulus_delta(
            F, grid4.test_elements[0], 0.25, 2.0, grid4, rng, eta=0.05
        )
        assert res["found"]
        assert res["delta"] > 0.0


class TestReport:
    def test_csv_columns(self, m4, grid4, tmp_path):
        rep = check_morphism(qk.exact_hom(m4), grid4)
        out = tmp_path / "report.csv"
        rep.to_csv(out)
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == [
            "family_id", "element_id", "t", "level",
            "defect_star", "defect_scalar", "defect_add", "defect_mul", "bound",
        ]
        assert len(rows) == 1 + 3 * 11 * 3  # elements x t x levels

    def test_summary_fields(self, m4, grid4):
        rep = check_morphism(qk.perturbed_hom(m4, 1.0), grid4)
        s = rep.summary
        assert set(s["decay_ok"]) == {"star", "scalar", "add", "mul"}
        assert s["bounded"]
        assert s["zero_image_max"] == 0.0
        assert rep.passed

    def test_decay_flag_fails_for_growth(self, m4, grid4):
        # a family whose product defect grows with t must be flagged
        grow = qk.AsymptoticFamily(
            "grow", m4, m4, lambda a, t: a + (0.1 * t) * (a * a)
        )
        rep = check_morphism(grow, grid4, Tolerances(defect=1e-9))
        assert not rep.summary["decay_ok"]["mul"]
        assert not rep.passed

    def test_empty_grid_passes(self, m4):
        grid = SamplingGrid((0.0, 1.0), (), (0,))
        rep = check_morphism(qk.exact_hom(m4), grid)
        assert rep.passed and rep.summary.get("empty")

    def test_jobs_parallel_same_rows(self, m4, grid4):
        F = qk.perturbed_hom(m4, 1.0)
        serial = check_morphism(F, grid4, modulus_epsilon=None)
        parallel = check_morphism(F, grid4, modulus_epsilon=None, jobs=4)
        assert [r.__dict__ for r in serial.rows] == [
            r.__dict__ for r in parallel.rows
        ]


class TestGridValidation:
    def test_strictly_increasing(self, m4, rng):
        with pytest.raises(ValueError):
            SamplingGrid((0.0, 0.0, 1.0), (m4.random_element(rng),), (0,))

    def test_non_empty(self, m4, rng):
        with pytest.raises(ValueError):
            SamplingGrid((), (m4.random_element(rng),), (0,))

    def test_family_rejects_foreign_elements(self, m4, m8, rng):
        F = qk.exact_hom(m4)
        with pytest.raises(qk.QuasikitError):
            F(m8.random_element(rng), 1.0)

    def test_family_rejects_negative_time(self, m4, rng):
        F = qk.exact_hom(m4)
        with pytest.raises(ValueError):
            F(m4.random_element(rng), -1.0)
