"""Benchmark generators: structure, coefficients, and reproducibility."""

from fractions import Fraction

import pytest

from polynewt import bench
from polynewt.xprec import precision_level

DD = precision_level("dd", cplx=False)
CDD = precision_level("dd", cplx=True)


class TestHEquation:
    def test_equation_structure(self):
        n = 5
        sys_ = bench.chandrasekhar_system(n, DD)
        assert sys_.n_eqs == n and sys_.n_vars == n
        for i, poly in enumerate(sys_.polys):
            # linear diagonal term, constant, and n quadratic couplings
            assert len(poly) == n + 2
            degrees = sorted(m.degree() for m in poly)
            assert degrees == [0, 1] + [2] * n
            for m in poly:
                if m.degree() == 2:
                    assert any(var == i for var, _ in m.exponents)

    def test_linear_and_constant_coefficients(self):
        n = 4
        sys_ = bench.chandrasekhar_system(n, DD)
        for i, poly in enumerate(sys_.polys):
            by_deg = {m.degree(): m for m in poly if m.degree() < 2}
            assert float(by_deg[1].coeff) == 2 * n
            assert float(by_deg[0].coeff) == -2 * n

    def test_quadratic_weights(self):
        n = 6
        c = Fraction(33, 64)
        sys_ = bench.chandrasekhar_system(n, DD, c)
        i = 3   # equation index (1-based in the weight formula)
        poly = sys_.polys[i - 1]
        for m in poly:
            if m.degree() != 2:
                continue
            others = [v for v, _ in m.exponents if v != i - 1]
            j = others[0] if others else i - 1
            want = -float(c) * i / (i + j)
            assert float(m.coeff) == pytest.approx(want, rel=1e-15)

    def test_start_point_is_all_ones(self):
        start = bench.chandrasekhar_start(3, CDD)
        assert all(float(x.re) == 1.0 and float(x.im) == 0.0 for x in start)

    def test_rejects_degenerate_size(self):
        with pytest.raises(ValueError):
            bench.chandrasekhar_system(0, DD)


class TestCyclic:
    @pytest.mark.parametrize("n", [2, 3, 5, 8, 16])
    def test_monomial_count(self, n):
        sys_ = bench.cyclic_n_roots(n, CDD)
        assert sys_.monomial_count() == n * n - n + 2

    def test_equations_sum_consecutive_products(self):
        n = 5
        sys_ = bench.cyclic_n_roots(n, CDD)
        for i in range(1, n):
            poly = sys_.polys[i - 1]
            assert len(poly) == n
            assert all(m.degree() == i for m in poly)
            assert all(d == 1 for m in poly for _, d in m.exponents)
        last = sys_.polys[-1]
        assert sorted(m.degree() for m in last) == [0, n]

    def test_wraparound_indices(self):
        sys_ = bench.cyclic_n_roots(4, CDD)
        # degree-2 equation must contain the wrapped product x3*x0
        pairs = [tuple(v for v, _ in m.exponents) for m in sys_.polys[1]]
        assert (0, 3) in pairs


class TestRandomInputs:
    def test_unit_point_has_unit_modulus(self):
        z = bench.random_unit_point(20, 17, CDD)
        for v in z:
            assert abs(float(abs(v)) - 1.0) < 1e-15

    def test_unit_point_requires_complex(self):
        with pytest.raises(ValueError):
            bench.random_unit_point(4, 1, DD)

    def test_seeding_is_reproducible(self):
        a = bench.random_unit_point(10, 3, CDD)
        b = bench.random_unit_point(10, 3, CDD)
        assert a == b
        assert bench.random_point(5, 8, DD) == bench.random_point(5, 8, DD)
        assert a != bench.random_unit_point(10, 4, CDD)

    def test_stress_products_shape(self):
        mons = bench.random_stress_products(7, 16, 2, DD)
        assert len(mons) == 7
        for m in mons:
            assert m.exponents == tuple((v, 1) for v in range(16))
            assert 0.5 <= float(m.coeff) < 2.0

    def test_random_point_magnitudes(self):
        for v in bench.random_point(50, 6, DD):
            assert 0.5 <= abs(float(v)) < 2.0
