"""Product trees, gradient circuits, and full system evaluation."""

import random
from functools import reduce

import pytest

from polynewt import bench
from polynewt.evaldiff import (OpCounter, PreparedSystem, eval_product_tree,
                               evaluate_system, gradient_from_tree,
                               speelpenning_sequential)
from polynewt.polyrep import Monomial, PolySystem, build_power_table, decompose
from polynewt.evaldiff import eval_monomial_and_derivs
from polynewt.xprec import precision_level

from conftest import rel_err, to_mpc, to_mpfr

DD = precision_level("dd", cplx=False)
CDD = precision_level("dd", cplx=True)


class TestOperationCounts:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8, 13, 16, 100, 1024])
    def test_tree_eval_uses_n_minus_1_mults(self, n):
        vals = [DD.from_int(k + 2) for k in range(n)]
        counter = OpCounter()
        eval_product_tree(vals, counter)
        assert counter.eval_mults == n - 1

    @pytest.mark.parametrize("n", [4, 8, 16, 64, 256, 1024])
    def test_gradient_uses_2n_minus_4_mults(self, n):
        vals = [DD.from_int(k + 2) for k in range(n)]
        counter = OpCounter()
        gradient_from_tree(eval_product_tree(vals), counter)
        assert counter.grad_mults == 2 * n - 4

    def test_gradient_of_pair_is_free(self):
        counter = OpCounter()
        gradient_from_tree(eval_product_tree([DD.one(), DD.one()]), counter)
        assert counter.grad_mults == 0

    @pytest.mark.parametrize("n", [2, 3, 4, 8, 100, 1024])
    def test_sequential_uses_3n_minus_5_mults(self, n):
        vals = [DD.from_int(k + 2) for k in range(n)]
        counter = OpCounter()
        speelpenning_sequential(vals, counter)
        assert counter.eval_mults + counter.grad_mults == 3 * n - 5


class TestExactValues:
    """Small-integer inputs make every product exact in binary64."""

    @pytest.mark.parametrize("n", range(1, 13))
    def test_tree_matches_brute_force(self, n):
        rng = random.Random(n)
        for _ in range(20):
            ints = [rng.randint(1, 9) for _ in range(n)]
            vals = [DD.from_int(v) for v in ints]
            tree = eval_product_tree(vals)
            assert float(tree.root) == reduce(lambda a, b: a * b, ints)
            grads = gradient_from_tree(tree)
            for i in range(n):
                want = reduce(lambda a, b: a * b,
                              (v for j, v in enumerate(ints) if j != i), 1)
                assert float(grads[i]) == want

    def test_sequential_matches_brute_force(self):
        ints = [3, 1, 4, 1, 5, 9, 2, 6]
        vals = [DD.from_int(v) for v in ints]
        product, grads = speelpenning_sequential(vals)
        assert float(product) == reduce(lambda a, b: a * b, ints)
        for i in range(len(ints)):
            want = reduce(lambda a, b: a * b,
                          (v for j, v in enumerate(ints) if j != i), 1)
            assert float(grads[i]) == want

    def test_zero_factor_is_harmless(self):
        vals = [DD.from_int(v) for v in (2, 0, 5, 7)]
        tree = eval_product_tree(vals)
        grads = gradient_from_tree(tree)
        assert float(tree.root) == 0.0
        assert float(grads[1]) == 70.0
        assert float(grads[0]) == 0.0


class TestAccuracy:
    def test_tree_product_accuracy_vs_oracle(self):
        rng = random.Random(8)
        for n in (100, 333):
            vals = [DD.from_float(rng.uniform(0.5, 2.0)) for _ in range(n)]
            tree = eval_product_tree(vals)
            exact = reduce(lambda a, b: a * b, (to_mpfr(v) for v in vals))
            assert rel_err(to_mpfr(tree.root), exact) <= 8 * n * DD.eps


class TestMonomialEvaluation:
    def test_derivative_never_divides(self):
        # gradient of x0^3 * x1 at a point with x0 = 0 must still be finite
        m = Monomial(DD.from_float(2.0), ((0, 3), (1, 1)))
        sys_ = PolySystem(2, [[m]])
        x = [DD.zero(), DD.from_float(5.0)]
        table = build_power_table(x, sys_)
        value, derivs = eval_monomial_and_derivs(m.coeff, decompose(m), table, x)
        assert float(value) == 0.0
        d = dict(derivs)
        assert float(d[0]) == 0.0     # 6 x0^2 x1 at x0=0
        assert float(d[1]) == 0.0     # 2 x0^3 at x0=0

    def test_single_variable_bypass(self):
        m = Monomial(DD.from_float(3.0), ((0, 4),))
        sys_ = PolySystem(1, [[m]])
        x = [DD.from_float(2.0)]
        table = build_power_table(x, sys_)
        value, derivs = eval_monomial_and_derivs(m.coeff, decompose(m), table, x)
        assert float(value) == 48.0
        assert float(derivs[0][1]) == 96.0

    def test_power_product_with_common_factor(self):
        m = Monomial(DD.one(), ((0, 2), (1, 3)))
        sys_ = PolySystem(2, [[m]])
        x = [DD.from_float(2.0), DD.from_float(3.0)]
        table = build_power_table(x, sys_)
        value, derivs = eval_monomial_and_derivs(m.coeff, decompose(m), table, x)
        assert float(value) == 4.0 * 27.0
        d = dict(derivs)
        assert float(d[0]) == 2 * 2.0 * 27.0
        assert float(d[1]) == 3 * 4.0 * 9.0


class TestSystemEvaluation:
    def test_jacobian_matches_high_precision_difference(self):
        level = CDD
        sys_ = bench.cyclic_n_roots(5, level)
        x = bench.random_point(5, 3, level)
        ev = evaluate_system(sys_, x)
        mx = [to_mpc(v) for v in x]

        def f(mx, i):
            total = 0
            for mon in sys_.polys[i]:
                term = to_mpc(mon.coeff)
                for var, d in mon.exponents:
                    term *= mx[var] ** d
                total += term
            return total

        h = to_mpfr(DD.from_float(1e-40))
        for i in range(5):
            base = f(mx, i)
            assert rel_err(to_mpc(ev.values[i]), base) <= 1e-28
            for j in range(5):
                shifted = list(mx)
                shifted[j] = shifted[j] + h
                dref = (f(shifted, i) - base) / h
                got = to_mpc(ev.jacobian[i][j])
                assert abs(got - dref) <= (abs(dref) + 1) * 1e-25

    def test_parallel_is_bit_identical(self):
        sys_ = bench.chandrasekhar_system(10, CDD)
        x = bench.random_point(10, 11, CDD)
        a = evaluate_system(sys_, x)
        b = evaluate_system(sys_, x, parallel=True)
        assert a.values == b.values
        assert a.jacobian == b.jacobian

    def test_prepared_system_reuse(self):
        sys_ = bench.chandrasekhar_system(6, DD)
        prep = PreparedSystem(sys_)
        x = bench.random_point(6, 1, DD)
        assert evaluate_system(prep, x).values == evaluate_system(sys_, x).values

    def test_counts_are_aggregated(self):
        sys_ = bench.cyclic_n_roots(4, CDD)
        ev = evaluate_system(sys_, bench.random_point(4, 2, CDD))
        assert ev.counter.eval_mults > 0
        assert ev.counter.grad_mults > 0
