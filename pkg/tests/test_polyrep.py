"""Sparse polynomial representation, decomposition, and the text format."""

import pytest

from polynewt.polyrep import (Monomial, PolySystem, SystemParseError,
                              build_power_table, decompose, eval_common_factor,
                              parse_system, recompose, serialize_system)
from polynewt.xprec import precision_level

DD = precision_level("dd", cplx=False)
CDD = precision_level("dd", cplx=True)


def mono(c, *exps):
    return Monomial(DD.from_float(c), tuple(exps))


class TestMonomial:
    def test_invariants(self):
        with pytest.raises(ValueError):
            Monomial(DD.zero(), ())
        with pytest.raises(ValueError):
            mono(1.0, (0, 1), (0, 2))       # repeated variable
        with pytest.raises(ValueError):
            mono(1.0, (2, 1), (1, 1))       # out of order
        with pytest.raises(ValueError):
            mono(1.0, (0, 0))               # zero exponent not stored

    def test_degree_and_key(self):
        m = mono(2.0, (0, 3), (2, 1))
        assert m.degree() == 4
        assert m.exponent_key(4) == (3, 0, 1, 0)


class TestDecomposition:
    def test_splits_off_shared_factor(self):
        m = mono(5.0, (0, 3), (1, 1), (3, 2))
        dec = decompose(m)
        assert dec.distinct_vars == (0, 1, 3)
        assert dec.common_factor == ((0, 2), (3, 1))
        assert recompose(dec) == m.exponents

    def test_multilinear_has_empty_common_factor(self):
        dec = decompose(mono(1.0, (0, 1), (5, 1)))
        assert dec.common_factor == ()

    def test_constant(self):
        dec = decompose(mono(3.0))
        assert dec.distinct_vars == () and dec.common_factor == ()


class TestPowerTable:
    def test_entries_are_pure_powers(self):
        sys_ = PolySystem(2, [[mono(1.0, (0, 4), (1, 2))]])
        x = [DD.from_float(3.0), DD.from_float(2.0)]
        table = build_power_table(x, sys_)
        assert float(table.get(0, 4)) == 81.0
        assert float(table.get(1, 2)) == 4.0
        with pytest.raises(KeyError):
            table.get(0, 5)   # beyond the largest exponent in the system

    def test_common_factor_product(self):
        sys_ = PolySystem(2, [[mono(1.0, (0, 3), (1, 2))]])
        x = [DD.from_float(2.0), DD.from_float(5.0)]
        table = build_power_table(x, sys_)
        dec = decompose(sys_.polys[0][0])
        assert float(eval_common_factor(dec, table)) == 4.0 * 5.0

    def test_dimension_mismatch(self):
        sys_ = PolySystem(2, [[mono(1.0, (0, 1))]])
        with pytest.raises(ValueError):
            build_power_table([DD.one()], sys_)


class TestTextFormat:
    def test_parse_simple_system(self):
        text = "2 3\n2.5*x0^2*x2 - x1 + 4;\nx0*x1*x2 - 1;\n"
        sys_ = parse_system(text, DD)
        assert sys_.n_eqs == 2 and sys_.n_vars == 3
        assert sys_.monomial_count() == 5
        coeffs = sorted(float(m.coeff) for m in sys_.polys[0])
        assert coeffs == [-1.0, 2.5, 4.0]

    def test_round_trip_is_identity_on_canonical_text(self):
        text = "2 3\n2.5*x0^2*x2 - 1.25*x1 + 4;\n-x0*x1*x2 + 0.5;\n"
        once = serialize_system(parse_system(text, DD), DD)
        assert serialize_system(parse_system(once, DD), DD) == once

    def test_complex_coefficients(self):
        text = "1 2\n(1.5,-2.0)*x0*x1 + (0.0,1.0);\n"
        sys_ = parse_system(text, CDD)
        quad = [m for m in sys_.polys[0] if m.exponents][0]
        assert float(quad.coeff.re) == 1.5 and float(quad.coeff.im) == -2.0
        once = serialize_system(sys_, CDD)
        assert serialize_system(parse_system(once, CDD), CDD) == once

    def test_exponent_one_is_omitted(self):
        out = serialize_system(PolySystem(2, [[mono(1.0, (0, 1), (1, 2))]]), DD)
        assert "x0*x1^2" in out and "x0^1" not in out

    def test_unicode_minus_accepted(self):
        sys_ = parse_system("1 1\n1 − x0;\n", DD)
        assert sorted(float(m.coeff) for m in sys_.polys[0]) == [-1.0, 1.0]

    @pytest.mark.parametrize("text,line,col", [
        ("1 1\nx0^;\n", 2, 3),              # dangling exponent
        ("1 2\nx5;\n", 2, 1),               # variable out of range
        ("1 1\n;\n", 2, 2),                 # empty polynomial
        ("1 1\nx0", 2, 3),                  # missing terminator
        ("1 1\nx0 + ;\n", 2, 6),            # sign without a term
        ("1 1\nx0 x0;\n", 2, 4),            # missing operator
    ])
    def test_error_positions(self, text, line, col):
        with pytest.raises(SystemParseError) as exc:
            parse_system(text, DD)
        assert (exc.value.line, exc.value.col) == (line, col)

    def test_bad_header(self):
        with pytest.raises(SystemParseError):
            parse_system("banana\nx0;\n", DD)

    def test_trailing_garbage(self):
        with pytest.raises(SystemParseError):
            parse_system("1 1\nx0;\nx0;\n", DD)

    def test_complex_literal_rejected_in_real_context(self):
        with pytest.raises(SystemParseError):
            parse_system("1 1\n(1.0,2.0)*x0;\n", DD)


def test_canonical_order_sorts_lexicographically():
    p = [mono(1.0, (1, 1)), mono(2.0), mono(3.0, (0, 2)), mono(4.0, (0, 1), (1, 1))]
    sys_ = PolySystem(2, [p]).canonicalized()
    keys = [m.exponent_key(2) for m in sys_.polys[0]]
    assert keys == sorted(keys)


def test_out_of_range_variable_rejected_at_construction():
    with pytest.raises(ValueError):
        PolySystem(1, [[mono(1.0, (3, 1))]])
