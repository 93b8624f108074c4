"""Tests for published reference tables."""

import pytest

from liemorse.homology import HomologyModule, HomologyTable, betti_mod_p_from_integral
from liemorse.reference import (
    SHIFTED_BINOMIALS,
    SOL_INTEGRAL,
    bipartite_three_torsion,
    h3_example_posets,
    p_complex_table,
    parse_module,
    sol_integral_table,
)
from liemorse.ring import INTEGERS
from liemorse.subcomplex import shifted_binomial_dims


class TestParseModule:
    """Tests for parse_module function."""

    def test_round_trip(self):
        """Test the printed form parses back."""
        text = "Z^4 + Z_2^3 + Z_4 + Z_3"
        assert str(parse_module(text)) == text

    def test_zero(self):
        """Test the zero module."""
        assert parse_module("0") == HomologyModule(0)

    def test_composite_orders_split(self):
        """Test Z_6 and Z_2 + Z_3 are the same group."""
        assert parse_module("Z_6") == parse_module("Z_2 + Z_3")

    def test_invalid(self):
        """Test an unknown summand."""
        with pytest.raises(ValueError):
            parse_module("Z + Q")


class TestReferenceTables:
    """Consistency checks on the tabulated data."""

    def test_missing_table(self):
        """Test a size without published data."""
        with pytest.raises(KeyError):
            sol_integral_table(9)

    @pytest.mark.parametrize("n", sorted(SOL_INTEGRAL))
    def test_sol_tables_have_zero_euler_characteristic(self, n):
        """Test free ranks alternate to zero and the table covers every degree."""
        table = sol_integral_table(n)
        assert len(table) == n * (n + 1) // 2 + 1
        assert sum((-1) ** k * module.free_rank for k, module in table.items()) == 0

    @pytest.mark.parametrize(
        "p, n",
        [(p, n) for p, by_n in SHIFTED_BINOMIALS.items() for n in by_n if n in SOL_INTEGRAL],
    )
    def test_shifted_binomials_match_universal_coefficients(self, p, n):
        """Test the mod p formulas against the integral tables."""
        integral = HomologyTable(ring=INTEGERS, modules=sol_integral_table(n))
        expected = shifted_binomial_dims(n, SHIFTED_BINOMIALS[p][n])
        assert betti_mod_p_from_integral(integral, p) == expected

    def test_p_complex_table_has_degree_zero(self):
        """Test degree 0 is always Z."""
        assert p_complex_table(3, 2)[0] == HomologyModule(1)
        assert str(p_complex_table(3, 2)[3]) == "Z"

    def test_h3_examples(self):
        """Test every example poset comes with a module carrying 2-torsion."""
        examples = h3_example_posets()
        assert len(examples) == 5
        for _, poset, module in examples:
            assert module.torsion_count(2) == poset.comparable_noncovering_count()

    def test_bipartite(self):
        """Test the 3x3 bipartite example."""
        poset, degree, module = bipartite_three_torsion()
        assert poset.n == 6
        assert degree == 9
        assert str(module) == "Z_3"
