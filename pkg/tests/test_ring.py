"""Tests for coefficient rings."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liemorse.ring import (
    INTEGERS,
    RATIONALS,
    CompositeModulus,
    NonUnit,
    RingParseError,
    invert_integer,
    is_integer_unit,
    modular,
    parse_ring,
)


class TestParseRing:
    """Tests for parse_ring function."""

    def test_integers(self):
        """Test parsing Z."""
        assert parse_ring("Z") == INTEGERS

    def test_rationals_lowercase(self):
        """Test parsing is case-insensitive."""
        assert parse_ring("q") == RATIONALS

    def test_modular_forms(self):
        """Test Z/p and Z_p selectors."""
        assert parse_ring("Z/5") == modular(5)
        assert parse_ring(" z_7 ") == modular(7)

    def test_str_round_trip(self):
        """Test ring names print back in selector form."""
        assert str(parse_ring("Z/12")) == "Z/12"
        assert str(INTEGERS) == "Z"

    @pytest.mark.parametrize("text", ["", "R", "Z/", "Z/x", "F5", "Z/1", "Z/0"])
    def test_invalid(self, text):
        """Test malformed selectors and moduli below 2."""
        with pytest.raises(RingParseError):
            parse_ring(text)


class TestUnits:
    """Tests for unit detection and inversion."""

    def test_integer_units(self):
        """Test only +-1 are units of Z."""
        assert is_integer_unit(1, INTEGERS)
        assert is_integer_unit(-1, INTEGERS)
        assert not is_integer_unit(2, INTEGERS)

    def test_rational_units(self):
        """Test every nonzero integer is a unit of Q."""
        assert is_integer_unit(6, RATIONALS)
        assert not is_integer_unit(0, RATIONALS)

    def test_modular_units(self):
        """Test units of Z/m are the integers coprime to m."""
        assert is_integer_unit(3, modular(5))
        assert not is_integer_unit(3, modular(3))
        assert not is_integer_unit(2, modular(4))
        assert is_integer_unit(-1, modular(4))

    def test_invert_modular(self):
        """Test modular inverse."""
        assert invert_integer(3, modular(5)) == 2

    def test_invert_rational(self):
        """Test rational inverse."""
        assert invert_integer(4, RATIONALS) == Fraction(1, 4)

    def test_invert_non_unit(self):
        """Test NonUnit on a non-invertible element."""
        with pytest.raises(NonUnit):
            invert_integer(2, INTEGERS)
        with pytest.raises(NonUnit):
            modular(6).inverse(3)

    def test_non_unit_is_value_error(self):
        """Test error hierarchy used for CLI exit codes."""
        assert issubclass(NonUnit, ValueError)
        assert issubclass(CompositeModulus, ValueError)

    @given(st.integers(min_value=2, max_value=60), st.integers(min_value=-500, max_value=500))
    def test_inverse_law(self, m, k):
        """Test k * k^-1 == 1 in Z/m whenever k is a unit."""
        ring = modular(m)
        if is_integer_unit(k, ring):
            assert ring.normalize(k * invert_integer(k, ring)) == 1
        else:
            with pytest.raises(NonUnit):
                invert_integer(k, ring)


class TestNormalize:
    """Tests for CoefficientRing.normalize."""

    def test_modular_reduction(self):
        """Test residues land in [0, m)."""
        assert modular(5).normalize(-1) == 4
        assert modular(5).normalize(10) == 0

    def test_modular_fraction(self):
        """Test fractions with unit denominators reduce mod m."""
        assert modular(5).normalize(Fraction(1, 2)) == 3

    def test_rationals(self):
        """Test integers become Fractions over Q."""
        assert RATIONALS.normalize(3) == Fraction(3)

    def test_integers_reject_fraction(self):
        """Test a proper fraction is not an integer."""
        with pytest.raises(NonUnit):
            INTEGERS.normalize(Fraction(1, 2))


class TestFieldDomain:
    """Tests for field detection."""

    def test_is_field(self):
        """Test Q and Z/p are fields, Z and Z/m composite are not."""
        assert RATIONALS.is_field
        assert modular(7).is_field
        assert not modular(6).is_field
        assert not INTEGERS.is_field

    def test_composite_modulus(self):
        """Test field_domain rejects Z/m with m composite."""
        with pytest.raises(CompositeModulus):
            modular(4).field_domain()

    def test_integers_not_field(self):
        """Test field_domain rejects Z."""
        with pytest.raises(ValueError):
            INTEGERS.field_domain()

    def test_characteristic(self):
        """Test characteristic of each ring."""
        assert modular(2).characteristic == 2
        assert RATIONALS.characteristic == 0
