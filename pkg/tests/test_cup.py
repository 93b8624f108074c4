"""Tests for cup products and the exterior algebra check."""

from fractions import Fraction

import pytest

from liemorse.chain import build_ce_complex
from liemorse.cup import (
    Cochain,
    NonzeroDifferential,
    PreconditionViolated,
    cohomology_dual_basis,
    cup_product,
    graded_commutator_vanishes,
    top_interval_wedge,
    verify_exterior_algebra,
)
from liemorse.lie import sol
from liemorse.morse import normalization_reduce
from liemorse.poset import antichain, chain
from liemorse.ring import INTEGERS, RATIONALS, modular

# basis of sol_3: e11, e12, e13, e22, e23, e33
E11, E22, E33 = 1 << 0, 1 << 3, 1 << 5


@pytest.fixture
def sol3_rational_reduced():
    """Normalization-reduced CE complex of sol_3 over Q: wedges of diagonals."""
    return normalization_reduce(build_ce_complex(sol(3), RATIONALS))


class TestCupProduct:
    """Tests for cup_product on reduced complexes."""

    def test_dual_basis(self, sol3_rational_reduced):
        """Test one dual functional per critical wedge."""
        duals = cohomology_dual_basis(sol3_rational_reduced)
        assert [len(duals[k]) for k in range(4)] == [1, 3, 3, 1]
        assert duals[4] == []

    def test_dual_basis_needs_zero_differential(self, sol2_integral):
        """Test an unreduced complex is refused."""
        with pytest.raises(NonzeroDifferential):
            cohomology_dual_basis(sol2_integral)

    def test_product_of_diagonals(self, sol3_rational_reduced):
        """Test x1 u x2 is the dual of e11 ^ e22."""
        one = Fraction(1)
        x1, x2 = Cochain(1, {E11: one}), Cochain(1, {E22: one})
        assert cup_product(x1, x2, sol3_rational_reduced).coefficients == {E11 | E22: 1}
        assert cup_product(x2, x1, sol3_rational_reduced).coefficients == {E11 | E22: -1}

    def test_square_vanishes(self, sol3_rational_reduced):
        """Test x1 u x1 = 0."""
        x1 = Cochain(1, {E11: Fraction(1)})
        assert cup_product(x1, x1, sol3_rational_reduced).is_zero()

    def test_triple_product(self, sol3_rational_reduced):
        """Test x1 u x2 u x3 reaches the top critical wedge."""
        one = Fraction(1)
        x1, x2, x3 = (Cochain(1, {bit: one}) for bit in (E11, E22, E33))
        product = cup_product(cup_product(x1, x2, sol3_rational_reduced), x3, sol3_rational_reduced)
        assert product.coefficients == {E11 | E22 | E33: 1}

    def test_graded_commutativity(self, sol3_rational_reduced):
        """Test a u b = (-1)^(ij) b u a."""
        one = Fraction(1)
        x1 = Cochain(1, {E11: one})
        x23 = Cochain(2, {E22 | E33: one})
        assert graded_commutator_vanishes(x1, Cochain(1, {E22: one}), sol3_rational_reduced)
        assert graded_commutator_vanishes(x1, x23, sol3_rational_reduced)

    def test_scaled(self):
        """Test scaling reduces into the ring."""
        cochain = Cochain(1, {E11: 1, E22: 3})
        assert cochain.scaled(2, modular(2)).is_zero()
        assert cochain.scaled(-1, INTEGERS).coefficients == {E11: -1, E22: -3}


class TestExteriorAlgebra:
    """Tests for verify_exterior_algebra function."""

    def test_rationals(self):
        """Test H*(sol_3; Q) is exterior on x1, x2, x3."""
        report = verify_exterior_algebra(chain(3), RATIONALS)
        assert report.ok, report.failures
        assert report.generators == {"x1": 1, "x2": 1, "x3": 1}
        assert report.critical_count == 8
        assert report.monomials_checked == 8
        assert report.table[("x1", "x1")] == "0"
        assert report.table[("x1", "x2")] == "+e11^e22^*"
        assert report.table[("x2", "x1")] == "-e11^e22^*"

    def test_large_prime(self):
        """Test Z/p with p >= n behaves like Q."""
        report = verify_exterior_algebra(chain(3), modular(5))
        assert report.ok
        assert "y" not in report.generators

    def test_extra_generator(self):
        """Test p = n - 1 on a bounded poset adds y in degree 2p - 1."""
        report = verify_exterior_algebra(chain(4), modular(3))
        assert report.ok, report.failures
        assert report.generators["y"] == 5
        assert report.critical_count == 32
        assert report.table[("y", "y")] == "0"

    def test_unbounded_has_no_extra_generator(self):
        """Test an antichain has no interval wedge."""
        report = verify_exterior_algebra(antichain(4), modular(3))
        assert report.ok
        assert "y" not in report.generators

    @pytest.mark.parametrize("ring", [INTEGERS, modular(2), modular(4)])
    def test_precondition(self, ring):
        """Test rings outside the exterior algebra cases."""
        with pytest.raises(PreconditionViolated):
            verify_exterior_algebra(chain(4), ring)

    def test_to_frame(self):
        """Test the multiplication table frame."""
        frame = verify_exterior_algebra(chain(2), RATIONALS).to_frame()
        assert list(frame.columns) == ["x1", "x2"]
        assert frame.loc["x1", "x2"] == "+e11^e22^*"


class TestTopIntervalWedge:
    """Tests for top_interval_wedge function."""

    def test_chain(self):
        """Test e13 ^ e12 ^ e23 for a chain of three."""
        assert top_interval_wedge(chain(3)) == 0b10110

    def test_unbounded(self):
        """Test an antichain has no least element."""
        with pytest.raises(PreconditionViolated):
            top_interval_wedge(antichain(2))
