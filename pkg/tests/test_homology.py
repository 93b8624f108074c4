"""Tests for Smith normal forms and homology."""

from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liemorse.chain import build_ce_complex, simplicial_chain_complex
from liemorse.homology import (
    HomologyModule,
    betti_mod_p_from_integral,
    cohomology_over_Z,
    compute_homology,
    euler_characteristic,
    field_rank,
    homology_euler_characteristic,
    homology_over_field,
    homology_over_Z,
    invariant_factor_chain,
    kunneth_field_dims,
    mod_p_table,
    smith_normal_form,
)
from liemorse.lie import dgn, nil, sol
from liemorse.ring import INTEGERS, RATIONALS, CompositeModulus, modular
from liemorse.sparse import SparseMatrix

SOL3 = ["Z", "Z^3", "Z^3", "Z + Z_2", "Z_2^2", "Z_2", "0"]


def _strings(table):
    return [str(table[k]) for k in table.degrees]


class TestHomologyModule:
    """Tests for HomologyModule."""

    def test_str(self):
        """Test free part first, then primary torsion by prime."""
        module = HomologyModule.from_primary(0, {2: 51, 4: 1, 3: 22})
        assert str(module) == "Z_2^51 + Z_4 + Z_3^22"
        assert str(HomologyModule(2, (2,))) == "Z^2 + Z_2"
        assert str(HomologyModule(0)) == "0"

    def test_from_divisors(self):
        """Test 1s are dropped and factors merged into a chain."""
        module = HomologyModule.from_divisors(1, [1, 2, 3])
        assert module.torsion == (6,)
        assert module.primary_torsion() == {2: 1, 3: 1}

    def test_torsion_string(self):
        """Test the compact primary torsion notation."""
        assert HomologyModule.from_divisors(0, [2, 4]).torsion_string() == "2^1·4^1"
        assert HomologyModule(3).torsion_string() == ""

    def test_torsion_count(self):
        """Test counting divisors divisible by p."""
        module = HomologyModule(0, (2, 6, 12))
        assert module.torsion_count(2) == 3
        assert module.torsion_count(3) == 2

    def test_has_summand(self):
        """Test summands are matched prime power by prime power."""
        module = HomologyModule.from_primary(10, {2: 6, 3: 1})
        assert module.has_summand(HomologyModule(0, (6,)))
        assert module.has_summand(HomologyModule(10, (2,)))
        assert not module.has_summand(HomologyModule(0, (4,)))
        assert not module.has_summand(HomologyModule(0, (3, 3)))
        assert not module.has_summand(HomologyModule(11))

    @pytest.mark.parametrize("free, torsion", [(-1, ()), (0, (1,)), (0, (3, 2))])
    def test_invalid(self, free, torsion):
        """Test negative ranks, unit divisors and broken chains."""
        with pytest.raises(ValueError):
            HomologyModule(free, torsion)


class TestSmithNormalForm:
    """Tests for smith_normal_form and invariant_factor_chain."""

    def test_invariant_factor_chain(self):
        """Test diagonal entries are merged prime by prime."""
        assert invariant_factor_chain([2, 3]) == [1, 6]
        assert invariant_factor_chain([4, 6]) == [2, 12]
        assert invariant_factor_chain([0, -5]) == [5]

    def test_diagonal(self):
        """Test diag(2, 3) has invariant factors 1, 6."""
        form = smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]]))
        assert form.divisors == [1, 6]
        assert form.rank == 2

    def test_rank_deficient(self):
        """Test a rank one matrix."""
        form = smith_normal_form(SparseMatrix.from_dense([[2, 4], [4, 8]]))
        assert form.divisors == [2]
        assert form.rank == 1

    def test_zero(self):
        """Test the zero matrix has no divisors."""
        assert smith_normal_form(SparseMatrix.zero(3, 2)).divisors == []

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=1, max_value=5).flatmap(
            lambda rows: st.lists(
                st.lists(st.integers(min_value=-6, max_value=6), min_size=4, max_size=4),
                min_size=rows,
                max_size=rows,
            )
        )
    )
    def test_matches_determinantal_divisors(self, dense):
        """Test invariant factors against gcds of k x k minors."""
        from sympy import Matrix

        matrix = Matrix(dense)
        expected, previous = [], 1
        for k in range(1, min(matrix.shape) + 1):
            divisor = 0
            for rows in combinations(range(matrix.rows), k):
                for cols in combinations(range(matrix.cols), k):
                    divisor = gcd(divisor, int(matrix.extract(list(rows), list(cols)).det()))
            if divisor == 0:
                break
            expected.append(divisor // previous)
            previous = divisor
        assert smith_normal_form(SparseMatrix.from_dense(dense)).divisors == expected


class TestIntegralHomology:
    """Tests for homology_over_Z function."""

    def test_sol2(self, sol2_integral):
        """Test H(sol_2; Z) = Z, Z^2, Z, 0."""
        assert _strings(homology_over_Z(sol2_integral)) == ["Z", "Z^2", "Z", "0"]

    def test_sol3(self, sol3_integral):
        """Test the 2-torsion of sol_3."""
        assert _strings(homology_over_Z(sol3_integral, threads=2)) == SOL3

    def test_heisenberg(self):
        """Test nil_3 is the Heisenberg algebra."""
        table = homology_over_Z(build_ce_complex(nil(3), INTEGERS))
        assert _strings(table) == ["Z", "Z^2", "Z^2", "Z"]

    def test_abelian(self):
        """Test the diagonal algebra has exterior homology."""
        table = homology_over_Z(build_ce_complex(dgn(3), INTEGERS))
        assert table.dimensions() == [1, 3, 3, 1]

    def test_selected_degrees(self, sol3_integral):
        """Test reporting only some degrees."""
        table = homology_over_Z(sol3_integral, degrees=[3])
        assert table.degrees == [3]
        assert str(table[3]) == "Z + Z_2"

    def test_window(self):
        """Test a window complex computes its middle degree."""
        window = build_ce_complex(sol(3), INTEGERS, degrees=[4])
        table = homology_over_Z(window)
        assert table.degrees == [4]
        assert str(table[4]) == "Z_2^2"
        with pytest.raises(KeyError):
            homology_over_Z(window, degrees=[6])

    def test_needs_integers(self):
        """Test a complex over Q is rejected."""
        with pytest.raises(ValueError):
            homology_over_Z(build_ce_complex(sol(2), RATIONALS))

    def test_worked_example(self, worked_example):
        """Test the simplicial worked example."""
        from liemorse.reference import WORKED_EXAMPLE_HOMOLOGY

        assert _strings(homology_over_Z(worked_example)) == WORKED_EXAMPLE_HOMOLOGY

    def test_reduced_circle(self):
        """Test reduced homology is keyed by geometric degree."""
        complex_ = simplicial_chain_complex([["a", "b"], ["b", "c"], ["c", "a"]], reduced=True)
        table = homology_over_Z(complex_)
        assert table.degrees == [-1, 0, 1]
        assert _strings(table) == ["0", "0", "Z"]


class TestFieldHomology:
    """Tests for homology over Q and Z/p."""

    def test_rationals(self):
        """Test ranks over Q are the free ranks."""
        table = homology_over_field(build_ce_complex(sol(3), RATIONALS))
        assert table.dimensions() == [1, 3, 3, 1, 0, 0, 0]

    def test_mod_2(self, sol3_integral):
        """Test torsion shows up twice over Z/2."""
        assert mod_p_table(sol3_integral, 2).dimensions() == [1, 3, 3, 2, 3, 3, 1]

    def test_universal_coefficients(self, sol3_integral):
        """Test direct mod p homology against universal coefficients."""
        integral = homology_over_Z(sol3_integral)
        for p in (2, 3, 5):
            direct = build_ce_complex(sol(3), modular(p))
            assert compute_homology(direct).dimensions() == betti_mod_p_from_integral(integral, p)

    def test_composite_modulus(self):
        """Test Z/m with m composite is rejected."""
        with pytest.raises(CompositeModulus):
            compute_homology(build_ce_complex(sol(2), modular(6)))

    def test_field_rank_needs_field(self):
        """Test ranks over Z are refused."""
        with pytest.raises(ValueError):
            field_rank(SparseMatrix.from_dense([[1]]), INTEGERS)

    def test_field_rank_mod_p(self):
        """Test rank drops when a determinant vanishes mod p."""
        matrix = SparseMatrix.from_dense([[1, 2], [3, 1]])
        assert field_rank(matrix, RATIONALS) == 2
        assert field_rank(matrix, modular(5)) == 1

    def test_betti_needs_prime(self, sol2_integral):
        """Test universal coefficients with a composite modulus."""
        with pytest.raises(ValueError):
            betti_mod_p_from_integral(homology_over_Z(sol2_integral), 4)

    def test_kunneth(self):
        """Test the dimension convolution."""
        assert kunneth_field_dims([1, 1], [1, 2, 1]) == [1, 3, 3, 1]
        assert kunneth_field_dims([], [1]) == []


class TestCohomologyAndEuler:
    """Tests for cohomology and Euler characteristics."""

    def test_cohomology_sol2(self, sol2_integral):
        """Test cohomology of sol_2."""
        assert _strings(cohomology_over_Z(sol2_integral)) == ["Z", "Z^2", "Z", "0"]

    def test_torsion_moves_up(self, sol3_integral):
        """Test the torsion of H^k is the torsion of H_(k-1)."""
        homology = homology_over_Z(sol3_integral)
        cohomology = cohomology_over_Z(sol3_integral)
        for k in range(1, 7):
            assert cohomology[k].free_rank == homology[k].free_rank
            assert cohomology[k].torsion == homology[k - 1].torsion

    def test_euler_characteristic(self, sol3_integral, worked_example):
        """Test chain-level and homology Euler characteristics agree."""
        assert euler_characteristic(sol3_integral) == 0
        assert homology_euler_characteristic(homology_over_Z(sol3_integral)) == 0
        assert euler_characteristic(worked_example) == 2
        assert homology_euler_characteristic(homology_over_Z(worked_example)) == 2


class TestHomologyTable:
    """Tests for HomologyTable rendering."""

    def test_to_frame(self, sol2_integral):
        """Test the frame columns."""
        frame = homology_over_Z(sol2_integral).to_frame(n=2)
        assert list(frame.columns) == ["n", "k", "free", "torsion", "H_k"]
        assert frame["free"].tolist() == [1, 2, 1, 0]

    def test_to_dict(self, sol3_integral):
        """Test the JSON-ready form."""
        data = homology_over_Z(sol3_integral).to_dict()
        assert data["ring"] == "Z"
        assert data["homology"][4] == {"k": 4, "free": 0, "torsion": [2, 2], "primary": {"2": 2}}

    def test_describe_over_fields(self, sol3_integral):
        """Test field tables name the field instead of Z."""
        rational = homology_over_field(build_ce_complex(sol(3), RATIONALS))
        assert [rational.describe(k) for k in range(5)] == ["Q", "Q^3", "Q^3", "Q", "0"]
        mod_2 = mod_p_table(sol3_integral, 2)
        assert mod_2.describe(3) == "(Z/2)^2"
        assert mod_2.describe(0) == "Z/2"
        assert homology_over_Z(sol3_integral).describe(3) == "Z + Z_2"
