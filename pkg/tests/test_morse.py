"""Tests for Morse matchings and reductions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liemorse.chain import build_ce_complex, simplicial_chain_complex
from liemorse.lie import dgn, gl_full, nil, sol
from liemorse.morse import (
    MatchedPair,
    Matching,
    MatchingStatus,
    MissingDiagonals,
    MorseMatchingError,
    critical_vertices,
    gradient_path_sum,
    matching_from_names,
    normalization_matching,
    normalization_reduce,
    reduce_by_matching,
    reduction_stats,
    simplex,
    star_matching,
    validate_matching,
)
from liemorse.ring import INTEGERS, RATIONALS, modular

CIRCLE = [["a", "b"], ["b", "c"], ["c", "a"]]


@pytest.fixture
def worked_matching(worked_example):
    """The hand-built matching of the worked example."""
    from liemorse.reference import WORKED_EXAMPLE_MATCHING

    return matching_from_names(worked_example, WORKED_EXAMPLE_MATCHING)


class TestValidateMatching:
    """Tests for validate_matching function."""

    def test_worked_example_is_valid(self, worked_example, worked_matching):
        """Test the hand-built matching passes all three conditions."""
        assert validate_matching(worked_example, worked_matching) == MatchingStatus.VALID
        assert worked_matching.reason is None

    def test_cycle(self):
        """Test matching every edge of a circle to a vertex forms a cycle."""
        complex_ = simplicial_chain_complex(CIRCLE)
        matching = matching_from_names(complex_, [("ab", "a"), ("bc", "b"), ("ca", "c")])
        assert validate_matching(complex_, matching) == MatchingStatus.INVALID
        assert "cycle" in matching.reason

    def test_non_unit_entry(self, sol3_integral):
        """Test d(e11^e12^e13) has entry -2 at e12^e13, not a unit of Z."""
        matching = Matching(pairs=[MatchedPair(0b111, 0b110, 3)])
        assert validate_matching(sol3_integral, matching) == MatchingStatus.INVALID
        assert "non-unit" in matching.reason

    def test_non_unit_becomes_unit_over_q(self):
        """Test the same pair is fine over Q."""
        complex_ = build_ce_complex(sol(3), RATIONALS)
        matching = Matching(pairs=[MatchedPair(0b111, 0b110, 3)])
        assert validate_matching(complex_, matching) == MatchingStatus.VALID

    def test_zero_entry(self, sol2_integral):
        """Test a pair whose boundary entry vanishes."""
        matching = Matching(pairs=[MatchedPair(0b101, 0b001, 2)])
        assert validate_matching(sol2_integral, matching) == MatchingStatus.INVALID

    def test_common_endpoint(self, worked_example):
        """Test a cell used by two pairs."""
        matching = matching_from_names(worked_example, [("ab", "a"), ("ad", "a")])
        assert validate_matching(worked_example, matching) == MatchingStatus.INVALID
        assert "common endpoint" in matching.reason

    def test_unknown_cell(self, sol2_integral):
        """Test a pair pointing outside the complex is reported, not raised."""
        matching = Matching(pairs=[MatchedPair(0b1000, 0b0, 1)])
        assert validate_matching(sol2_integral, matching) == MatchingStatus.INVALID
        assert "#3" in matching.reason
        assert "not a cell of degree 1" in matching.reason

    def test_reduce_rejects_invalid(self, sol3_integral):
        """Test reduction refuses an invalid matching."""
        matching = Matching(pairs=[MatchedPair(0b111, 0b110, 3)])
        with pytest.raises(MorseMatchingError):
            reduce_by_matching(sol3_integral, matching)


class TestWorkedExample:
    """Tests for the simplicial worked example."""

    def test_critical_cells(self, worked_example, worked_matching):
        """Test the critical cells are d, i, ab and fgh."""
        critical = critical_vertices(worked_example, worked_matching).cells
        assert critical[0] == [simplex(worked_example, "d"), simplex(worked_example, "i")]
        assert critical[1] == [simplex(worked_example, "ab")]
        assert critical[2] == [simplex(worked_example, "fgh")]
        assert critical[3] == []

    def test_reduced_complex(self, worked_example, worked_matching):
        """Test the reduced complex has sizes 2, 1, 1, 0 and zero maps."""
        reduced = reduce_by_matching(worked_example, worked_matching)
        assert reduced.dimensions() == [2, 1, 1, 0]
        assert all(reduced.boundary(k).is_zero() for k in (1, 2))

    def test_gradient_paths_cancel(self, worked_example, worked_matching):
        """Test the two paths from ab to d carry opposite signs."""
        values, total = gradient_path_sum(
            worked_example,
            worked_matching,
            simplex(worked_example, "ab"),
            simplex(worked_example, "d"),
        )
        assert sorted(values) == [-1, 1]
        assert total == 0

    def test_no_path_to_other_component(self, worked_example, worked_matching):
        """Test ab reaches nothing in the tetrahedron component."""
        values, total = gradient_path_sum(
            worked_example,
            worked_matching,
            simplex(worked_example, "ab"),
            simplex(worked_example, "i"),
        )
        assert values == []
        assert total == 0


class TestStarMatching:
    """Tests for star_matching function."""

    def test_cone_is_collapsible(self):
        """Test the star of a vertex of a simplex matches everything."""
        complex_ = simplicial_chain_complex([["a", "b", "c"]], reduced=True)
        matching = star_matching(complex_, "a")
        assert validate_matching(complex_, matching) == MatchingStatus.VALID
        assert critical_vertices(complex_, matching).total() == 0

    def test_circle_keeps_one_edge(self):
        """Test the edge opposite the star vertex stays critical."""
        complex_ = simplicial_chain_complex(CIRCLE, reduced=True)
        matching = star_matching(complex_, "a")
        assert validate_matching(complex_, matching) == MatchingStatus.VALID
        assert critical_vertices(complex_, matching).counts() == {0: 0, 1: 0, 2: 1}

    def test_sphere_keeps_one_triangle(self):
        """Test the boundary of a tetrahedron keeps the face opposite the vertex."""
        facets = [["a", "b", "c"], ["a", "b", "d"], ["a", "c", "d"], ["b", "c", "d"]]
        complex_ = simplicial_chain_complex(facets, reduced=True)
        matching = star_matching(complex_, "a")
        critical = critical_vertices(complex_, matching).cells
        assert critical[3] == [simplex(complex_, "bcd")]
        reduced = reduce_by_matching(complex_, matching)
        assert reduced.dimensions() == [0, 0, 0, 1]

    def test_unknown_vertex(self, worked_example):
        """Test an unknown vertex name."""
        with pytest.raises(ValueError):
            star_matching(worked_example, "z")


class TestNormalizationMatching:
    """Tests for normalization_matching and normalization_reduce."""

    def test_sol2_critical_cells(self, sol2_integral):
        """Test the critical cells of sol_2 are 1, e11, e22 and e11^e22."""
        matching = normalization_matching(sol2_integral)
        assert matching.pairs == [MatchedPair(0b011, 0b010, 2), MatchedPair(0b111, 0b110, 3)]
        critical = critical_vertices(sol2_integral, matching).cells
        assert critical == {0: [0], 1: [0b001, 0b100], 2: [0b101], 3: []}

    @pytest.mark.parametrize("ring", [INTEGERS, modular(2), modular(3)])
    def test_is_valid(self, ring):
        """Test the matching passes validation over several rings."""
        complex_ = build_ce_complex(sol(3), ring)
        assert validate_matching(complex_, normalization_matching(complex_)) == MatchingStatus.VALID

    @pytest.mark.parametrize("ring", [RATIONALS, modular(3), modular(5)])
    def test_two_to_the_n_critical(self, ring):
        """Test sol_3 keeps 2^3 wedges when every weight is a unit."""
        reduced = normalization_reduce(build_ce_complex(sol(3), ring))
        assert reduced.total_size() == 8

    def test_more_critical_mod_2(self):
        """Test weight 2 is not a unit mod 2."""
        reduced = normalization_reduce(build_ce_complex(sol(3), modular(2)))
        assert reduced.total_size() > 8

    def test_restriction_equals_elimination(self, sol3_integral):
        """Test dropping rows and columns agrees with Schur elimination."""
        restricted = normalization_reduce(sol3_integral)
        eliminated = reduce_by_matching(sol3_integral, normalization_matching(sol3_integral))
        assert restricted.dimensions() == eliminated.dimensions()
        for k in range(1, 7):
            assert restricted.boundary(k).to_dense() == eliminated.boundary(k).to_dense()

    @settings(max_examples=25, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_elimination_order_does_not_matter(self, rng):
        """Test any order of the matched pairs gives the same reduced boundaries."""
        complex_ = build_ce_complex(sol(3), INTEGERS)
        matching = normalization_matching(complex_)
        order = list(matching.pairs)
        rng.shuffle(order)

        reference = normalization_reduce(complex_)
        shuffled = reduce_by_matching(complex_, matching, order=order)

        for k in range(1, 7):
            assert shuffled.boundary(k).to_dense() == reference.boundary(k).to_dense()

    def test_gl_full(self):
        """Test the full matrix algebra."""
        complex_ = build_ce_complex(gl_full(2), INTEGERS)
        assert validate_matching(complex_, normalization_matching(complex_)) == MatchingStatus.VALID

    def test_missing_diagonals(self):
        """Test nil_n has no diagonals to match with."""
        with pytest.raises(MissingDiagonals):
            normalization_matching(build_ce_complex(nil(3), INTEGERS))

    def test_window_marks_external_partners(self):
        """Test wedges matched outside a window are not critical."""
        complex_ = build_ce_complex(sol(3), RATIONALS, degrees=[3])
        matching = normalization_matching(complex_)
        assert matching.external
        assert critical_vertices(complex_, matching).counts() == {2: 3, 3: 1, 4: 0}


class TestMatchingLines:
    """Tests for the emitted matching format."""

    def test_to_lines(self, sol2_integral):
        """Test "k upper_bits lower_bits" with position 0 first."""
        matching = normalization_matching(sol2_integral)
        assert matching.to_lines(sol2_integral) == ["2 110 010", "3 111 011"]

    def test_from_lines(self):
        """Test reading lines back, skipping comments and blanks."""
        matching = Matching.from_lines(["# pairs", "", "2 110 010"])
        assert matching.pairs == [MatchedPair(0b011, 0b010, 2)]

    def test_from_bad_lines(self):
        """Test malformed lines."""
        with pytest.raises(ValueError):
            Matching.from_lines(["2 110"])
        with pytest.raises(ValueError):
            Matching.from_lines(["2 1x0 010"])


class TestReductionStats:
    """Tests for reduction_stats function."""

    def test_sol2(self, sol2_integral):
        """Test sizes 1, 3, 3, 1 shrink to 1, 2, 1, 0."""
        stats = reduction_stats(sol2_integral, normalization_reduce(sol2_integral))
        assert stats.original == {0: 1, 1: 3, 2: 3, 3: 1}
        assert stats.critical == {0: 1, 1: 2, 2: 1, 3: 0}
        assert stats.ratio == 0.5
        assert stats.compression == 2.0

    def test_diagonal_algebra_does_not_shrink(self):
        """Test dgn_n is all critical."""
        complex_ = build_ce_complex(dgn(3), INTEGERS)
        assert reduction_stats(complex_, normalization_reduce(complex_)).ratio == 1.0

    def test_to_frame(self, sol2_integral):
        """Test the per-degree frame."""
        frame = reduction_stats(sol2_integral, normalization_reduce(sol2_integral)).to_frame()
        assert list(frame.columns) == ["k", "wedges", "critical"]
        assert frame["critical"].tolist() == [1, 2, 1, 0]
