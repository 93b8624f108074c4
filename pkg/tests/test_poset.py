"""Tests for finite posets."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liemorse.poset import (
    CycleDetected,
    NotComparable,
    PosetParseError,
    antichain,
    chain,
    complete_bipartite,
    from_cover_relations,
    load_poset_file,
    ordinal_sum,
    parse_poset_text,
    random_poset,
)


class TestFromCoverRelations:
    """Tests for from_cover_relations function."""

    def test_transitive_closure(self):
        """Test covers close transitively."""
        poset = from_cover_relations(3, [(1, 2), (2, 3)])
        assert poset.leq(1, 3)
        assert not poset.leq(3, 1)

    def test_reflexive(self):
        """Test every element is below itself."""
        poset = antichain(3)
        assert all(poset.leq(x, x) for x in poset.elements)
        assert not poset.lt(2, 2)

    def test_cycle_detected(self):
        """Test a directed cycle is rejected."""
        with pytest.raises(CycleDetected):
            from_cover_relations(3, [(1, 2), (2, 3), (3, 1)])

    def test_label_out_of_range(self):
        """Test labels outside 1..n are rejected."""
        with pytest.raises(ValueError):
            from_cover_relations(2, [(1, 3)])

    def test_diamond_relations(self, diamond):
        """Test relations of the diamond include the non-covering pair."""
        assert (1, 4) in diamond.strict_pairs()
        assert (2, 3) not in diamond.strict_pairs()
        assert len(diamond.relations()) == 9


class TestPosetQueries:
    """Tests for covers, intervals and bounds."""

    def test_covers_of_chain(self):
        """Test the Hasse diagram of a chain drops implied relations."""
        assert chain(4).covers() == [(1, 2), (2, 3), (3, 4)]

    def test_interval(self, diamond):
        """Test the interval [1, 4] of the diamond is everything."""
        assert diamond.interval(1, 4) == [1, 2, 3, 4]
        assert diamond.interval(2, 4) == [2, 4]

    def test_interval_not_comparable(self, diamond):
        """Test incomparable endpoints raise NotComparable."""
        with pytest.raises(NotComparable):
            diamond.interval(2, 3)

    def test_comparable_noncovering_count(self, diamond):
        """Test counts of pairs with an element strictly between."""
        assert diamond.comparable_noncovering_count() == 1
        assert chain(4).comparable_noncovering_count() == 3
        assert ordinal_sum(1, 3, 1).comparable_noncovering_count() == 1

    def test_bounds(self, diamond):
        """Test least and greatest elements."""
        assert diamond.minimum() == 1
        assert diamond.maximum() == 4
        assert diamond.is_bounded()
        assert not complete_bipartite(3, 3).is_bounded()

    def test_ordinal_sum(self):
        """Test stacking antichains."""
        poset = ordinal_sum(2, 1)
        assert poset.covers() == [(1, 3), (2, 3)]


class TestPosetFiles:
    """Tests for the poset file format."""

    def test_parse(self):
        """Test parsing header, comments and relations."""
        poset = parse_poset_text("n=3  # three\n1 < 2\n\n2<3\n")
        assert poset == chain(3)

    def test_missing_header(self):
        """Test a relation before the header is rejected."""
        with pytest.raises(PosetParseError):
            parse_poset_text("1 < 2\n")

    def test_bad_relation(self):
        """Test malformed and out-of-range lines."""
        with pytest.raises(PosetParseError):
            parse_poset_text("n=2\n1 > 2\n")
        with pytest.raises(PosetParseError):
            parse_poset_text("n=2\n1 < 5\n")

    def test_empty_text(self):
        """Test a file without header."""
        with pytest.raises(PosetParseError):
            parse_poset_text("# nothing\n")

    def test_load_file(self, diamond_file, diamond):
        """Test loading from disk."""
        assert load_poset_file(diamond_file) == diamond

    def test_load_missing_file(self, tmp_path):
        """Test a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_poset_file(tmp_path / "missing.pos")

    def test_to_text_round_trip(self, diamond):
        """Test rendering back to the file format."""
        assert parse_poset_text(diamond.to_text()) == diamond


class TestRandomPoset:
    """Tests for random_poset function."""

    def test_seeded(self):
        """Test a seed fixes the poset."""
        assert random_poset(5, seed=3) == random_poset(5, seed=3)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10**6))
    def test_natural_labelling(self, n, seed):
        """Test a < b in the order implies a < b as integers."""
        poset = random_poset(n, seed=seed)
        assert all(a < b for a, b in poset.strict_pairs())
