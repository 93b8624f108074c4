"""
Finite partial orders on the labels 1..n.

Posets are given by cover relations and closed internally. They are the
parameter space of the Lie algebras gl_n restricted to a partial order.

Example usage:
    from liemorse.poset import from_cover_relations, load_poset_file

    diamond = from_cover_relations(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    diamond.leq(1, 4)          # True
    diamond.interval(1, 4)     # [1, 2, 3, 4]

Poset file format:
    n=4
    # the diamond
    1 < 2
    1 < 3
    2 < 4
    3 < 4
"""

import logging
import random
import re
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import networkx as nx

logger = logging.getLogger(__name__)

_HEADER_PATTERN = re.compile(r"^n\s*=\s*(\d+)$")
_COVER_PATTERN = re.compile(r"^(\d+)\s*<\s*(\d+)$")


class CycleDetected(ValueError):
    """Raised when cover relations contain a directed cycle."""

    pass


class NotComparable(ValueError):
    """Raised when an interval is requested for incomparable elements."""

    pass


class PosetParseError(ValueError):
    """Raised when a poset file is malformed."""

    pass


@dataclass(frozen=True)
class Poset:
    """
    A partial order on [n] = {1, ..., n}.

    Attributes:
        n: Number of elements
        relation: Row-major n x n table; relation[a-1][b-1] is a <= b
    """

    n: int
    relation: tuple[tuple[bool, ...], ...]

    def leq(self, a: int, b: int) -> bool:
        return self.relation[a - 1][b - 1]

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.relation[a - 1][b - 1]

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)

    def relations(self) -> list[tuple[int, int]]:
        """All pairs (a, b) with a <= b, in lexicographic order."""
        return [(a, b) for a in self.elements for b in self.elements if self.leq(a, b)]

    def strict_pairs(self) -> list[tuple[int, int]]:
        """All pairs (a, b) with a < b, in lexicographic order."""
        return [(a, b) for a, b in self.relations() if a != b]

    def covers(self) -> list[tuple[int, int]]:
        """Cover relations (the Hasse diagram), in lexicographic order."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(self.strict_pairs())
        return sorted(nx.transitive_reduction(graph).edges())

    def interval(self, a: int, b: int) -> list[int]:
        """
        Elements x with a <= x <= b, in label order.

        Raises:
            NotComparable: If a is not below b
        """
        if not self.leq(a, b):
            raise NotComparable(f"{a} and {b} do not span an interval")
        return [x for x in self.elements if self.leq(a, x) and self.leq(x, b)]

    def comparable_noncovering_count(self) -> int:
        """Number of pairs (a, c) with some b strictly between them."""
        return sum(
            1
            for a, c in self.strict_pairs()
            if any(self.lt(a, b) and self.lt(b, c) for b in self.elements)
        )

    def minimum(self) -> int | None:
        for a in self.elements:
            if all(self.leq(a, x) for x in self.elements):
                return a
        return None

    def maximum(self) -> int | None:
        for b in self.elements:
            if all(self.leq(x, b) for x in self.elements):
                return b
        return None

    def is_bounded(self) -> bool:
        """True iff the poset has a least and a greatest element."""
        return self.minimum() is not None and self.maximum() is not None

    def to_text(self) -> str:
        """Render in the poset file format."""
        lines = [f"n={self.n}"]
        lines.extend(f"{a} < {b}" for a, b in self.covers())
        return "\n".join(lines) + "\n"


def from_cover_relations(n: int, covers: list[tuple[int, int]]) -> Poset:
    """
    Build a poset as the reflexive-transitive closure of cover relations.

    Args:
        n: Number of elements (labels 1..n)
        covers: Pairs (a, b) meaning a < b

    Returns:
        Poset

    Raises:
        ValueError: If a label is out of range or a == b
        CycleDetected: If the relations contain a directed cycle

    Example:
        >>> chain3 = from_cover_relations(3, [(1, 2), (2, 3)])
        >>> chain3.leq(1, 3)
        True
    """
    if n < 1:
        raise ValueError(f"Poset needs at least one element, got n={n}")

    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, n + 1))
    for a, b in covers:
        if not (1 <= a <= n and 1 <= b <= n):
            raise ValueError(f"Cover relation {a} < {b} outside 1..{n}")
        if a == b:
            raise ValueError(f"Cover relation {a} < {b} is not strict")
        graph.add_edge(a, b)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleDetected(f"Cover relations contain a cycle: {cycle}")

    closure = nx.transitive_closure_dag(graph)
    relation = tuple(
        tuple(a == b or closure.has_edge(a, b) for b in range(1, n + 1)) for a in range(1, n + 1)
    )
    logger.debug(f"Closed {len(covers)} cover relations on {n} elements")
    return Poset(n=n, relation=relation)


def chain(n: int) -> Poset:
    """Total order 1 < 2 < ... < n."""
    return from_cover_relations(n, [(i, i + 1) for i in range(1, n)])


def antichain(n: int) -> Poset:
    """Discrete order on n elements."""
    return from_cover_relations(n, [])


def ordinal_sum(*levels: int) -> Poset:
    """
    Stack antichains so every element of a level is below every element of the next.

    Example:
        >>> ordinal_sum(3, 1, 2).covers()[:3]
        [(1, 4), (2, 4), (3, 4)]
    """
    covers = []
    start = 1
    for lower, upper in zip(levels, levels[1:]):
        lower_ids = range(start, start + lower)
        upper_ids = range(start + lower, start + lower + upper)
        covers.extend((a, b) for a in lower_ids for b in upper_ids)
        start += lower
    return from_cover_relations(sum(levels), covers)


def complete_bipartite(a: int, b: int) -> Poset:
    """Elements 1..a all below elements a+1..a+b."""
    return ordinal_sum(a, b)


def random_poset(n: int, density: float = 0.4, seed: int | None = None) -> Poset:
    """
    Random poset with labels compatible with the natural order.

    Each pair i < j becomes a cover candidate with the given probability.
    """
    rng = random.Random(seed)
    covers = [(i, j) for i, j in combinations(range(1, n + 1), 2) if rng.random() < density]
    return from_cover_relations(n, covers)


def parse_poset_text(text: str) -> Poset:
    """
    Parse the poset file format.

    Raises:
        PosetParseError: On a missing header or malformed relation line
    """
    n: int | None = None
    covers: list[tuple[int, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if n is None:
            header = _HEADER_PATTERN.match(line)
            if not header:
                raise PosetParseError(f"Line {line_no}: expected 'n=<int>', got '{line}'")
            n = int(header.group(1))
            continue

        relation = _COVER_PATTERN.match(line)
        if not relation:
            raise PosetParseError(f"Line {line_no}: expected 'a < b', got '{line}'")
        a, b = int(relation.group(1)), int(relation.group(2))
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise PosetParseError(f"Line {line_no}: relation {a} < {b} invalid for n={n}")
        covers.append((a, b))

    if n is None:
        raise PosetParseError("Poset file has no 'n=<int>' header")

    return from_cover_relations(n, covers)


def load_poset_file(path: str | Path) -> Poset:
    """Load a poset from a file in the poset file format."""
    path = Path(path).expanduser()
    if not path.exists():
        raise FileNotFoundError(f"Poset file not found: {path}")
    logger.debug(f"Loading poset from: {path}")
    return parse_poset_text(path.read_text(encoding="utf-8"))


__all__ = [
    "CycleDetected",
    "NotComparable",
    "Poset",
    "PosetParseError",
    "antichain",
    "chain",
    "complete_bipartite",
    "from_cover_relations",
    "load_poset_file",
    "ordinal_sum",
    "parse_poset_text",
    "random_poset",
]
