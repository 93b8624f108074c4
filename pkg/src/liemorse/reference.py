"""
Published homology values used by the verify suites and the tests.

Modules are written the way HomologyModule prints them ("Z^4 + Z_2^3 + Z_4")
and parsed on access.

Example usage:
    from liemorse.reference import sol_integral_table

    sol_integral_table(3)[3]   # HomologyModule(free_rank=1, torsion=(2,))
"""

import logging
import re

from liemorse.homology import HomologyModule
from liemorse.poset import Poset, complete_bipartite, from_cover_relations, ordinal_sum

logger = logging.getLogger(__name__)

_SUMMAND = re.compile(r"^Z(?:_(\d+))?(?:\^(\d+))?$")


def parse_module(text: str) -> HomologyModule:
    """
    Parse "Z^4 + Z_2^3 + Z_4" (or "0") into a HomologyModule.

    Raises:
        ValueError: On an unrecognized summand
    """
    text = text.strip()
    if text == "0":
        return HomologyModule(0)
    free = 0
    primary: dict[int, int] = {}
    for part in text.split("+"):
        match = _SUMMAND.match(part.strip())
        if not match:
            raise ValueError(f"Cannot parse summand '{part.strip()}' in '{text}'")
        order, power = match.groups()
        multiplicity = int(power) if power else 1
        if order is None:
            free += multiplicity
        else:
            primary[int(order)] = primary.get(int(order), 0) + multiplicity
    return HomologyModule.from_primary(free, primary)


# H_k(sol_n; Z), k = 0 .. n(n+1)/2
SOL_INTEGRAL = {
    1: ["Z", "Z"],
    2: ["Z", "Z^2", "Z", "0"],
    3: ["Z", "Z^3", "Z^3", "Z + Z_2", "Z_2^2", "Z_2", "0"],
    4: [
        "Z", "Z^4", "Z^6", "Z^4 + Z_2^3", "Z + Z_2^11", "Z_2^15 + Z_3",
        "Z_2^9 + Z_3^3", "Z_2^2 + Z_3^3", "Z_3", "0", "0",
    ],
    5: [
        "Z", "Z^5", "Z^10", "Z^10 + Z_2^6", "Z^5 + Z_2^29", "Z + Z_2^56 + Z_3^3",
        "Z_2^59 + Z_3^13", "Z_2^51 + Z_4 + Z_3^22", "Z_2^55 + Z_4^4 + Z_3^19",
        "Z_2^50 + Z_4^6 + Z_3^11", "Z_2^26 + Z_4^4 + Z_3^7", "Z_2^9 + Z_4 + Z_3^4",
        "Z_2^6 + Z_3", "Z_2^4", "Z_2", "0",
    ],
    6: [
        "Z", "Z^6", "Z^15", "Z^20 + Z_2^10", "Z^15 + Z_2^59", "Z^6 + Z_2^145 + Z_3^6",
        "Z + Z_2^220 + Z_3^33", "Z_2^348 + Z_4^3 + Z_3^75", "Z_2^674 + Z_4^16 + Z_3^96",
        "Z_2^1034 + Z_4^35 + Z_3^94 + Z_5", "Z_2^1035 + Z_4^40 + Z_3^101 + Z_5^5",
        "Z_2^704 + Z_4^25 + Z_3^103 + Z_5^10", "Z_2^452 + Z_4^9 + Z_3^70 + Z_5^10",
        "Z_2^389 + Z_4^6 + Z_3^26 + Z_5^5", "Z_2^305 + Z_4^10 + Z_3^4 + Z_5",
        "Z_2^150 + Z_4^10", "Z_2^39 + Z_4^5", "Z_2^4 + Z_4", "0", "0", "0", "0",
    ],
}  # fmt: skip

# dim H_k(sol_n; Z_p) = C(n, k) + sum c * C(n, k - s) over (s, c)
SHIFTED_BINOMIALS = {
    2: {
        3: [(3, 1)],
        4: [(3, 3), (4, 2)],
        5: [(3, 6), (4, 5), (6, 5), (7, 6), (10, 1)],
        6: [(3, 10), (4, 9), (6, 30), (7, 61), (8, 30), (10, 15), (11, 19), (12, 5)],
    },
    3: {
        4: [(5, 1)],
        5: [(5, 3), (6, 1), (8, 1)],
        6: [(5, 6), (6, 3), (8, 6), (9, 4)],
    },
    5: {
        6: [(9, 1)],
    },
}

SOL4_MOD2_DIMS = [1, 4, 6, 7, 15, 26, 24, 11, 2, 0, 0]

# (n, p, k, dim H_k(sol_n; Z_p)) near the top degree; None means nonzero
HIGH_DEGREE_MOD_P = [
    (3, 2, 6, 1),
    (3, 3, 6, 0),
    (4, 2, 8, None),
    (4, 2, 9, 0),
    (4, 2, 10, 0),
    (4, 3, 9, None),
    (4, 3, 10, 0),
]

# (p, n) with dim H_(2p-1)(sol_n; Z_p) = C(n, 2p-1) + C(n-p+1, 2)
FIRST_P_TORSION_CASES = [(2, 4), (2, 5), (3, 5)]

# Nonzero H_k(C_(.,p)(nil_n); Z) for k > 0; degree 0 is always Z
P_COMPLEX = {
    2: {
        3: {3: "Z"},
        4: {3: "Z^2 + Z_2", 4: "Z"},
        5: {3: "Z^3 + Z_2^3", 4: "Z^2", 6: "Z^2 + Z_2^3", 7: "Z^3", 10: "Z"},
        6: {
            3: "Z^4 + Z_2^6",
            4: "Z^3",
            6: "Z^5 + Z_2^24 + Z_4 + Z_3^2",
            7: "Z^10 + Z_2^23 + Z_4^3 + Z_3^3",
            8: "Z^4",
            10: "Z^4 + Z_2^9 + Z_4^2 + Z_3",
            11: "Z^4 + Z_2^4",
            12: "Z",
        },
    },
    3: {
        4: {5: "Z"},
        5: {5: "Z^2 + Z_3", 8: "Z"},
        6: {5: "Z^3 + Z_3^3", 8: "Z^3 + Z_3^3", 9: "Z", 10: "Z_2"},
    },
    5: {
        6: {9: "Z"},
    },
}


# Three-dimensional complex with a square, a path, a hollow and a solid tetrahedron
WORKED_EXAMPLE_FACETS = [
    ["a", "b"], ["a", "d"], ["b", "c"], ["c", "d"], ["d", "e"],
    ["e", "f", "g"], ["e", "f", "h"], ["e", "g", "h"], ["f", "g", "h"],
    ["i", "j", "k", "l"],
]  # fmt: skip

# (upper, lower) pairs; critical cells are d, i, ab and fgh
WORKED_EXAMPLE_MATCHING = [
    ("ad", "a"), ("bc", "b"), ("cd", "c"), ("de", "e"), ("ef", "f"), ("eg", "g"), ("eh", "h"),
    ("ij", "j"), ("ik", "k"), ("il", "l"),
    ("efg", "fg"), ("efh", "fh"), ("egh", "gh"), ("ijk", "jk"), ("ijl", "jl"), ("ikl", "kl"),
    ("ijkl", "jkl"),
]  # fmt: skip

WORKED_EXAMPLE_DIMENSIONS = [12, 17, 8, 1]
WORKED_EXAMPLE_HOMOLOGY = ["Z^2", "Z", "Z", "0"]


def sol_integral_table(n: int) -> dict[int, HomologyModule]:
    """Published H_k(sol_n; Z) for n <= 6."""
    if n not in SOL_INTEGRAL:
        raise KeyError(f"No published integral table for n={n}")
    return {k: parse_module(text) for k, text in enumerate(SOL_INTEGRAL[n])}


def p_complex_table(n: int, p: int) -> dict[int, HomologyModule]:
    """Published H_k(C_(.,p)(nil_n); Z), zeros omitted except degree 0."""
    modules = {0: HomologyModule(1)}
    modules.update({k: parse_module(text) for k, text in P_COMPLEX[p][n].items()})
    return modules


def h3_example_posets() -> list[tuple[str, Poset, HomologyModule]]:
    """Posets with their published H_3(gl on the poset; Z)."""
    return [
        ("diamond", from_cover_relations(4, [(1, 2), (1, 3), (2, 4), (3, 4)]), parse_module("Z^4 + Z_2")),
        ("1<2,3,4<5", ordinal_sum(1, 3, 1), parse_module("Z^10 + Z_2")),
        (
            "1<2<3<5, 1<4<5",
            from_cover_relations(5, [(1, 2), (2, 3), (3, 5), (1, 4), (4, 5)]),
            parse_module("Z^10 + Z_2^3"),
        ),
        (
            "1<2<3<6, 1<4<5<6",
            from_cover_relations(6, [(1, 2), (2, 3), (3, 6), (1, 4), (4, 5), (5, 6)]),
            parse_module("Z^20 + Z_2^5"),
        ),
        (
            "1<2<3<4<6, 1<5<6",
            from_cover_relations(6, [(1, 2), (2, 3), (3, 4), (4, 6), (1, 5), (5, 6)]),
            parse_module("Z^20 + Z_2^6"),
        ),
    ]


def bipartite_three_torsion() -> tuple[Poset, int, HomologyModule]:
    """The 3x3 complete bipartite poset has 3-torsion in degree 9."""
    return complete_bipartite(3, 3), 9, parse_module("Z_3")


__all__ = [
    "FIRST_P_TORSION_CASES",
    "HIGH_DEGREE_MOD_P",
    "P_COMPLEX",
    "SHIFTED_BINOMIALS",
    "SOL4_MOD2_DIMS",
    "SOL_INTEGRAL",
    "WORKED_EXAMPLE_DIMENSIONS",
    "WORKED_EXAMPLE_FACETS",
    "WORKED_EXAMPLE_HOMOLOGY",
    "WORKED_EXAMPLE_MATCHING",
    "bipartite_three_torsion",
    "h3_example_posets",
    "p_complex_table",
    "parse_module",
    "sol_integral_table",
]
