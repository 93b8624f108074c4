"""
liemorse - Exact homology of Chevalley-Eilenberg complexes of poset Lie algebras.

This package provides:
- Coefficient rings Z, Q and Z/m with exact arithmetic
- Finite posets and the Lie algebras of matrices supported on them
- Chevalley-Eilenberg and simplicial chain complexes on sparse matrices
- Algebraic Morse matchings, their validation and reduction
- Integral homology by sparse Smith normal form, field homology by rank
- p-weight subcomplexes and their tensor factorization
- Cup products and the exterior algebra check

Example usage:
    from liemorse import INTEGERS, build_ce_complex, homology_over_Z, normalization_reduce, sol

    reduced = normalization_reduce(build_ce_complex(sol(3), INTEGERS))
    table = homology_over_Z(reduced)
    print(table[3])   # Z + Z_2
"""

__version__ = "0.1.0"

from liemorse.chain import ChainComplex, ComplexTooLarge, build_ce_complex, simplicial_chain_complex
from liemorse.cup import cup_product, verify_exterior_algebra
from liemorse.homology import (
    HomologyModule,
    HomologyTable,
    compute_homology,
    homology_over_field,
    homology_over_Z,
    smith_normal_form,
)
from liemorse.lie import LieAlgebra, dgn, gl_full, gl_poset, nil, so_char2, sol
from liemorse.morse import (
    Matching,
    normalization_matching,
    normalization_reduce,
    reduce_by_matching,
    validate_matching,
)
from liemorse.poset import Poset, chain, from_cover_relations, parse_poset_text
from liemorse.ring import INTEGERS, RATIONALS, CoefficientRing, modular, parse_ring
from liemorse.subcomplex import build_p_subcomplex, verify_tensor_factorization

__all__ = [
    # Rings
    "CoefficientRing",
    "INTEGERS",
    "RATIONALS",
    "modular",
    "parse_ring",
    # Posets and algebras
    "Poset",
    "chain",
    "from_cover_relations",
    "parse_poset_text",
    "LieAlgebra",
    "gl_poset",
    "gl_full",
    "sol",
    "nil",
    "dgn",
    "so_char2",
    # Complexes
    "ChainComplex",
    "ComplexTooLarge",
    "build_ce_complex",
    "simplicial_chain_complex",
    # Morse reduction
    "Matching",
    "validate_matching",
    "reduce_by_matching",
    "normalization_matching",
    "normalization_reduce",
    # Homology
    "HomologyModule",
    "HomologyTable",
    "compute_homology",
    "homology_over_Z",
    "homology_over_field",
    "smith_normal_form",
    # Subcomplexes and products
    "build_p_subcomplex",
    "verify_tensor_factorization",
    "cup_product",
    "verify_exterior_algebra",
]
