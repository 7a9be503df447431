"""Exact partial-inner-product spaces over power-weighted sequence lattices,
their operators, categories, operator (co)sheaves and Čech cohomology."""

from .cohomology import Covering, build_complex, cohomology_dims, contracting_homotopy, refinement_map
from .cosheaf import CosheafModel, universal_left_multipliers
from .lattice import FORMAL_BOTTOM, FORMAL_TOP, BlockExponent, IndexLattice, close_lattice, lattice_query
from .operators import OperatorSymbol, adjoint, classify, compose, domain_set, image_set, representative_exists
from .sheaf import SheafModel, SymbolSpace
from .vectors import PipVector, compatible, membership, partial_inner_product

__all__ = [
    "BlockExponent", "IndexLattice", "FORMAL_BOTTOM", "FORMAL_TOP", "close_lattice", "lattice_query",
    "PipVector", "membership", "compatible", "partial_inner_product",
    "OperatorSymbol", "representative_exists", "domain_set", "image_set", "adjoint", "compose", "classify",
    "SymbolSpace", "SheafModel", "CosheafModel", "universal_left_multipliers",
    "Covering", "build_complex", "cohomology_dims", "contracting_homotopy", "refinement_map",
]
