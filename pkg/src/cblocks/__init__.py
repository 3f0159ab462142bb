"""Exact-arithmetic conformal blocks and logarithmic forms in genus 0.

Computes conformal block spaces for the classical Lie algebras and G2 via the
T^{k+1} criterion, realizes the master-function-weighted log-form model with
full residue calculus, and verifies at desk scale that the block space equals
the admissible (square-integrable) subspace.
"""

from .admissible import MasterData, admissible_subspace, min_even_constant
from .blocks import BlockInstance, BlockSpace, conformal_blocks
from .degreelab import (DegreeProblem, difference_square_decompose,
                        min_degree_certify, run_lemma_suite)
from .logforms import (MarkedPartition, correlation_function,
                       enumerate_marked_partitions, expand_in_basis,
                       omega_basis_form, sv_map, symmetrized_basis)
from .ratfun import RationalForm, SparsePoly, Stratum, iterated_residue, log_degree
from .repspace import TensorFunctional, invariant_functionals, weight_zero_basis
from .roots import RootSystem, build_root_system, check_pairwise_sums, parse_algebra

__version__ = "0.1.0"

__all__ = [
    "BlockInstance", "BlockSpace", "DegreeProblem", "MarkedPartition",
    "MasterData", "RationalForm", "RootSystem", "SparsePoly", "Stratum",
    "TensorFunctional", "admissible_subspace", "difference_square_decompose",
    "build_root_system", "check_pairwise_sums", "conformal_blocks",
    "correlation_function", "enumerate_marked_partitions", "expand_in_basis",
    "invariant_functionals", "iterated_residue", "log_degree",
    "min_degree_certify", "min_even_constant", "omega_basis_form",
    "parse_algebra", "run_lemma_suite", "sv_map", "symmetrized_basis",
    "weight_zero_basis",
]
