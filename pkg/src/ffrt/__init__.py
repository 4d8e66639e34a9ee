"""Frobenius pushforwards of hypersurfaces in prime characteristic.

Matrices of relations, matrix factorizations and their trivial-block
splitting, monomial and monomial-ideal decompositions, F-signatures and
Fedder's criterion, all over the prime field ``F_p``.
"""

from ffrt.field_poly import Poly, Ring, local_inverse, is_local_unit, parse_poly
from ffrt.frobenius_basis import FrobBasis, basis_index, basis_monomial, frobenius_basis, frobenius_coordinates
from ffrt.relmat import PolyMatrix, RelMatrix, build_block_extended, build_rel_matrix, rel_matrix_mul
from ffrt.matfac import (
    InstabilityError,
    MatFac,
    SplitResult,
    count_free_summands,
    count_power_summands,
    maltese,
    matfac_from_power,
    sharp,
    split_pair,
    split_trivial,
    trivial,
)
from ffrt.monomial import (
    DiagonalSummary,
    IdealDecomposition,
    decompose_monomial_quotient,
    diagonalize_monomial_matrix,
    eta_count,
    eta_free_count,
)
from ffrt.signature import (
    SignatureReport,
    WVector,
    count_identity_extend_variable,
    faulhaber_sum,
    signature_artin_schreier,
    signature_sharp,
    signature_uv_closed,
    signature_uv_empirical,
    w_vector,
)
from ffrt.fedder import PurityVerdict, fedder_monomial_ideal, fedder_principal

__version__ = "0.1.0"
