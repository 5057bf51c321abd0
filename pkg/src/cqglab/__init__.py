"""Numerical laboratory for finite compact quantum groups, the diagonal
idempotent state, and the deformed Fourier algebra of free orthogonal
quantum groups."""

__version__ = "0.1.0"

from .blocks import (BlockElement, Conjugation, QData, adelta_dual_norm,
                     adelta_norm, adelta_product, coproduct_block,
                     coproduct_of_matrix_unit, dual_antipode,
                     fourier_algebra_norm, haar_weight, pairing)
from .derivation import (DerivationSymbol, inner_witness, symbol,
                         psi_ta_norm_bound)
from .diagonal import (DiagonalContext, check_range_equality,
                       conditional_expectation, diagonal_embedding,
                       diagonal_state, idempotent_to_expectation,
                       induced_convolution)
from .hopf import (FiniteQuantumGroup, Functional, convolve,
                   convolve_elements, haar_state, is_kac, tensor_with_cop,
                   verify_hopf)
from .report import Check, Report
from .tlrep import (IrrepCategory, chebyshev_dims, compare_decompositions,
                    diagonal_dft_unitary, fusion_range)

__all__ = [
    "BlockElement", "Check", "Conjugation", "DerivationSymbol",
    "DiagonalContext", "FiniteQuantumGroup", "Functional", "IrrepCategory",
    "QData", "Report", "adelta_dual_norm", "adelta_norm", "adelta_product",
    "chebyshev_dims", "check_range_equality", "compare_decompositions",
    "conditional_expectation", "convolve", "convolve_elements",
    "coproduct_block", "coproduct_of_matrix_unit", "diagonal_dft_unitary",
    "diagonal_embedding", "diagonal_state", "dual_antipode",
    "fourier_algebra_norm", "fusion_range", "haar_state", "haar_weight",
    "idempotent_to_expectation", "induced_convolution", "inner_witness",
    "is_kac", "pairing", "psi_ta_norm_bound", "symbol", "tensor_with_cop",
    "verify_hopf",
]
