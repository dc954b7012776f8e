"""Exact orthogonal polynomials on the bi-lattice ``x(s) = s + gamma (-1)^s``."""

from .classical import (PearsonPair, Verdict, admissible, derivative_ops, generate_ops,
                        iterated_pair, recurrence_coeffs, regular, rodrigues)
from .classifier import Classification, classify, q_equivalent
from .errors import (AdmissibilityError, BilatticeError, ContextError, DenominatorError,
                     MathematicalError, NeedsTwoExtensions, ParseError, RegularityError,
                     SigmaResidueError, TruncationError)
from .families import (AffineMap, FamilyDescriptor, H, Q, affine_transform, family_recurrence,
                       pair_from_descriptor, q_symmetry_check, verify_identity)
from .functional import (MomentFunctional, dual_D, dual_S, hankel_oracle, left_mul, pair,
                         solve_pearson_moments)
from .poly import Poly
from .scalar import ExactScalar, as_scalar, format_scalar, parse_scalar, sqrt_exact
from .sigma_ring import (SIGMA, LatticeContext, SigmaPoly, SigmaScalar, apply_D, apply_S,
                         format_sigma_poly, parse_sigma_poly)
from .table import RecurrenceTable

__version__ = "0.1.0"

__all__ = [
    "PearsonPair", "Verdict", "admissible", "derivative_ops", "generate_ops", "iterated_pair",
    "recurrence_coeffs", "regular", "rodrigues", "Classification", "classify", "q_equivalent",
    "AdmissibilityError", "BilatticeError", "ContextError", "DenominatorError",
    "MathematicalError", "NeedsTwoExtensions", "ParseError", "RegularityError",
    "SigmaResidueError", "TruncationError", "AffineMap", "FamilyDescriptor", "H", "Q",
    "affine_transform", "family_recurrence", "pair_from_descriptor", "q_symmetry_check",
    "verify_identity", "MomentFunctional", "dual_D", "dual_S", "hankel_oracle", "left_mul",
    "pair", "solve_pearson_moments", "Poly", "ExactScalar", "as_scalar", "format_scalar",
    "parse_scalar", "sqrt_exact", "SIGMA", "LatticeContext", "SigmaPoly", "SigmaScalar",
    "apply_D", "apply_S", "format_sigma_poly", "parse_sigma_poly", "RecurrenceTable",
]
