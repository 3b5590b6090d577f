"""Exact product bases of subspaces of tensor product spaces.

Constructs tuples and bases of product vectors inside prescribed subspaces
over GF(p) and the rationals, certifies the extremal no-product-basis witness,
and verifies the separability and distinguishability certificates, all in
exact arithmetic.
"""

from .fields import GF, QQ, FpElement, ParseError, PrimeField, Rationals, parse_field
from .linalg import EchelonSpan, Matrix, SingularMatrixError, format_matrix, parse_matrix
from .tensor import (ProductVector, Subspace, TensorShape, TensorVector,
                     basis_tensor, bilinear_form, format_subspace, format_vector,
                     kron, matricize, parse_shape, parse_subspace, parse_vector,
                     schmidt_rank, standard_basis_vector, tensor_product, vectorize)
from .construct import (CompletionError, CompletionRequest, FieldTooSmallError,
                        ProductTuple, bipartite_codim1_basis, canonical_covector,
                        complete_to_bases, product_basis_codim1, product_tuple,
                        random_codim_subspace, witness_no_product_basis)
from .verify import (BruteForceResult, BudgetExceededError, SweepReport,
                     VerificationReport, enumerate_product_vectors,
                     factor_product, format_sweep_report,
                     has_product_basis_bruteforce, sweep_codim1,
                     verify_product_basis)
from .gpt import (Ensemble, SeparabilityCertificate, SymMatrix,
                  build_s1s3_counterexample, format_certificate, identity_sym,
                  inertia, partial_transpose, projector_onto_vector,
                  standard_ensemble, verify_distinguishable)

__version__ = "0.1.0"
