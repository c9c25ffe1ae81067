"""Exact decomposability of 4-dimensional bilinear spaces over Q."""

from .bilinear import (
    AsymmetryClass4, BilinearSpace, adjoint_map, asymmetry, chi_tensor, classify_asymmetry4,
    classify_dim2, det_class, recover_tensor_parameters, std_ba, tensor_form,
)
from .brauer import BrauerClass2, QuaternionSymbol, class_add, hilbert_symbol, is_split, nu, nu_tilde, ramified_places
from .correspondence import (
    GenericContext, KClassElem, LElem, class_equal, class_is_trivial, form_from_class, is_decomposable_class,
    sym_element, theta, theta_inv,
)
from .decomp import (
    AntiAutoCert, DecisionOnly, GenericDecompCert, IndecompWitness, Verdict, antiauto_decomposition,
    check_antiauto, conic_point, decide, decompose_generic, decompose_nongeneric, indecomposability_witness,
    verify_antiauto,
)
from .exact import QuadElem, factor, legendre, quad_norm, sqfree_class
from .family import FamilyParams, PiGenerator, bp_matrix, family_generate, norm_equation, pairwise_distinct, screen_prime
from .linalg import QMatrix, QPoly, charpoly, conjugator, det, invariant_factors, inverse, kron

__version__ = "0.1.0"
