"""Presented *-algebras: rewriting, traces, quotients and built-in examples."""
from .builtins import BUILTINS, double_torus, noncommutative_torus, suq2, unitary_group_au
from .presentation import (HopfData, NCPolynomial, NormalForm, PresentedAlgebra, Presentation, check_hopf_relations,
                           check_local_confluence, delta_poly, delta_word, epsilon_word, normal_form, tensor_nf)
from .quotient import DescentReport, hopf_descent_check, quotient_map, quotient_presentation, star_closure
from .rewriting import MonomialOrder, RewriteSystem, complete, critical_pairs
from .traces import (CommutatorSearch, TraceReport, TraceZeroCertificate, WordFunctional, commutator_space,
                     default_functional, gram_matrix, is_faithful_on_degree, trace_zero_certificate,
                     trace_zero_certificates_for_generators, verify_trace)

__all__ = [
    "BUILTINS", "CommutatorSearch", "DescentReport", "HopfData", "MonomialOrder", "NCPolynomial", "NormalForm",
    "PresentedAlgebra", "Presentation", "RewriteSystem", "TraceReport", "TraceZeroCertificate", "WordFunctional",
    "check_hopf_relations", "check_local_confluence", "commutator_space", "complete", "critical_pairs",
    "default_functional", "delta_poly", "delta_word", "double_torus", "epsilon_word", "gram_matrix",
    "hopf_descent_check", "is_faithful_on_degree", "noncommutative_torus", "normal_form", "quotient_map",
    "quotient_presentation", "star_closure", "suq2", "tensor_nf", "trace_zero_certificate",
    "trace_zero_certificates_for_generators", "unitary_group_au", "verify_trace",
]
