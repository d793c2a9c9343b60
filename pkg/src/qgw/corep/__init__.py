"""Corepresentations of finite quantum groups and the windowed almost-periodicity test."""
from .corep import (Corepresentation, Decomposition, FusionTable, MatrixElementSpan, decompose_corep, fusion_table,
                    intertwiners, irreducibles, is_unitary_corep, matrix_element_span, regular_corep, tensor_corep,
                    trivial_corep)
from .hankel import HankelRealization, HankelWindow, RealizationResult, hankel_ap_test

__all__ = [
    "HankelRealization", "HankelWindow", "RealizationResult", "hankel_ap_test",
    "Corepresentation", "Decomposition", "FusionTable", "MatrixElementSpan", "decompose_corep", "fusion_table",
    "intertwiners", "irreducibles", "is_unitary_corep", "matrix_element_span", "regular_corep", "tensor_corep",
    "trivial_corep",
]
