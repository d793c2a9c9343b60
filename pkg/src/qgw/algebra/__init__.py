"""Finite-dimensional C*-algebras: block algebras, structure constants, Wedderburn splitting."""
from .blocks import AlgElement, BlockAlgebra, is_positive, matrix_is_psd, multiply, tensor_algebra
from .structure import Functional, HomReport, LinearMapRep, StructureAlgebra, verify_star_homomorphism
from .wedderburn import WedderburnDecomposition, WedderburnResult, wedderburn_decompose

__all__ = [
    "AlgElement",
    "BlockAlgebra",
    "Functional",
    "HomReport",
    "LinearMapRep",
    "StructureAlgebra",
    "WedderburnDecomposition",
    "WedderburnResult",
    "is_positive",
    "matrix_is_psd",
    "multiply",
    "tensor_algebra",
    "verify_star_homomorphism",
    "wedderburn_decompose",
]
