"""Finite quantum groups built from finite groups, and their Hopf-level invariants."""
from .groups import (
    FiniteGroupTable,
    corpus,
    cyclic_group,
    dihedral_group,
    direct_product,
    group_by_name,
    symmetric_group,
)
from .quantum_group import (
    FiniteQuantumGroup,
    HopfReport,
    counit_projection,
    dual,
    function_algebra,
    group_algebra,
    haar_state,
    is_kac,
    verify_density_gest,
    verify_hopf_axioms,
)

__all__ = [
    "FiniteGroupTable",
    "FiniteQuantumGroup",
    "HopfReport",
    "corpus",
    "counit_projection",
    "cyclic_group",
    "dihedral_group",
    "direct_product",
    "dual",
    "function_algebra",
    "group_algebra",
    "group_by_name",
    "haar_state",
    "is_kac",
    "symmetric_group",
    "verify_density_gest",
    "verify_hopf_axioms",
]
