from itertools import combinations_with_replacement

import numpy as np
import pytest

from qgw.algebra import (
    BlockAlgebra,
    LinearMapRep,
    StructureAlgebra,
    WedderburnDecomposition,
    verify_star_homomorphism,
    wedderburn_decompose,
)
from qgw.errors import DecompositionError
from qgw.hopf import group_algebra, group_by_name, symmetric_group
from qgw.scalars import ONE, identity, zeros


def irrep_dims_oracle(G):
    """All multisets of #classes positive ints whose squares sum to |G| (brute force)."""
    k, n = len(G.conjugacy_classes()), len(G.elements)
    sols = [sorted(c) for c in combinations_with_replacement(range(1, n + 1), k) if sum(x * x for x in c) == n]
    return sols


def commutative(n):
    prods = [[((i, ONE),) if i == j else () for j in range(n)] for i in range(n)]
    unit = zeros(n, True)
    for i in range(n):
        unit[i] = ONE
    return StructureAlgebra(prods, unit, identity(n, True), name=f"C^{n}")


def test_commutative_table():
    assert wedderburn_decompose(commutative(4)).block_dims == [1, 1, 1, 1]


def test_full_matrix_table():
    assert wedderburn_decompose(BlockAlgebra([2]).structure()).block_dims == [2]


def test_s3_group_algebra_matches_oracle():
    G = symmetric_group(3)
    assert irrep_dims_oracle(G) == [[1, 1, 2]]
    W = wedderburn_decompose(group_algebra(G).structure)
    assert W.block_dims == [1, 1, 2]
    assert W.certified_idempotents


@pytest.mark.parametrize("dims", [[1, 2], [2, 1, 1], [3], [1, 1, 2, 2]])
def test_redecomposition_is_idempotent(dims):
    W = wedderburn_decompose(BlockAlgebra(dims).structure())
    assert W.block_dims == sorted(dims)
    W2 = wedderburn_decompose(W.blocks.structure())
    assert W2.block_dims == W.block_dims


def test_isomorphism_is_star_isomorphism():
    A = group_algebra(group_by_name("D4")).structure
    W = wedderburn_decompose(A)
    Af = A.to_float()
    B = W.blocks.structure().to_float()
    f = LinearMapRep(Af, B, np.asarray(W.to_blocks.matrix, dtype=complex))
    assert verify_star_homomorphism(f, tol=1e-8).ok


def test_nilpotent_radical_is_rejected():
    # dual numbers C[x]/(x^2) with x* = x
    prods = [[((0, ONE),), ((1, ONE),)], [((1, ONE),), ()]]
    unit = zeros(2, True)
    unit[0] = ONE
    A = StructureAlgebra(prods, unit, identity(2, True), name="dual-numbers")
    with pytest.raises(DecompositionError):
        wedderburn_decompose(A)


def test_block_traces_are_normalized():
    W = wedderburn_decompose(group_algebra(symmetric_group(3)).structure)
    for k, t in enumerate(W.block_traces):
        for j in range(len(W.block_traces)):
            e = W.central_idempotents[j]
            assert complex(t(e)) == pytest.approx(1.0 if j == k else 0.0)


def test_identity_and_transpose_maps():
    M2 = BlockAlgebra([2]).structure()
    assert verify_star_homomorphism(LinearMapRep.identity(M2)).ok
    T = np.zeros((4, 4), dtype=object)
    for i in range(2):
        for j in range(2):
            T[j * 2 + i, i * 2 + j] = ONE
    T[T == 0] = zeros(1, True)[0]
    t = LinearMapRep(M2, M2, T)
    rep = verify_star_homomorphism(t)
    assert not rep.multiplicative and rep.violations
    assert verify_star_homomorphism(t, anti=True).ok


def test_composition_keeps_verified_flags():
    A = group_algebra(group_by_name("S3")).structure
    f = LinearMapRep.identity(A)
    verify_star_homomorphism(f)
    g = f.compose(f)
    assert g.is_star_hom and g.is_unital
    assert verify_star_homomorphism(g).ok


def test_estimator_interface():
    est = WedderburnDecomposition(seed=0).fit(BlockAlgebra([1, 2]).structure())
    x = np.arange(5, dtype=complex)
    y = est.transform(x)
    assert np.allclose(est.inverse_transform(y), x)
