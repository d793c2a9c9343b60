import numpy as np
import pytest

from conftest import corpus_qg
from qgw.corep import (
    Corepresentation,
    decompose_corep,
    fusion_table,
    intertwiners,
    is_unitary_corep,
    matrix_element_span,
    regular_corep,
    tensor_corep,
    trivial_corep,
)
from qgw.errors import StructureError
from qgw.hopf import cyclic_group, function_algebra, symmetric_group
from qgw.scalars import ONE, ZERO, to_float_array


def permutation_corep(G):
    """u_kl = delta_{k^-1 l} on C(G), built straight from the Cayley table."""
    n = G.order
    E = np.full((n, n, n), ZERO, dtype=object)
    for k in range(n):
        for l in range(n):
            E[k, l, G.mul(G.inverse[k], l)] = ONE
    return E


def test_trivial_corep_is_unitary(corpus_member):
    assert is_unitary_corep(corpus_member, trivial_corep(corpus_member))


def test_group_likes_are_one_dimensional_coreps():
    Q = corpus_qg("S3", "group")
    for g in range(6):
        assert is_unitary_corep(Q, Corepresentation(Q, Q.structure.basis(g).reshape(1, 1, -1)))


def test_non_coreps_are_rejected():
    Q = function_algebra(cyclic_group(2))
    # delta_e is a projection, not a unitary
    assert not is_unitary_corep(Q, Corepresentation(Q, Q.structure.basis(0).reshape(1, 1, -1)))
    # 2 * 1 is not unitary
    assert not is_unitary_corep(Q, Corepresentation(Q, (Q.structure.unit * 2).reshape(1, 1, -1)))
    with pytest.raises(StructureError):
        Corepresentation(Q, np.zeros((2, 3, 2)))


@pytest.mark.parametrize("G", [cyclic_group(3), symmetric_group(3)])
def test_regular_corep_of_function_algebra(G):
    Q = function_algebra(G)
    E = permutation_corep(G)
    assert is_unitary_corep(Q, Corepresentation(Q, E))
    assert np.array_equal(regular_corep(Q).entries, E)


def test_regular_corep_is_unitary_on_corpus(corpus_member):
    assert is_unitary_corep(corpus_member, regular_corep(corpus_member))


def test_irreducible_input_is_returned():
    Q = corpus_qg("S3", "function")
    dec = decompose_corep(Q, trivial_corep(Q))
    assert dec.multiplicities == [1] and dec.irreducibles[0] is dec.corep


def test_decompose_z3():
    Q = corpus_qg("Z3", "function")
    dec = decompose_corep(Q, regular_corep(Q))
    assert dec.dims == [1, 1, 1] and dec.multiplicities == [1, 1, 1]
    # the three characters n -> w^{kn} of Z3, as functions on the group
    chars = sorted(np.round(np.angle(to_float_array(v.character())[1]), 6) for v in dec.irreducibles)
    assert np.allclose(chars, sorted(np.round(np.angle(np.exp(2j * np.pi * k / 3)), 6) for k in range(3)))


def test_decompose_s3_matches_peter_weyl():
    Q = corpus_qg("S3", "function")
    dec = decompose_corep(Q, regular_corep(Q))
    # each irreducible appears with multiplicity equal to its dimension
    assert dec.dims == [1, 1, 2] and dec.multiplicities == [1, 1, 2]
    assert sum(d * m for d, m in zip(dec.dims, dec.multiplicities)) == 6
    # irreducible corepresentations of C(S3) are the blocks of C*(S3)
    assert dec.dims == sorted(corpus_qg("S3", "group").algebra.block_dims)


def test_decomposition_is_deterministic():
    Q = corpus_qg("D4", "function")
    a = decompose_corep(Q, regular_corep(Q))
    b = decompose_corep(Q, regular_corep(Q))
    assert a.summary() == b.summary()
    for u, v in zip(a.irreducibles, b.irreducibles):
        assert np.allclose(to_float_array(u.character()), to_float_array(v.character()))


def test_intertwiners_of_regular_corep():
    Q = corpus_qg("S3", "function")
    T = intertwiners(regular_corep(Q))
    # dim End(u) = sum of squared multiplicities = 1 + 1 + 4
    assert len(T) == 6


def test_tensor_of_unitary_coreps_is_unitary():
    Q = corpus_qg("S3", "function")
    u = regular_corep(Q)
    dec = decompose_corep(Q, u)
    std = dec.irreducibles[2]
    t = tensor_corep(std, std)
    assert t.dim == 4 and is_unitary_corep(Q, t)
    # std (x) std = trivial + sign + std
    d2 = decompose_corep(Q, t)
    assert d2.dims == [1, 1, 2] and d2.multiplicities == [1, 1, 1]


def test_matrix_element_span_examples():
    assert matrix_element_span(corpus_qg("Z2", "function")).full
    s = matrix_element_span(corpus_qg("S3", "group"))
    assert s.full and s.rank == 6


def test_matrix_element_span_corpus(corpus_member):
    s = matrix_element_span(corpus_member)
    assert s.full and sum(d * d for d in s.irreducible_dims) == corpus_member.dim


@pytest.mark.parametrize("name,kind", [("Z3", "function"), ("Z3", "group"), ("S3", "function"), ("S3", "group")])
def test_fusion_tables(name, kind):
    F = fusion_table(corpus_qg(name, kind))
    assert F.is_associative() and F.has_unit()
    d = np.array(F.dims)
    # dimensions multiply: dim(a) dim(b) = sum_c N_ab^c dim(c)
    assert np.array_equal(np.einsum("abc,c->ab", F.table, d), np.outer(d, d))


def test_s3_fusion_rules():
    F = fusion_table(corpus_qg("S3", "function"))
    assert F.dims == [1, 1, 2]
    unit = F.unit_index()
    sign = 1 - unit
    assert list(F.table[sign, sign]) == [int(c == unit) for c in range(3)]
    assert list(F.table[2, 2]) == [1, 1, 1]


def test_group_algebra_fusion_is_the_group_law():
    G = symmetric_group(3)
    F = fusion_table(corpus_qg("S3", "group"))
    assert F.dims == [1] * 6
    # every product of group-likes is a single group-like, and the table is a Latin square
    assert np.all(F.table.sum(axis=2) == 1)
    prod = F.table.argmax(axis=2)
    assert all(sorted(row) == list(range(6)) for row in prod)
    assert not np.array_equal(prod, prod.T) and not G.is_abelian()


def test_dual_pairs_have_matching_dimension_counts():
    for name in ("Z3", "S3"):
        fa, ga = corpus_qg(name, "function"), corpus_qg(name, "group")
        for Q in (fa, ga):
            assert sum(d * d for d in fusion_table(Q).dims) == Q.dim
        # irreducibles of C(G) number the conjugacy classes; those of C*(G) number the elements
        assert len(fusion_table(ga).dims) == ga.dim
