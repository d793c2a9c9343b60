import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import corpus_qg
from qgw.algebra import StructureAlgebra
from qgw.errors import StructureError
from qgw.hopf import (
    FiniteGroupTable,
    FiniteQuantumGroup,
    counit_projection,
    cyclic_group,
    dual,
    function_algebra,
    group_algebra,
    group_by_name,
    haar_state,
    is_kac,
    symmetric_group,
    verify_density_gest,
    verify_hopf_axioms,
)
from qgw.scalars import ExactComplex, exact, to_float_array


def vec(*xs):
    return np.array([exact(Fraction(x)) for x in xs], dtype=object)


def test_function_algebra_z2():
    Q = function_algebra(cyclic_group(2))
    # Delta(delta_1) = delta_0 (x) delta_1 + delta_1 (x) delta_0
    assert [int(x.re) for x in Q.delta[:, 1]] == [0, 1, 1, 0]
    assert Q.counit[0] == exact(1) and Q.counit[1] == exact(0)


def test_function_algebra_s3_coinverse_is_involutive():
    G = symmetric_group(3)
    Q = function_algebra(G)
    K = to_float_array(Q.antipode)
    assert np.array_equal(K @ K, np.eye(6))
    for g in range(6):
        assert G.mul(g, G.inverse[g]) == G.identity


def test_group_algebra_blocks():
    assert list(group_algebra(cyclic_group(2)).algebra.block_dims) == [1, 1]
    assert sorted(group_algebra(symmetric_group(3)).algebra.block_dims) == [1, 1, 2]


def test_group_likes_are_unitary():
    Q = group_algebra(group_by_name("S3"))
    A = Q.structure
    for g in range(Q.dim):
        u = A.basis(g)
        assert np.array_equal(A.mul(A.star(u), u), A.unit)
        T = Q.coproduct_matrix(g)
        assert T[g, g] == exact(1) and sum(1 for x in T.reshape(-1) if x) == 1


@pytest.mark.parametrize("name,kind", [("Z3", "function"), ("S3", "group")])
def test_hopf_axioms_pass(name, kind):
    rep = verify_hopf_axioms(corpus_qg(name, kind))
    assert rep.ok, rep.failures
    assert rep.checks["galois_left"] and rep.checks["galois_right"]


def test_hopf_axioms_hold_on_corpus(corpus_member):
    assert verify_hopf_axioms(corpus_member).ok


def test_corrupted_comultiplication_is_caught():
    Q = function_algebra(cyclic_group(3))
    D = Q.delta.copy()
    D[:, [1, 2]] = D[:, [2, 1]]
    bad = FiniteQuantumGroup(Q.structure, D, Q.counit, Q.antipode)
    rep = verify_hopf_axioms(bad)
    assert not rep.checks["coassociativity"]
    witness = next(f for f in rep.failures if f["check"] == "coassociativity")["witness"]
    assert witness["defect"] > 0


def test_haar_state_examples():
    h = haar_state(function_algebra(cyclic_group(2)))
    assert list(h.coeffs) == list(vec(Fraction(1, 2), Fraction(1, 2)))
    G = cyclic_group(3)
    h = haar_state(group_algebra(G))
    assert [h.coeffs[g] for g in range(3)] == [exact(1 if g == G.identity else 0) for g in range(3)]


def test_haar_is_convolution_idempotent(corpus_member):
    h = haar_state(corpus_member)
    assert np.array_equal(corpus_member.convolve(h, h), h.coeffs)
    # h o kappa = h
    assert np.array_equal(to_float_array(h.coeffs) @ to_float_array(corpus_member.antipode),
                          to_float_array(h.coeffs))


def test_haar_rejects_non_hopf_data():
    Q = function_algebra(cyclic_group(2))
    D = np.zeros_like(Q.delta)
    D[:] = exact(0)
    with pytest.raises(StructureError):
        haar_state(FiniteQuantumGroup(Q.structure, D, Q.counit, Q.antipode))


@pytest.mark.parametrize("G,expected", [(cyclic_group(2), [1, 1]), (symmetric_group(3), [1, 1, 2])])
def test_dual_of_function_algebra(G, expected):
    D = dual(function_algebra(G))
    assert verify_hopf_axioms(D).ok
    assert sorted(D.algebra.block_dims) == sorted(group_algebra(G).algebra.block_dims) == expected


def test_biduality_blocks():
    Q = function_algebra(symmetric_group(3))
    assert sorted(dual(dual(Q)).algebra.block_dims) == sorted(Q.algebra.block_dims)


def test_counit_projection_function_algebra():
    G = symmetric_group(3)
    p = counit_projection(function_algebra(G))
    assert [int(x.re) for x in p] == [int(g == G.identity) for g in range(6)]


def test_counit_projection_group_algebra_z2():
    p = counit_projection(group_algebra(cyclic_group(2)))
    # solving h U_g = h gives h = (U_e + U_g)/2
    assert list(p) == list(vec(Fraction(1, 2), Fraction(1, 2)))


def test_counit_projection_properties(corpus_member):
    Q = corpus_member
    A = Q.structure
    p = counit_projection(Q)
    assert np.array_equal(A.mul(p, p), p) and np.array_equal(A.star(p), p)
    for k in range(Q.dim):
        assert np.array_equal(A.mul(A.mul(p, A.basis(k)), p), p * Q.counit[k])
    h = haar_state(Q)
    assert complex(h(p)).real > 0


@pytest.mark.parametrize("name,kind", [("Z2", "function"), ("S3", "function"), ("S3", "group")])
def test_density(name, kind):
    assert verify_density_gest(corpus_qg(name, kind))


@pytest.mark.parametrize("name,kind", [("S3", "function"), ("S3", "group")])
def test_kac_items(name, kind):
    rep = is_kac(corpus_qg(name, kind))
    assert rep["kappa_involutive"] and rep["haar_tracial"] and rep["dual_haar_tracial"] and rep["kac"]


def test_corpus_is_kac(corpus_member):
    assert is_kac(corpus_member)["kac"]


def test_group_json_round_trip(tmp_path):
    G = group_by_name("D4")
    text = G.dumps()
    H = FiniteGroupTable.from_json(json.loads(text))
    assert H == G and H.dumps() == text
    path = tmp_path / "d4.json"
    path.write_text(text)
    assert FiniteGroupTable.load(path) == G


def test_bad_group_documents(tmp_path):
    with pytest.raises(StructureError, match="inverse"):
        FiniteGroupTable(["a", "b"], [[0, 1], [1, 1]], 0)
    with pytest.raises(StructureError, match="associativity"):
        FiniteGroupTable(["e", "a", "b"], [[0, 1, 2], [1, 0, 0], [2, 0, 0]], 0)
    with pytest.raises(StructureError, match="identity"):
        FiniteGroupTable.from_json({"elements": ["a"], "table": [[0]]})
    path = tmp_path / "broken.json"
    path.write_text('{"elements": ["e"],\n "table": [[0]] "identity": 0}')
    with pytest.raises(StructureError, match=r"broken\.json:2:"):
        FiniteGroupTable.load(path)


def test_float_mode_agrees():
    Q = group_algebra(symmetric_group(3))
    F = Q.to_float()
    assert isinstance(F.structure, StructureAlgebra) and not F.exact
    assert verify_hopf_axioms(F).ok
    assert np.allclose(to_float_array(haar_state(F).coeffs), to_float_array(haar_state(Q).coeffs))
    assert isinstance(haar_state(Q).coeffs[0], ExactComplex)
