import cmath
import json
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import qgw
from qgw.errors import StructureError
from qgw.presented import (
    CommutatorSearch,
    Presentation,
    WordFunctional,
    check_hopf_relations,
    check_local_confluence,
    commutator_space,
    double_torus,
    gram_matrix,
    hopf_descent_check,
    is_faithful_on_degree,
    noncommutative_torus,
    normal_form,
    quotient_map,
    quotient_presentation,
    suq2,
    trace_zero_certificate,
    unitary_group_au,
    verify_trace,
)
from qgw.scalars import ONE, exact

A, AS, G, GS = "alpha", "alpha*", "gamma", "gamma*"
Q = exact(Fraction(1, 2))
DATA = Path(qgw.__file__).parent / "data" / "presentations"


@pytest.fixture(scope="module")
def su():
    return suq2()


@pytest.fixture(scope="module")
def torus():
    return noncommutative_torus()


@pytest.fixture(scope="module")
def dtorus():
    return double_torus()


def close(p, q, tol=1e-9):
    keys = set(p) | set(q)
    return all(abs(complex(p.get(k, 0)) - complex(q.get(k, 0))) < tol for k in keys)


# normal forms -------------------------------------------------------------------

def test_suq2_normal_forms(su):
    assert normal_form(su, (G, A), 6).poly.terms == {(A, G): 1 / Q}
    # alpha* alpha = 1 - gamma* gamma, and gamma* gamma = gamma gamma* in normal form
    nf = normal_form(su, (AS, A), 6)
    assert nf.poly.terms == {(): ONE, (G, GS): -ONE} and nf.confluence_verified
    assert su.nf({(GS, G): ONE}) == {(G, GS): ONE}
    assert normal_form(su, (), 6).poly.terms == {(): ONE}


def test_normal_form_rejects_words_above_cap(su):
    with pytest.raises(StructureError):
        normal_form(su, (A, A, A), 2)


def test_unverified_presentation_is_flagged():
    # y x -> x and x y -> y: the overlap x y x gives x x one way and x the other
    P = Presentation(["x", "y"], {"x": "x", "y": "y"}, ["x", "y"],
                     {("y", "x"): {("x",): ONE}, ("x", "y"): {("y",): ONE}}, name="broken")
    with pytest.warns(RuntimeWarning):
        assert not normal_form(P, ("x",), 3).confluence_verified


@pytest.mark.parametrize("name", ["suq2", "nctorus", "double_torus"])
def test_strategy_independence(name, su, torus, dtorus):
    P = {"suq2": su, "nctorus": torus, "double_torus": dtorus}[name]
    rng = np.random.default_rng(0)
    for _ in range(200):
        w = tuple(P.generators[i] for i in rng.integers(0, len(P.generators), rng.integers(0, 7)))
        left = P.nf({w: P.one}, "leftmost")
        right = P.nf({w: P.one}, "rightmost")
        assert left == right if P.exact else close(left, right)


def test_pbw_counts(su):
    # alpha^k gamma^m gamma*^n plus alpha*^k gamma^m gamma*^n with k >= 1, counted by brute force
    def pbw(D):
        return sum(1 for k in range(D + 1) for m in range(D + 1) for n in range(D + 1) if k + m + n == D) + \
            sum(1 for k in range(1, D + 1) for m in range(D + 1) for n in range(D + 1) if k + m + n == D)
    assert su.normal_word_counts(6) == [pbw(D) for D in range(7)]
    assert [len(lv) for lv in su.normal_words(2)] == [1, 4, 9]


# confluence ------------------------------------------------------------------------

@pytest.mark.parametrize("which", ["suq2", "nctorus", "double_torus"])
def test_builtins_are_confluent(which, su, torus, dtorus):
    P = {"suq2": su, "nctorus": torus, "double_torus": dtorus}[which]
    assert check_local_confluence(P, 8) == []


def test_dropping_a_rule_breaks_confluence(su):
    rules = {l: r for l, r in su.rules.items() if l != (GS, G)}
    P = Presentation(su.generators, su.involution, su.order.order, rules, params=su.params, name="broken")
    bad = check_local_confluence(P, 8)
    assert bad
    assert all(len(b["word"]) <= 8 and b["difference"] for b in bad)


# commutators and certificates --------------------------------------------------------

def test_commutative_presentation_has_no_commutators():
    P = Presentation(["x"], {"x": "x"}, ["x"], {}, name="C[x]")
    assert commutator_space(P, 6) == []


def test_suq2_commutator_space(su):
    # [alpha*, alpha] = (1 - gamma gamma*) - (1 - q^2 gamma gamma*) = (q^2 - 1) gamma gamma*
    target = {(G, GS): Q * Q - 1}
    assert su.nf({(AS, A): ONE, (A, AS): -ONE}) == target
    search = CommutatorSearch(su).extend_to(2)
    assert search.express(target) is not None


def test_suq2_certificate(su):
    cert = trace_zero_certificate(su, {(GS, G): ONE}, 2)
    assert cert is not None and cert.sound and cert.cap == 2
    assert len(cert.commutators) == 1
    c, x, y = cert.commutators[0]
    sign = ONE if (x, y) == ((AS,), (A,)) else -ONE
    assert {x, y} == {(AS,), (A,)}
    assert c * sign == ONE / (Q * Q - 1) == exact(Fraction(-4, 3))


def test_certificate_monotone_in_cap(su):
    for cap in (2, 3, 4):
        cert = trace_zero_certificate(su, {(GS, G): ONE}, cap)
        assert cert is not None and cert.sound and cert.cap == 2


def test_suq2_certificates_for_gamma_only(su):
    assert trace_zero_certificate(su, {(AS, A): ONE}, 4) is None
    assert trace_zero_certificate(su, {(G, GS, G, GS): ONE}, 4) is not None


def test_torus_commutator_needs_degree_three(torus):
    zb = torus.params["q2"].conjugate()
    target = {("u",): zb - 1}
    # [v, u v*] = v u v* - u = (q^-2 - 1) u
    assert close(torus.nf({("v", "u", "v*"): 1, ("u",): -1}), target)
    assert CommutatorSearch(torus).extend_to(2).express(target) is None
    assert CommutatorSearch(torus).extend_to(3).express(target) is not None


def test_torus_unit_has_no_certificate(torus):
    assert trace_zero_certificate(torus, {("u*", "u"): 1}, 4) is None


@pytest.mark.parametrize("m,n", [(1, 0), (0, 1), (-1, 0), (1, 1), (2, -1), (-1, -1), (0, -2)])
def test_torus_monomials_are_commutator_sums(torus, m, n):
    word = ("u",) * m if m >= 0 else ("u*",) * -m
    word += ("v",) * n if n >= 0 else ("v*",) * -n
    target = torus.nf({word: 1})
    cert = trace_zero_certificate(torus, target, abs(m) + abs(n) + 2)
    assert cert is not None and cert.sound


def test_au_certificate():
    P = unitary_group_au((1, 2))
    assert P.relation_level
    cert = trace_zero_certificate(P, {("u12*", "u12"): ONE}, 4)
    assert cert is not None and cert.sound
    assert cert.cap <= 4 and cert.relation_terms


def test_double_torus_unit_has_no_certificate(dtorus):
    assert trace_zero_certificate(dtorus, {(): 1}, 4) is None


# quotients ---------------------------------------------------------------------------

def test_suq2_quotient_is_laurent(su):
    Qp = quotient_presentation(su, [G], 6)
    counts = Qp.normal_word_counts(6)
    assert [sum(counts[:d + 1]) for d in range(7)] == [2 * d + 1 for d in range(7)]
    assert Qp.nf({(A, AS): ONE}) == {(): ONE} == Qp.nf({(AS, A): ONE})
    pi = quotient_map(su, Qp)
    assert pi({(G, A): ONE}).is_zero and pi({(A, A): ONE}).terms == {(A, A): ONE}


def test_zero_ideal_leaves_presentation_unchanged(su):
    Qp = quotient_presentation(su, [], 6)
    assert Qp.rules == su.rules and Qp.normal_word_counts(4) == su.normal_word_counts(4)


def test_torus_quotient_by_u_minus_one():
    # with q^2 = 1 the torus is commutative and u = 1 leaves Laurent polynomials in v
    flat = noncommutative_torus(exact(1))
    Qp = quotient_presentation(flat, [{("u",): 1, (): -1}], 6)
    assert not Qp.collapsed
    counts = Qp.normal_word_counts(5)
    assert [sum(counts[:d + 1]) for d in range(6)] == [2 * d + 1 for d in range(6)]
    assert all(set(w) <= {"v", "v*"} for lv in Qp.normal_words(5) for w in lv)


def test_genuine_torus_quotient_by_u_minus_one_collapses(torus):
    # u = 1 gives v = q^2 v, so v = 0, contradicting v* v = 1
    Qp = quotient_presentation(torus, [{("u",): 1, (): -1}], 6)
    assert Qp.collapsed and Qp.normal_word_counts(3) == [0, 0, 0, 0]


# traces ------------------------------------------------------------------------------

def test_torus_trace(torus):
    rep = verify_trace(torus, WordFunctional("unit", exact=False), 6)
    assert rep.ok and rep.pairs_checked > 0


def test_double_torus_trace(dtorus):
    assert verify_trace(dtorus, dtorus.trace, 6).ok
    assert is_faithful_on_degree(dtorus, dtorus.trace, 3)
    words, Gm = gram_matrix(dtorus, dtorus.trace, 2)
    assert Gm.shape == (len(words), len(words))
    assert np.allclose(Gm, Gm.conj().T)


def test_degree_functional_is_not_a_trace(torus):
    rep = verify_trace(torus, lambda w: len(w), 4)
    assert not rep.ok and rep.witness["x"] and rep.witness["y"]


# Hopf data ---------------------------------------------------------------------------

def test_hopf_data_respects_relations(su, dtorus):
    assert check_hopf_relations(su) == []
    assert check_hopf_relations(dtorus) == []


def test_descent(su, dtorus):
    assert hopf_descent_check(su, su.hopf, [G, GS], 6).ok
    assert hopf_descent_check(dtorus, dtorus.hopf, ["b", "c"], 6).ok
    assert hopf_descent_check(su, su.hopf, [], 6).ok


def test_descent_failure_is_reported(dtorus):
    # a = 0 kills the commutative summand, but Delta(a) = a (x) a + b (x) c keeps b (x) c
    rep = hopf_descent_check(dtorus, dtorus.hopf, ["a"], 6)
    assert not rep.ok and set(rep.residuals) == {"a", "a*"}
    assert (("b",), ("c",)) in rep.residuals["a"]


# serialization -----------------------------------------------------------------------

@pytest.mark.parametrize("factory", [suq2, noncommutative_torus, double_torus, unitary_group_au])
def test_json_round_trip(factory):
    P = factory()
    text = P.dumps()
    R = Presentation.from_json(json.loads(text))
    assert R.dumps() == text
    assert R.normal_word_counts(3) == P.normal_word_counts(3)


@pytest.mark.parametrize("name", ["suq2", "nctorus", "double_torus", "au"])
def test_shipped_files_load(name):
    P = Presentation.load(DATA / f"{name}.json")
    assert P.dumps() == (DATA / f"{name}.json").read_text().strip() or json.loads(P.dumps()) == \
        json.loads((DATA / f"{name}.json").read_text())


def test_shipped_double_torus_keeps_its_trace():
    P = Presentation.load(DATA / "double_torus.json")
    assert P.trace is not None and verify_trace(P, P.trace, 4).ok


def test_bad_presentation_documents(tmp_path):
    with pytest.raises(StructureError):
        Presentation(["x"], {}, ["x"])
    with pytest.raises(StructureError):
        Presentation(["x", "y"], {"x": "y", "y": "y"})
    with pytest.raises(StructureError):
        Presentation(["x"], {"x": "x"}, ["x"], {("x",): {("x", "x"): ONE}})
    path = tmp_path / "bad.json"
    path.write_text('{"generators": ["x"],\n "involution": {"x": "x"}, "rules": [{"lhs": ["q"], "rhs": []}]}')
    with pytest.raises(StructureError, match="bad.json"):
        Presentation.load(path)


def test_float_torus_parameter():
    P = noncommutative_torus()
    assert not P.exact and abs(P.params["q2"] - cmath.exp(2j * cmath.pi / 3)) < 1e-15
    with pytest.raises(StructureError):
        noncommutative_torus(2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        normal_form(P, ("u", "v"), 4)
