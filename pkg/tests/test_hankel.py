import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgw.corep import HankelRealization, HankelWindow, hankel_ap_test
from qgw.errors import StructureError

GRID = 24  # candidate frequencies exp(2 pi i j / GRID)


def exact_rank(rows):
    """Rank over Q by fraction-exact Gaussian elimination."""
    M = [[Fraction(x) for x in r] for r in rows]
    rank, cols = 0, len(M[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c] / M[rank][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def integer_window(f, W):
    lo = -W
    return [[f(lo + i + j) for j in range(W + 1)] for i in range(W + 1)]


def trig(freqs, coeffs):
    lams = [np.exp(2j * np.pi * j / GRID) for j in freqs]
    return lambda n: sum(c * l ** n for c, l in zip(coeffs, lams))


trig_poly = st.tuples(
    st.lists(st.integers(0, GRID - 1), min_size=1, max_size=2, unique=True),
    st.lists(st.floats(0.5, 2.0), min_size=2, max_size=2),
).map(lambda t: (t[0], t[1][:len(t[0])]))


def test_window_matrix_entries():
    w = HankelWindow.from_function(lambda n: n * n + 1j * n, 3)
    H = w.matrix()
    for i in range(4):
        for j in range(4):
            n = -3 + i + j
            assert H[i, j] == n * n + 1j * n


def test_character_is_ap():
    lam = np.exp(0.7j)
    res = hankel_ap_test(HankelWindow.from_function(lambda n: lam ** n, 6))
    assert res.rank == 1 and res.verdict == "ap"
    assert np.allclose(res.U, [[lam]]) and res.unitarity_defect < 1e-12


def test_linear_function_is_obstructed():
    W = 6
    assert exact_rank(integer_window(lambda n: n, W)) == 2
    res = hankel_ap_test(HankelWindow.from_function(lambda n: n, W))
    assert res.rank == 2 and res.unitarity_defect > 0.1 and res.verdict == "obstructed"
    assert res.residual < 1e-8
    # one Jordan block of size 2 at eigenvalue 1
    assert len(res.jordan_blocks) == 1 and res.jordan_blocks[0][1] == 2
    assert abs(res.jordan_blocks[0][0] - 1) < 1e-6


def test_delta_rank_grows_with_window():
    ranks = []
    for W in range(1, 9):
        f = lambda n: int(n == 0)  # noqa: E731
        assert exact_rank(integer_window(f, W)) == W + 1
        res = hankel_ap_test(HankelWindow.from_function(f, W))
        assert res.rank == W + 1 and res.inconclusive
        ranks.append(res.rank)
    assert all(a < b for a, b in zip(ranks, ranks[1:]))


def test_zero_window():
    res = hankel_ap_test(HankelWindow(np.zeros(5)))
    assert res.rank == 0 and res.verdict == "ap"


@given(st.lists(st.integers(0, GRID - 1), min_size=1, max_size=3, unique=True),
       st.lists(st.floats(0.5, 2.0), min_size=3, max_size=3))
def test_trig_polynomials_are_ap(freqs, coeffs):
    k = len(freqs)
    W = 2 * k + 2
    res = hankel_ap_test(HankelWindow.from_function(trig(freqs, coeffs), W))
    assert res.rank == k
    assert res.unitarity_defect < 1e-8 and res.residual < 1e-8 and res.verdict == "ap"


@settings(max_examples=50)
@given(trig_poly, trig_poly)
def test_rank_is_subadditive_and_submultiplicative(p1, p2):
    W = 12
    f, g = trig(*p1), trig(*p2)
    r = lambda h: hankel_ap_test(HankelWindow.from_function(h, W)).rank  # noqa: E731
    rf, rg = r(f), r(g)
    assert r(lambda n: f(n) + g(n)) <= rf + rg
    assert r(lambda n: f(n) * g(n)) <= rf * rg


def test_realization_predicts_off_window():
    f = trig([1, 5], [1.0, 0.5])
    est = HankelRealization().fit(HankelWindow.from_function(f, 6))
    assert est.rank_ == 2 and est.verdict_ == "ap"
    ns = np.array([-10, 0, 17])
    assert np.allclose(est.predict(ns), [f(n) for n in ns], atol=1e-6)


def test_window_json(tmp_path):
    w = HankelWindow.from_function(lambda n: 1j ** n, 2)
    doc = w.to_json()
    assert HankelWindow.from_json(json.loads(json.dumps(doc))).values.tolist() == w.values.tolist()
    assert HankelWindow.from_json([1, "2+1i", [0, 1]]).values.tolist() == [1, 2 + 1j, 1j]
    with pytest.raises(StructureError):
        HankelWindow.from_json({"values": [1, 2]})
    with pytest.raises(StructureError, match=r"values\[1\]"):
        HankelWindow.from_json({"values": [1, "abc", 2]})
    path = tmp_path / "w.json"
    path.write_text('{"values": [1, 2,\n 3,]}')
    with pytest.raises(StructureError, match=r"w\.json:2:"):
        HankelWindow.load(path)
