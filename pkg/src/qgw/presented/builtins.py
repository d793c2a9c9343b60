"""Built-in presentations: SU_q(2), the noncommutative torus, the quantum double torus, A_u(Q)."""
from __future__ import annotations

import cmath
from fractions import Fraction

from ..errors import StructureError
from ..scalars import ONE, ExactComplex, exact
from .presentation import HopfData, Presentation
from .traces import WordFunctional

A, AS, G, GS = "alpha", "alpha*", "gamma", "gamma*"


def suq2(q=Fraction(1, 2)) -> Presentation:
    """SU_q(2) with exact rational ``0 < q < 1``.

    Rules (generator order ``alpha > alpha* > gamma > gamma*``)::

        gamma alpha   -> q^-1 alpha gamma       gamma* alpha  -> q^-1 alpha gamma*
        gamma* gamma  -> gamma gamma*           alpha* alpha  -> 1 - gamma gamma*
        alpha alpha*  -> 1 - q^2 gamma gamma*   gamma* alpha* -> q alpha* gamma*
        gamma alpha*  -> q alpha* gamma

    The comultiplication ``Delta alpha = alpha (x) alpha - q gamma* (x) gamma``,
    ``Delta gamma = gamma (x) alpha + alpha* (x) gamma`` is an external input
    (standard Woronowicz formulas), flagged as such in the Hopf data.
    """
    q = exact(q)
    if q.im or not (0 < q.re < 1):
        raise StructureError("SU_q(2) needs a rational 0 < q < 1")
    qi = ONE / q
    rules = {
        (G, A): {(A, G): qi},
        (GS, A): {(A, GS): qi},
        (GS, G): {(G, GS): ONE},
        (AS, A): {(): ONE, (G, GS): -ONE},
        (A, AS): {(): ONE, (G, GS): -(q * q)},
        (GS, AS): {(AS, GS): q},
        (G, AS): {(AS, G): q},
    }
    hopf = HopfData(
        delta={A: {((A,), (A,)): ONE, ((GS,), (G,)): -q},
               G: {((G,), (A,)): ONE, ((AS,), (G,)): ONE}},
        epsilon={A: ONE, G: ExactComplex(0)},
        exact=True, external=True,
        notes="comultiplication is the standard external formula, not derived here",
    )
    P = Presentation([A, AS, G, GS], {A: AS, AS: A, G: GS, GS: G}, [A, AS, G, GS], rules,
                     params={"q": q}, exact=True, name="SUq2", hopf=hopf)
    return P


def _unit_circle(q2, exact_mode):
    if exact_mode:
        z = exact(q2) if not isinstance(q2, ExactComplex) else q2
        if z.re * z.re + z.im * z.im != 1:
            raise StructureError("q^2 must lie on the unit circle")
        return z, z.conjugate()
    z = complex(q2)
    if abs(abs(z) - 1) > 1e-12:
        raise StructureError("q^2 must lie on the unit circle")
    return z, z.conjugate()


def noncommutative_torus(q2=None, exact_mode: bool | None = None) -> Presentation:
    """Rotation algebra: unitaries ``u, v`` with ``u v = q^2 v u``.

    ``q2`` defaults to ``exp(2 pi i / 3)`` in float mode; exact values on the
    unit circle with Gaussian-rational coordinates (``-1``, ``i``) stay exact.
    """
    if q2 is None:
        q2 = cmath.exp(2j * cmath.pi / 3)
    if exact_mode is None:
        exact_mode = not isinstance(q2, (float, complex))
    z, zb = _unit_circle(q2, exact_mode)
    one = ONE if exact_mode else 1.0 + 0j
    u, us, v, vs = "u", "u*", "v", "v*"
    rules = {
        (us, u): {(): one}, (u, us): {(): one},
        (vs, v): {(): one}, (v, vs): {(): one},
        (v, u): {(u, v): zb},
        (vs, u): {(u, vs): z},
        (v, us): {(us, v): z},
        (vs, us): {(us, vs): zb},
    }
    hopf = None
    P = Presentation([u, us, v, vs], {u: us, us: u, v: vs, vs: v}, [u, us, v, vs], rules,
                     params={"q2": z}, exact=exact_mode, name="nctorus", hopf=hopf)
    P.trace = WordFunctional("unit", exact=exact_mode)
    return P


def double_torus(q2=None, cap: int = 8) -> Presentation:
    """Quantum double torus ``C(T^2) + A_q`` (float mode).

    ``a, d`` generate the commutative torus summand (unit ``P``), ``b, c`` the
    rotation algebra summand (unit ``1 - P``) with ``b c = q^2 c b``; products
    across summands vanish.  The generator order makes ``c c*`` the normal word
    of ``1 - P``.  Rules are obtained by degree-bounded completion of the
    defining relations up to ``cap``.

    The attached trace is half the Haar trace of each summand: empty word -> 1,
    a nonempty zero-net-exponent word within one summand -> 1/2, else 0.
    """
    if q2 is None:
        q2 = cmath.exp(2j * cmath.pi / 3)
    z, zb = _unit_circle(q2, False)
    one = 1.0 + 0j
    a, as_, d, ds, b, bs, c, cs = "a", "a*", "d", "d*", "b", "b*", "c", "c*"
    gens = [a, as_, d, ds, b, bs, c, cs]
    inv = {a: as_, as_: a, d: ds, ds: d, b: bs, bs: b, c: cs, cs: c}
    E = (c, cs)
    rels = []

    def rel(*terms):
        p = {}
        for coef, w in terms:
            p[tuple(w)] = p.get(tuple(w), 0) + coef
        rels.append({w: v for w, v in p.items() if abs(v) > 0})

    for x, y in ((as_, a), (a, as_), (ds, d), (d, ds)):
        rel((one, (x, y)), (-one, ()), (one, E))
    for x, y in ((bs, b), (b, bs), (cs, c)):
        rel((one, (x, y)), (-one, E))
    for x in (a, as_):
        for y in (d, ds):
            rel((one, (x, y)), (-one, (y, x)))
    left, right = (a, as_, d, ds), (b, bs, c, cs)
    for x in left:
        for y in right:
            rel((one, (x, y)))
            rel((one, (y, x)))
    # b c = q^2 c b and its consequences in the unitary corner
    rel((one, (b, c)), (-z, (c, b)))
    rel((one, (c, bs)), (-z, (bs, c)))
    rel((one, (b, cs)), (-zb, (cs, b)))
    rel((one, (cs, bs)), (-zb, (bs, cs)))
    for x in right:
        rel((one, E + (x,)), (-one, (x,)))
        rel((one, (x,) + E), (-one, (x,)))
    hopf = HopfData(
        delta={a: {((a,), (a,)): one, ((b,), (c,)): one},
               b: {((a,), (b,)): one, ((b,), (d,)): one},
               c: {((c,), (a,)): one, ((d,), (c,)): one},
               d: {((c,), (b,)): one, ((d,), (d,)): one}},
        epsilon={a: one, b: 0j, c: 0j, d: one},
        exact=False,
    )
    base = Presentation(gens, inv, gens, None, rels, params={"q2": z}, exact=False, name="double_torus",
                        hopf=hopf)
    P = base.completed(cap)
    P.trace = WordFunctional("summands", [((a, as_, d, ds), 0.5 + 0j), ((b, bs, c, cs), 0.5 + 0j)], exact=False)
    return P


def unitary_group_au(Q_diag=(1, 2)) -> Presentation:
    """``A_u(Q)`` for diagonal positive ``Q``, at relation level.

    Generators ``u{k}{l}`` and ``u{k}{l}*``; relations are the entries of
    ``u* u = u u* = 1`` and of the two ``Q``-twisted conjugate unitarity
    conditions.  No rewriting system is attempted.
    """
    qs = [exact(x) for x in Q_diag]
    m = len(qs)
    idx = range(1, m + 1)
    gens, inv = [], {}
    for k in idx:
        for l in idx:
            g = f"u{k}{l}"
            gens += [g, g + "*"]
            inv[g], inv[g + "*"] = g + "*", g
    u = lambda k, l: f"u{k}{l}"  # noqa: E731
    us = lambda k, l: f"u{k}{l}*"  # noqa: E731
    rels = []

    def add(terms, k, l):
        p = {}
        for c, w in terms:
            p[w] = p.get(w, 0) + c
        if k == l:
            p[()] = p.get((), 0) - ONE
        rels.append({w: c for w, c in p.items() if c})

    for k in idx:
        for l in idx:
            # (u* u)_{kl} = sum_p u_pk* u_pl
            add([(ONE, (us(p, k), u(p, l))) for p in idx], k, l)
            # (u u*)_{kl} = sum_p u_kp u_lp*
            add([(ONE, (u(k, p), us(l, p))) for p in idx], k, l)
            # (u^T Q conj(u) Q^-1)_{kl} = sum_p (q_p / q_l) u_pk u_pl*
            add([(qs[p - 1] / qs[l - 1], (u(p, k), us(p, l))) for p in idx], k, l)
            # (Q conj(u) Q^-1 u^T)_{kl} = sum_p (q_k / q_p) u_kp* u_lp
            add([(qs[k - 1] / qs[p - 1], (us(k, p), u(l, p))) for p in idx], k, l)
    hopf = HopfData(
        delta={u(k, l): {((u(k, p),), (u(p, l),)): ONE for p in idx} for k in idx for l in idx},
        epsilon={u(k, l): (ONE if k == l else ExactComplex(0)) for k in idx for l in idx},
        exact=True,
    )
    return Presentation(gens, inv, gens, None, rels, params={f"q{k}": x for k, x in zip(idx, qs)}, exact=True,
                        name=f"A_u(diag({','.join(str(x) for x in qs)}))", hopf=hopf)


BUILTINS = {
    "suq2": suq2,
    "nctorus": noncommutative_torus,
    "double_torus": double_torus,
    "au": unitary_group_au,
}
