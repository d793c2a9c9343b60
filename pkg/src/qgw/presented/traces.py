"""Traces on presented algebras: commutator spaces, trace-zero certificates, trace checks.

A trace-zero certificate for ``t`` is an explicit identity

    t = sum_i c_i [x_i, y_i]  (+ sum_j d_j x_j r_j y_j for relation-level presentations)

which any reader can re-expand and rewrite without trusting the search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..linalg import Echelon
from ..scalars import ONE, ZERO, format_scalar, get_tolerance
from .presentation import NCPolynomial, Presentation, _as_word
from .rewriting import is_zero_coeff, padd, pmul


def _terms(P: Presentation, t) -> dict:
    if isinstance(t, NCPolynomial):
        return dict(t.terms)
    if isinstance(t, dict):
        return {_as_word(w): P.coeff(c) for w, c in t.items()}
    return {_as_word(t): P.one}


# word functionals ------------------------------------------------------------------

class WordFunctional:
    """A linear functional defined on monomials.

    ``kind="unit"`` is the indicator of the empty word.  ``kind="summands"``
    takes a list of ``(letters, weight)``: a nonempty word built only from one
    group of letters, with zero net exponent for every generator pair, gets that
    weight; the empty word gets 1; everything else gets 0.  ``kind="callable"``
    wraps an arbitrary Python function on words (not serializable).
    """

    def __init__(self, kind: str = "unit", summands=None, func=None, exact: bool = True):
        self.kind = kind
        self.summands = [(frozenset(letters), w) for letters, w in (summands or [])]
        self.func = func
        self.exact = exact

    def _one(self):
        return ONE if self.exact else 1.0 + 0j

    def _zero(self):
        return ZERO if self.exact else 0j

    def __call__(self, w, involution=None):
        w = tuple(w)
        if self.kind == "callable":
            return self.func(w)
        if not w:
            return self._one()
        if self.kind == "unit":
            return self._zero()
        letters = set(w)
        for group, weight in self.summands:
            if letters <= group:
                if involution is None or _net_zero(w, involution):
                    return weight
                return self._zero()
        return self._zero()

    def on(self, P: Presentation, p: dict):
        acc = self._zero()
        for w, c in P.nf(p).items():
            v = self(w, P.involution)
            if v:
                acc = acc + c * v
        return acc

    def to_json(self):
        if self.kind == "unit":
            return {"kind": "unit"}
        if self.kind == "summands":
            return {"kind": "summands",
                    "summands": [{"letters": sorted(g), "weight": format_scalar(w)} for g, w in self.summands]}
        raise ValueError("callable functionals cannot be serialized")

    @classmethod
    def from_json(cls, doc, exact: bool):
        from ..scalars import parse_scalar

        kind = doc.get("kind", "unit")
        if kind == "unit":
            return cls("unit", exact=exact)
        if kind == "summands":
            return cls("summands", [(s["letters"], parse_scalar(s["weight"], exact=exact)) for s in doc["summands"]],
                       exact=exact)
        raise ValueError(f"unknown functional kind {kind!r}")


def _net_zero(w, involution) -> bool:
    net = {}
    for g in w:
        gs = involution[g]
        base = min(g, gs)
        net[base] = net.get(base, 0) + (1 if g == base else -1)
    return not any(net.values())


def default_functional(P: Presentation) -> WordFunctional:
    """The designated functional of ``P``: its attached trace, else the empty-word indicator."""
    t = getattr(P, "trace", None)
    return t if t is not None else WordFunctional("unit", exact=P.exact)


# trace verification -------------------------------------------------------------

@dataclass
class TraceReport:
    ok: bool
    pairs_checked: int
    cap: int
    witness: dict | None = None

    def to_json(self):
        doc = {"ok": self.ok, "pairs_checked": self.pairs_checked, "cap": self.cap}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


def _word_pairs(P: Presentation, cap: int, exact_total: int | None = None):
    levels = P.normal_words(cap)
    for a in range(1, cap):
        for b in range(a, cap - a + 1):
            if exact_total is not None and a + b != exact_total:
                continue
            for x in levels[a]:
                for y in levels[b]:
                    if a == b and P.order.key(x) >= P.order.key(y):
                        continue
                    yield x, y


def verify_trace(P: Presentation, phi=None, cap: int = 6, tol: float | None = None) -> TraceReport:
    """Check ``phi(xy) = phi(yx)`` for all normal-word pairs with ``|x| + |y| <= cap``.

    Positivity is not checked.
    """
    phi = default_functional(P) if phi is None else phi
    if not isinstance(phi, WordFunctional):
        phi = WordFunctional("callable", func=phi, exact=P.exact)
    tol = get_tolerance() if tol is None else tol
    one = P.one
    n = 0
    for x, y in _word_pairs(P, cap):
        n += 1
        a = phi.on(P, P.nf(pmul({x: one}, {y: one}, P.exact)))
        b = phi.on(P, P.nf(pmul({y: one}, {x: one}, P.exact)))
        d = a - b
        if (d if P.exact else abs(d) > tol):
            return TraceReport(False, n, cap, {"x": list(x), "y": list(y),
                                               "phi_xy": format_scalar(a), "phi_yx": format_scalar(b)})
    return TraceReport(True, n, cap)


def gram_matrix(P: Presentation, phi=None, degree: int = 3):
    """``G[i, j] = phi(w_i* w_j)`` over normal words of degree <= ``degree`` (float)."""
    phi = default_functional(P) if phi is None else phi
    words = [w for level in P.normal_words(degree) for w in level]
    G = np.zeros((len(words), len(words)), dtype=complex)
    one = P.one
    for i, wi in enumerate(words):
        si = P.star({wi: one})
        for j, wj in enumerate(words):
            G[i, j] = complex(phi.on(P, pmul(si, {wj: one}, P.exact)))
    return words, G


def is_faithful_on_degree(P: Presentation, phi=None, degree: int = 3, tol: float = 1e-9) -> bool:
    """Positive definiteness of the Gram matrix on normal words of degree <= ``degree``."""
    _, G = gram_matrix(P, phi, degree)
    if G.size == 0:
        return True
    H = (G + G.conj().T) / 2
    if np.max(np.abs(G - G.conj().T)) > 1e-8:
        return False
    return bool(np.linalg.eigvalsh(H).min() > tol)


# commutator space ---------------------------------------------------------------------

class CommutatorSearch:
    """Incremental echelon basis of commutators (and relation consequences) up to a cap."""

    def __init__(self, P: Presentation, tol: float | None = None):
        self.P = P
        self.cap = 0
        self.ech = Echelon(weight=P.order.key, exact=P.exact, tol=get_tolerance() if tol is None else tol, track=True)
        self.vectors = {}
        self._free_levels = [[()]]

    def _free_words(self, d):
        while len(self._free_levels) <= d:
            prev = self._free_levels[-1]
            self._free_levels.append([w + (g,) for w in prev for g in self.P.generators])
        return self._free_levels[d]

    def _pairs_at(self, c):
        P = self.P
        if P.relation_level:
            for a in range(1, c):
                b = c - a
                if b < a:
                    continue
                for x in self._free_words(a):
                    for y in self._free_words(b):
                        if a == b and P.order.key(x) >= P.order.key(y):
                            continue
                        yield x, y
        else:
            yield from _word_pairs(P, c, exact_total=c)

    def extend_to(self, cap: int):
        P = self.P
        one = P.one
        for c in range(self.cap + 1, cap + 1):
            for x, y in self._pairs_at(c):
                v = padd(pmul({x: one}, {y: one}, P.exact), pmul({y: one}, {x: one}, P.exact), P.exact, scale=-1)
                v = P.nf(v)
                if v:
                    lab = ("comm", x, y)
                    self.vectors[lab] = v
                    self.ech.add(dict(v), lab)
            if P.relation_level:
                for k, r in enumerate(P.relations):
                    dr = max((len(w) for w in r), default=0)
                    rest = c - dr
                    if rest < 0:
                        continue
                    for a in range(rest + 1):
                        for x in self._free_words(a):
                            for y in self._free_words(rest - a):
                                v = pmul(pmul({x: one}, r, P.exact), {y: one}, P.exact)
                                if v:
                                    lab = ("rel", x, k, y)
                                    self.vectors[lab] = v
                                    self.ech.add(dict(v), lab)
            self.cap = c
        return self

    def basis(self):
        return [NCPolynomial(self.P, v) for v in self.ech.basis()]

    def express(self, target: dict):
        return self.ech.express(dict(target))


def commutator_space(P: Presentation, cap: int):
    """Reduced basis (list of NCPolynomials) of the span of ``nf(xy - yx)`` with ``|x| + |y| <= cap``."""
    return CommutatorSearch(P).extend_to(cap).basis()


@dataclass
class TraceZeroCertificate:
    """``target = sum c [x, y] + sum d x r y``, checkable by re-expansion."""

    presentation: Presentation
    target: dict
    cap: int
    commutators: list = field(default_factory=list)
    relation_terms: list = field(default_factory=list)

    def expand(self) -> dict:
        P = self.presentation
        one = P.one
        acc = {}
        for c, x, y in self.commutators:
            v = padd(pmul({x: one}, {y: one}, P.exact), pmul({y: one}, {x: one}, P.exact), P.exact, scale=-1)
            acc = padd(acc, v, P.exact, scale=c)
        for d, x, k, y in self.relation_terms:
            v = pmul(pmul({x: one}, P.relations[k], P.exact), {y: one}, P.exact)
            acc = padd(acc, v, P.exact, scale=d)
        return P.nf(acc)

    def residual(self) -> dict:
        P = self.presentation
        return padd(self.expand(), P.nf(self.target), P.exact, scale=-1)

    @property
    def sound(self) -> bool:
        r = self.residual()
        if self.presentation.exact:
            return not r
        return all(abs(c) <= 1e-9 for c in r.values())

    def to_json(self) -> dict:
        return {
            "cap": self.cap,
            "target": [[format_scalar(c), list(w)] for w, c in sorted(self.target.items())],
            "commutators": [[format_scalar(c), list(x), list(y)] for c, x, y in self.commutators],
            "relation_terms": [[format_scalar(d), list(x), k, list(y)] for d, x, k, y in self.relation_terms],
            "residual_zero": self.sound,
        }

    def __str__(self):
        parts = [f"({format_scalar(c)})[{'.'.join(x)}, {'.'.join(y)}]" for c, x, y in self.commutators]
        parts += [f"({format_scalar(d)}) {'.'.join(x) or '1'}*R{k}*{'.'.join(y) or '1'}"
                  for d, x, k, y in self.relation_terms]
        return " + ".join(parts) if parts else "0"


def trace_zero_certificate(P: Presentation, target, cap: int, search: CommutatorSearch | None = None):
    """Find ``target`` in the commutator space at the smallest cap ``<= cap``, or return None.

    ``None`` means inconclusive at this cap; it is not a proof that a trace
    with nonzero value on ``target`` exists.
    """
    t = P.nf(_terms(P, target))
    search = search or CommutatorSearch(P)
    if not t:
        return TraceZeroCertificate(P, t, 0)
    for c in range(1, cap + 1):
        if search.cap < c:
            search.extend_to(c)
        combo = search.express(t)
        if combo is None:
            continue
        comms, rels = [], []
        for lab in sorted(combo):
            v = combo[lab]
            if is_zero_coeff(v, P.exact):
                continue
            if lab[0] == "comm":
                comms.append((v, lab[1], lab[2]))
            else:
                rels.append((v, lab[1], lab[2], lab[3]))
        used = [len(x) + len(y) for _, x, y in comms]
        used += [len(x) + max(len(w) for w in P.relations[k]) + len(y) for _, x, k, y in rels]
        cert = TraceZeroCertificate(P, t, max(used, default=0), comms, rels)
        if cert.sound:
            return cert
    return None


def trace_zero_certificates_for_generators(P: Presentation, cap: int):
    """Map each generator ``g`` to a certificate for ``g* g`` (or None)."""
    search = CommutatorSearch(P)
    out = {}
    for g in P.generators:
        out[g] = trace_zero_certificate(P, {(P.involution[g], g): P.one}, cap, search)
    return out


def free_words(generators, max_degree):
    return [w for d in range(max_degree + 1) for w in product(generators, repeat=d)]
