"""Finitely presented *-algebras, their polynomials, and Hopf data on generators."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import StructureError
from ..scalars import ONE, ZERO, ExactComplex, exact, format_scalar, parse_scalar
from .rewriting import (
    MonomialOrder,
    RewriteSystem,
    check_local_confluence_rules,
    complete,
    is_zero_coeff,
    padd,
    pdegree,
    pmul,
    pscale,
    pstar,
    word_star,
)


def _as_word(w) -> tuple:
    if isinstance(w, str):
        return tuple(w.split()) if w.strip() else ()
    return tuple(w)


class Presentation:
    """Generators with an involution, rewrite rules and optional extra relations.

    ``rules`` maps a word to a polynomial (dict) of lighter words.
    ``relations`` are polynomials ``p`` meaning ``p = 0`` that are *not*
    oriented into rules; presentations that only carry relations are handled at
    the relation level (free algebra modulo bounded-degree consequences).
    """

    def __init__(self, generators, involution: dict, order=None, rules=None, relations=None,
                 params=None, exact: bool = True, name: str = "", hopf: "HopfData | None" = None,
                 confluence_cap: int | None = None):
        self.generators = list(generators)
        self.involution = dict(involution)
        for g in self.generators:
            if g not in self.involution:
                raise StructureError(f"generator {g!r} has no adjoint in the involution table")
            if self.involution.get(self.involution[g]) != g:
                raise StructureError(f"involution is not an involution at {g!r}")
        self.order = MonomialOrder(order if order is not None else self.generators)
        if set(self.order.order) != set(self.generators):
            raise StructureError("monomial order must list exactly the generators")
        self.exact = bool(exact)
        self.rules = {_as_word(l): {_as_word(w): c for w, c in r.items()} for l, r in (rules or {}).items()}
        self.relations = [dict(p) for p in (relations or [])]
        self.params = dict(params or {})
        self.name = name
        self.hopf = hopf
        self.rewriter = RewriteSystem(self.rules, self.order, self.exact)
        self.confluence_cap = confluence_cap
        self.trace = None
        self.truncated = False

    # basic algebra ---------------------------------------------------------------
    @property
    def one(self):
        return ONE if self.exact else 1.0 + 0j

    @property
    def relation_level(self) -> bool:
        return not self.rules and bool(self.relations)

    @property
    def collapsed(self) -> bool:
        return self.rewriter.collapsed

    def coeff(self, c):
        if isinstance(c, str):
            return parse_scalar(c, exact=self.exact)
        if self.exact:
            return exact(c)
        return complex(c)

    def nf(self, p, strategy: str = "leftmost") -> dict:
        if isinstance(p, NCPolynomial):
            p = p.terms
        return self.rewriter.nf(p, strategy)

    def word(self, w) -> "NCPolynomial":
        return NCPolynomial(self, {_as_word(w): self.one})

    def poly(self, terms) -> "NCPolynomial":
        """Build a normalized polynomial from ``{word: coeff}`` or ``[(coeff, word), ...]``."""
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = [(w, c) for c, w in terms]
        raw = {}
        for w, c in items:
            raw = padd(raw, {_as_word(w): self.coeff(c)}, self.exact)
        return NCPolynomial(self, self.nf(raw))

    def star(self, p: dict) -> dict:
        return pstar(p, self.involution)

    def mul(self, p: dict, q: dict) -> dict:
        return self.nf(pmul(p, q, self.exact))

    def normal_words(self, max_degree: int):
        return self.rewriter.normal_words(self.generators, max_degree)

    def normal_word_counts(self, max_degree: int):
        return [len(level) for level in self.normal_words(max_degree)]

    def check_local_confluence(self, cap: int) -> list:
        return check_local_confluence(self, cap)

    def completed(self, cap: int, extra_relations=(), name: str | None = None) -> "Presentation":
        """Degree-bounded completion with optional extra relations (each ``p = 0``)."""
        rels = list(self.relations) + [dict(p.terms if isinstance(p, NCPolynomial) else p) for p in extra_relations]
        rules, truncated = complete(self.rules, rels, self.order, self.involution, self.exact, cap)
        P = Presentation(self.generators, self.involution, self.order.order, rules, None, self.params,
                         self.exact, name or self.name, self.hopf, confluence_cap=cap)
        P.truncated = truncated
        return P

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"Presentation({self.name or '?'}, generators={self.generators}, rules={len(self.rules)}, {mode})"

    # JSON -----------------------------------------------------------------------------
    def to_json(self) -> dict:
        def enc_poly(p):
            return [[format_scalar(c), list(w)] for w, c in sorted(p.items(), key=lambda t: self.order.key(t[0]))]

        doc = {
            "generators": list(self.generators),
            "involution": dict(self.involution),
            "order": list(self.order.order),
            "rules": [{"lhs": list(l), "rhs": enc_poly(r)}
                      for l, r in sorted(self.rules.items(), key=lambda t: self.order.key(t[0]))],
            "params": {k: (format_scalar(v) if isinstance(v, (ExactComplex, complex)) else v)
                       for k, v in self.params.items()},
            "mode": "exact" if self.exact else "float",
        }
        if self.name:
            doc["name"] = self.name
        if self.relations:
            doc["relations"] = [enc_poly(p) for p in self.relations]
        if self.hopf is not None:
            doc["hopf"] = self.hopf.to_json()
        if self.trace is not None:
            doc["trace"] = self.trace.to_json()
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, doc: dict, name: str = "", source: str = "<presentation>") -> "Presentation":
        for key in ("generators", "involution"):
            if key not in doc:
                raise StructureError(f"{source}: missing required field {key!r}")
        exact = doc.get("mode", "exact") == "exact"

        def dec_scalar(c, where):
            try:
                return parse_scalar(c, exact=exact)
            except (ValueError, TypeError) as exc:
                raise StructureError(f"{source}: {where}: {exc}") from None

        def dec_poly(items, where):
            p = {}
            for k, item in enumerate(items):
                if not isinstance(item, (list, tuple)) or len(item) != 2:
                    raise StructureError(f"{source}: {where}[{k}]: expected [coeff, word]")
                p = padd(p, {tuple(item[1]): dec_scalar(item[0], f"{where}[{k}]")}, exact)
            return p

        rules = {}
        for k, r in enumerate(doc.get("rules", [])):
            if "lhs" not in r or "rhs" not in r:
                raise StructureError(f"{source}: rules[{k}]: expected keys 'lhs' and 'rhs'")
            rules[tuple(r["lhs"])] = dec_poly(r["rhs"], f"rules[{k}].rhs")
        relations = [dec_poly(p, f"relations[{k}]") for k, p in enumerate(doc.get("relations", []))]
        params = {}
        for k, v in doc.get("params", {}).items():
            try:
                params[k] = parse_scalar(v, exact=None) if not isinstance(v, str) else parse_scalar(v, exact=exact)
            except ValueError:
                params[k] = v
        hopf = HopfData.from_json(doc["hopf"], exact, source) if "hopf" in doc else None
        try:
            P = cls(doc["generators"], doc["involution"], doc.get("order"), rules, relations, params, exact,
                    doc.get("name", name), hopf)
        except StructureError as exc:
            raise StructureError(f"{source}: {exc}") from None
        if "trace" in doc:
            from .traces import WordFunctional

            try:
                P.trace = WordFunctional.from_json(doc["trace"], exact)
            except (KeyError, ValueError, TypeError) as exc:
                raise StructureError(f"{source}: trace: {exc}") from None
        return P

    @classmethod
    def load(cls, path) -> "Presentation":
        p = Path(path)
        with open(p) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise StructureError(f"{p}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return cls.from_json(doc, name=p.stem, source=str(p))


PresentedAlgebra = Presentation


class NCPolynomial:
    """A normal-form polynomial in a presentation."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: Presentation, terms: dict):
        self.parent = parent
        self.terms = dict(terms)

    @property
    def degree(self) -> int:
        return pdegree(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _wrap(self, terms):
        return NCPolynomial(self.parent, terms)

    def _other(self, o):
        if isinstance(o, NCPolynomial):
            return o.terms
        return {(): self.parent.coeff(o)} if o != 0 else {}

    def __add__(self, o):
        return self._wrap(padd(self.terms, self._other(o), self.parent.exact))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(padd(self.terms, self._other(o), self.parent.exact, scale=-1))

    def __rsub__(self, o):
        return self._wrap(padd(self._other(o), self.terms, self.parent.exact, scale=-1))

    def __neg__(self):
        return self._wrap(pscale(self.terms, -1, self.parent.exact))

    def __mul__(self, o):
        if isinstance(o, NCPolynomial):
            return self._wrap(self.parent.mul(self.terms, o.terms))
        return self._wrap(pscale(self.terms, self.parent.coeff(o) if isinstance(o, str) else o, self.parent.exact))

    def __rmul__(self, s):
        return self._wrap(pscale(self.terms, s, self.parent.exact))

    def star(self) -> "NCPolynomial":
        return self._wrap(self.parent.nf(self.parent.star(self.terms)))

    def commutator(self, o: "NCPolynomial") -> "NCPolynomial":
        return self * o - o * self

    def __eq__(self, o):
        if not isinstance(o, NCPolynomial):
            o = NCPolynomial(self.parent, self._other(o))
        d = padd(self.terms, o.terms, self.parent.exact, scale=-1)
        return not d

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: self.parent.order.key(t[0]), reverse=True):
            cs = format_scalar(c)
            parts.append(f"({cs})*{'.'.join(w) if w else '1'}")
        return " + ".join(parts)


# Hopf data ---------------------------------------------------------------------------

@dataclass
class HopfData:
    """Comultiplication and counit on generators.

    ``delta[g]`` is a dict ``(left_word, right_word) -> coeff``; images of
    adjoint generators not listed are derived from ``Delta(g*) = Delta(g)*``.
    """

    delta: dict
    epsilon: dict
    exact: bool = True
    external: bool = False
    notes: str = ""
    kappa: dict = field(default_factory=dict)

    def filled(self, involution: dict) -> "HopfData":
        delta = dict(self.delta)
        eps = dict(self.epsilon)
        for g, img in self.delta.items():
            gs = involution[g]
            if gs not in delta:
                delta[gs] = {(word_star(l, involution), word_star(r, involution)): c.conjugate()
                             for (l, r), c in img.items()}
        for g, v in self.epsilon.items():
            gs = involution[g]
            if gs not in eps:
                eps[gs] = v.conjugate()
        return HopfData(delta, eps, self.exact, self.external, self.notes, dict(self.kappa))

    def to_json(self) -> dict:
        doc = {
            "delta": {g: [[format_scalar(c), list(l), list(r)] for (l, r), c in sorted(img.items())]
                      for g, img in sorted(self.delta.items())},
            "epsilon": {g: format_scalar(v) for g, v in sorted(self.epsilon.items())},
        }
        if self.external:
            doc["external"] = True
        if self.notes:
            doc["notes"] = self.notes
        return doc

    @classmethod
    def from_json(cls, doc: dict, exact: bool, source: str = "<hopf>") -> "HopfData":
        delta = {}
        for g, items in doc.get("delta", {}).items():
            img = {}
            for k, item in enumerate(items):
                if len(item) != 3:
                    raise StructureError(f"{source}: hopf.delta.{g}[{k}]: expected [coeff, left, right]")
                c = parse_scalar(item[0], exact=exact)
                key = (tuple(item[1]), tuple(item[2]))
                img[key] = img.get(key, 0) + c
            delta[g] = img
        eps = {g: parse_scalar(v, exact=exact) for g, v in doc.get("epsilon", {}).items()}
        return cls(delta, eps, exact, bool(doc.get("external", False)), doc.get("notes", ""))


def tensor_nf(P: Presentation, T: dict, Q: Presentation | None = None) -> dict:
    """Normalize both legs of ``{(w1, w2): c}`` (left leg in ``P``, right leg in ``Q``)."""
    Q = P if Q is None else Q
    out = {}
    for (l, r), c in T.items():
        nl = P.rewriter.nf_word(tuple(l))
        if not nl:
            continue
        nr = Q.rewriter.nf_word(tuple(r))
        for wl, cl in nl.items():
            for wr, cr in nr.items():
                k = (wl, wr)
                v = out.get(k, 0) + c * cl * cr
                if is_zero_coeff(v, P.exact):
                    out.pop(k, None)
                else:
                    out[k] = v
    return out


def delta_word(P: Presentation, H: HopfData, w, Q: Presentation | None = None) -> dict:
    """``Delta(w)`` for a word, multiplied out letter by letter and normalized legwise."""
    Hf = H.filled(P.involution)
    acc = {((), ()): P.one}
    for g in w:
        if g not in Hf.delta:
            raise StructureError(f"no comultiplication given for generator {g!r}")
        nxt = {}
        for (l1, r1), c1 in acc.items():
            for (l2, r2), c2 in Hf.delta[g].items():
                k = (l1 + l2, r1 + r2)
                nxt[k] = nxt.get(k, 0) + c1 * c2
        acc = tensor_nf(P, nxt, Q)
    return acc


def delta_poly(P: Presentation, H: HopfData, p: dict, Q: Presentation | None = None) -> dict:
    out = {}
    for w, c in p.items():
        for k, v in delta_word(P, H, w, Q).items():
            nv = out.get(k, 0) + c * v
            if is_zero_coeff(nv, P.exact):
                out.pop(k, None)
            else:
                out[k] = nv
    return out


def epsilon_word(P: Presentation, H: HopfData, w):
    Hf = H.filled(P.involution)
    v = P.one
    for g in w:
        v = v * Hf.epsilon.get(g, ZERO if P.exact else 0j)
    return v


def check_hopf_relations(P: Presentation, H: HopfData | None = None) -> list:
    """Rules (and relations) on which ``Delta`` or ``eps`` fails to be multiplicative."""
    H = H or P.hopf
    if H is None:
        return []
    bad = []
    polys = [padd({l: P.one}, r, P.exact, scale=-1) for l, r in P.rules.items()] + list(P.relations)
    for p in polys:
        d = delta_poly(P, H, p)
        e = sum((c * epsilon_word(P, H, w) for w, c in p.items()), ZERO if P.exact else 0j)
        if d or not is_zero_coeff(e, P.exact):
            bad.append({"relation": p, "delta_residual": d, "epsilon_residual": e})
    return bad


def check_local_confluence(P: Presentation, cap: int) -> list:
    """Unresolved critical pairs of total degree <= cap (empty when locally confluent)."""
    return check_local_confluence_rules(P.rewriter, cap)


@dataclass
class NormalForm:
    """Result of :func:`normal_form`: the polynomial plus a confluence flag."""

    poly: NCPolynomial
    confluence_verified: bool


def normal_form(P: Presentation, p, cap: int) -> NormalForm:
    """Rewrite ``p`` (NCPolynomial, dict, word or ``[(coeff, word)]``) to normal form.

    Words above ``cap`` are rejected.  ``confluence_verified`` is False when
    the rule set has not been checked to be locally confluent up to ``cap``;
    in that case a :class:`RuntimeWarning` is also emitted.
    """
    if isinstance(p, NCPolynomial):
        raw = p.terms
    elif isinstance(p, dict):
        raw = {_as_word(w): P.coeff(c) for w, c in p.items()}
    elif isinstance(p, (tuple, str)):
        raw = {_as_word(p): P.one}
    else:
        raw = {}
        for c, w in p:
            raw = padd(raw, {_as_word(w): P.coeff(c)}, P.exact)
    if pdegree(raw) > cap:
        raise StructureError(f"input has degree {pdegree(raw)} above the cap {cap}")
    verified = P.confluence_cap is not None and P.confluence_cap >= cap
    if not verified and not P.relation_level:
        verified = not check_local_confluence(P, cap)
        if verified:
            P.confluence_cap = cap
        else:
            warnings.warn(f"presentation {P.name!r} is not locally confluent at cap {cap}", RuntimeWarning)
    return NormalForm(NCPolynomial(P, P.nf(raw)), verified)
