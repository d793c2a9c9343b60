"""Quotients of presented algebras by *-ideals and descent of the comultiplication."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import StructureError
from ..scalars import format_scalar
from .presentation import HopfData, NCPolynomial, Presentation, _as_word, delta_poly
from .rewriting import padd, pstar


def _ideal_polys(P: Presentation, ideal_generators) -> list:
    out = []
    for g in ideal_generators:
        if isinstance(g, NCPolynomial):
            p = dict(g.terms)
        elif isinstance(g, dict):
            p = {_as_word(w): P.coeff(c) for w, c in g.items()}
        elif isinstance(g, str) and g in P.generators:
            p = {(g,): P.one}
        else:
            p = {_as_word(g): P.one}
        if p:
            out.append(p)
    return out


def star_closure(P: Presentation, polys: list) -> list:
    """Add adjoints of ideal generators that are not already present up to a scalar."""
    out = list(polys)
    for p in polys:
        ps = P.nf(pstar(p, P.involution))
        if ps and not any(_proportional(P, ps, q) for q in out):
            out.append(ps)
    return out


def _proportional(P, p, q) -> bool:
    if set(p) != set(q):
        return False
    w = next(iter(p))
    r = p[w] / q[w]
    return not padd(p, {k: r * v for k, v in q.items()}, P.exact, scale=-1)


def quotient_presentation(P: Presentation, ideal_generators, cap: int = 6, name: str | None = None) -> Presentation:
    """``P / <ideal_generators>``: adds the generators as relations and re-completes to ``cap``.

    The ideal is *-closed automatically.  The quotient map is normal-form
    projection in the returned presentation (:func:`quotient_map`).
    """
    polys = star_closure(P, _ideal_polys(P, ideal_generators))
    if not polys:
        Q = Presentation(P.generators, P.involution, P.order.order, P.rules, P.relations, P.params, P.exact,
                         name or P.name, P.hopf, confluence_cap=P.confluence_cap)
        Q.trace = getattr(P, "trace", None)
        return Q
    if P.relation_level:
        Q = Presentation(P.generators, P.involution, P.order.order, None, P.relations + polys, P.params, P.exact,
                         name or f"{P.name}/J", P.hopf)
        return Q
    Q = P.completed(cap, polys, name=name or f"{P.name}/J")
    Q.ideal_generators = polys
    Q.trace = None
    return Q


def quotient_map(P: Presentation, Q: Presentation):
    """``pi``: normal form in ``P`` followed by rewriting in ``Q``."""

    def pi(p):
        terms = p.terms if isinstance(p, NCPolynomial) else p
        return NCPolynomial(Q, Q.nf(P.nf(terms)))

    return pi


@dataclass
class DescentReport:
    ok: bool
    cap: int
    residuals: dict = field(default_factory=dict)

    def to_json(self):
        return {"ok": self.ok, "cap": self.cap,
                "residuals": {k: [[format_scalar(c), list(l), list(r)] for (l, r), c in sorted(v.items())]
                              for k, v in sorted(self.residuals.items())}}


def hopf_descent_check(P: Presentation, H: HopfData | None, ideal_generators, cap: int = 6,
                       quotient: Presentation | None = None) -> DescentReport:
    """Check ``(pi (x) pi) Delta(g) = 0`` for every ideal generator ``g``.

    Rewriting both legs in the quotient kills exactly the span of
    ``J (x) B + B (x) J`` up to the cap, so this is the presented form of the
    requirement that ``Delta`` descends to the quotient.
    """
    H = H or P.hopf
    polys = _ideal_polys(P, ideal_generators)
    if not polys:
        return DescentReport(True, cap)
    if H is None:
        raise StructureError("presentation has no Hopf data")
    Q = quotient if quotient is not None else quotient_presentation(P, polys, cap)
    residuals = {}
    for p in star_closure(P, polys):
        if max(len(w) for w in p) > cap:
            continue
        # Delta computed with both legs rewritten in the quotient is (pi (x) pi) Delta
        out = delta_poly(Q, H, P.nf(p), Q)
        if out:
            residuals[" ".join(" ".join(w) or "1" for w in p)] = out
    return DescentReport(not residuals, cap, residuals)
