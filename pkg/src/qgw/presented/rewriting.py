"""Noncommutative rewriting: monomial order, normal forms, degree-bounded completion.

Polynomials are plain dicts ``word -> coefficient`` where a word is a tuple of
generator names; the empty tuple is the unit.  Coefficients are
:class:`~qgw.scalars.ExactComplex` (exact mode) or Python complex numbers
(float mode, with zero pruning at ``ZERO_TOL``).
"""
from __future__ import annotations

import heapq
from itertools import count

from ..errors import StructureError
from ..scalars import ONE

ZERO_TOL = 1e-12


class MonomialOrder:
    """Graded order comparing equal-length words letter by letter from the right.

    Earlier-declared generators are heavier.  With the declaration
    ``alpha, alpha*, gamma, gamma*`` this makes ``gamma alpha`` heavier than
    ``alpha gamma`` and ``gamma* gamma`` heavier than ``gamma gamma*``, so the
    irreducible words are exactly the PBW family ``alpha^k gamma^m gamma*^n``
    and ``alpha*^k gamma^m gamma*^n``.
    """

    def __init__(self, order):
        self.order = list(order)
        self.pos = {g: i for i, g in enumerate(self.order)}
        if len(self.pos) != len(self.order):
            raise StructureError("monomial order lists a generator twice")

    def key(self, w):
        try:
            return (len(w), tuple(-self.pos[g] for g in reversed(w)))
        except KeyError as exc:
            raise StructureError(f"unknown generator {exc.args[0]!r}") from None

    def leading(self, p: dict):
        return max(p, key=self.key)


# polynomial helpers -------------------------------------------------------------

def is_zero_coeff(c, exact: bool) -> bool:
    return (not c) if exact else abs(c) <= ZERO_TOL


def padd(p: dict, q: dict, exact: bool, scale=1) -> dict:
    out = dict(p)
    for w, c in q.items():
        v = out.get(w, 0) + scale * c
        if is_zero_coeff(v, exact):
            out.pop(w, None)
        else:
            out[w] = v
    return out


def pscale(p: dict, s, exact: bool) -> dict:
    out = {}
    for w, c in p.items():
        v = c * s
        if not is_zero_coeff(v, exact):
            out[w] = v
    return out


def pmul(p: dict, q: dict, exact: bool) -> dict:
    out = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            w = w1 + w2
            v = out.get(w, 0) + c1 * c2
            if is_zero_coeff(v, exact):
                out.pop(w, None)
            else:
                out[w] = v
    return out


def word_star(w, involution: dict):
    return tuple(involution[g] for g in reversed(w))


def pstar(p: dict, involution: dict) -> dict:
    return {word_star(w, involution): c.conjugate() for w, c in p.items()}


def pdegree(p: dict) -> int:
    return max((len(w) for w in p), default=-1)


# rewriting -------------------------------------------------------------------------

class RewriteSystem:
    """A set of rules ``lhs -> rhs`` with memoized normal forms.

    ``rules`` maps a word to a polynomial of strictly lighter words.  A rule
    with empty left-hand side means the algebra has collapsed to zero.
    """

    def __init__(self, rules: dict, order: MonomialOrder, exact: bool):
        self.rules = {tuple(l): dict(r) for l, r in rules.items()}
        self.order = order
        self.exact = exact
        self.lens = sorted({len(l) for l in self.rules})
        self.collapsed = () in self.rules
        self._memo = {"leftmost": {}, "rightmost": {}}
        self._one = ONE if exact else 1.0 + 0j
        for lhs, rhs in self.rules.items():
            k = order.key(lhs)
            for w in rhs:
                if order.key(w) >= k:
                    raise StructureError(
                        f"rule {' '.join(lhs) or '1'} -> ... does not decrease the monomial order (term {' '.join(w) or '1'})")

    def find(self, w, strategy: str = "leftmost"):
        n = len(w)
        starts = range(n) if strategy == "leftmost" else range(n - 1, -1, -1)
        for i in starts:
            for L in self.lens:
                if L and i + L <= n and w[i:i + L] in self.rules:
                    return i, L
        return None

    def is_normal(self, w) -> bool:
        if self.collapsed:
            return False
        return self.find(w) is None

    def nf_word(self, w, strategy: str = "leftmost") -> dict:
        if self.collapsed:
            return {}
        memo = self._memo[strategy]
        if w in memo:
            return memo[w]
        # iterative evaluation to avoid deep recursion on long rewrite chains
        stack = [w]
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                continue
            hit = self.find(top, strategy)
            if hit is None:
                memo[top] = {top: self._one}
                stack.pop()
                continue
            i, L = hit
            pre, post = top[:i], top[i + L:]
            subs = [pre + r + post for r in self.rules[top[i:i + L]]]
            missing = [s for s in subs if s not in memo]
            if missing:
                stack.extend(missing)
                continue
            out = {}
            for r, c in self.rules[top[i:i + L]].items():
                for ww, cc in memo[pre + r + post].items():
                    v = out.get(ww, 0) + c * cc
                    if is_zero_coeff(v, self.exact):
                        out.pop(ww, None)
                    else:
                        out[ww] = v
            memo[top] = out
            stack.pop()
        return memo[w]

    def nf(self, p: dict, strategy: str = "leftmost") -> dict:
        out = {}
        for w, c in p.items():
            for ww, cc in self.nf_word(tuple(w), strategy).items():
                v = out.get(ww, 0) + c * cc
                if is_zero_coeff(v, self.exact):
                    out.pop(ww, None)
                else:
                    out[ww] = v
        return out

    def normal_words(self, generators, max_degree: int):
        """Irreducible words of each degree ``0..max_degree`` (a list of lists)."""
        if self.collapsed:
            return [[] for _ in range(max_degree + 1)]
        levels = [[()]]
        for _ in range(max_degree):
            nxt = []
            for w in levels[-1]:
                for g in generators:
                    v = w + (g,)
                    # the prefix is irreducible, so only suffixes can match
                    if not any(L <= len(v) and v[len(v) - L:] in self.rules for L in self.lens if L):
                        nxt.append(v)
            levels.append(nxt)
        return levels


# critical pairs ----------------------------------------------------------------------

def overlaps(l1, l2):
    """Proper overlaps: ``l1 = x o`` and ``l2 = o y`` with ``x, o, y`` nonempty."""
    for k in range(1, min(len(l1), len(l2))):
        if l1[len(l1) - k:] == l2[:k]:
            yield l1[:len(l1) - k], l2[k:]


def inclusions(l1, l2):
    """Positions where ``l2`` occurs strictly inside ``l1`` (``l1 = x l2 y``)."""
    if len(l2) >= len(l1) or not l2:
        return
    for i in range(len(l1) - len(l2) + 1):
        if l1[i:i + len(l2)] == l2:
            yield l1[:i], l1[i + len(l2):]


def critical_pairs(rs: RewriteSystem, cap: int):
    """All critical pairs with overlap word of degree <= cap, as ``(word, left, right)`` polynomials."""
    one = rs._one
    items = list(rs.rules.items())
    for l1, r1 in items:
        for l2, r2 in items:
            for x, y in overlaps(l1, l2):
                w = x + l2
                if len(w) > cap:
                    continue
                a = pmul(r1, {y: one}, rs.exact)
                b = pmul({x: one}, r2, rs.exact)
                yield w, a, b
            for x, y in inclusions(l1, l2):
                if len(l1) > cap:
                    continue
                b = pmul(pmul({x: one}, r2, rs.exact), {y: one}, rs.exact)
                yield l1, dict(r1), b


def check_local_confluence_rules(rs: RewriteSystem, cap: int) -> list:
    bad = []
    for w, a, b in critical_pairs(rs, cap):
        d = padd(rs.nf(a), rs.nf(b), rs.exact, scale=-1)
        if d:
            bad.append({"word": w, "difference": d})
    return bad


def complete(rules: dict, relations: list, order: MonomialOrder, involution: dict, exact: bool, cap: int,
             max_iterations: int = 200_000):
    """Degree-bounded noncommutative completion.

    Starts from ``rules`` plus the polynomial ``relations`` (each meaning
    ``p = 0``), closes under the involution, and adds rules until every
    critical pair of degree <= cap resolves.  Rules whose left-hand side is
    longer than ``cap`` are discarded.  Returns ``(rules, truncated)``.
    """
    one = ONE if exact else 1.0 + 0j
    current = {tuple(l): dict(r) for l, r in rules.items()}
    truncated = False
    heap, tie = [], count()

    def push(p):
        if p:
            heapq.heappush(heap, (order.key(order.leading(p)), next(tie), p))

    for lhs, rhs in list(current.items()):
        push(pstar(padd({lhs: one}, rhs, exact, scale=-1), involution))
    for p in relations:
        push(dict(p))
        push(pstar(dict(p), involution))
    rs = RewriteSystem(current, order, exact)
    for w, a, b in critical_pairs(rs, cap):
        push(padd(a, b, exact, scale=-1))

    steps = 0
    while heap:
        steps += 1
        if steps > max_iterations:
            raise StructureError("completion did not finish within the iteration budget")
        _, _, p = heapq.heappop(heap)
        p = rs.nf(p)
        if not p:
            continue
        lead = order.leading(p)
        if len(lead) > cap:
            truncated = True
            continue
        lc = p[lead]
        rhs = {w: -c / lc for w, c in p.items() if w != lead}
        rhs = {w: c for w, c in rhs.items() if not is_zero_coeff(c, exact)}
        if lead == ():
            return {(): {}}, truncated
        # interreduce: rules whose lhs contains the new lhs are re-queued
        for l in [l for l in current if _contains(l, lead)]:
            push(padd({l: one}, current.pop(l), exact, scale=-1))
        current[lead] = rhs
        rs = RewriteSystem(current, order, exact)
        for l2, r2 in list(current.items()):
            for (la, ra), (lb, rb) in (((lead, rhs), (l2, r2)), ((l2, r2), (lead, rhs))):
                for x, y in overlaps(la, lb):
                    if len(x) + len(lb) <= cap:
                        push(padd(pmul(ra, {y: one}, exact), pmul({x: one}, rb, exact), exact, scale=-1))
        push(pstar(padd({lead: one}, rhs, exact, scale=-1), involution))
    # final interreduction of right-hand sides
    final = {l: rs.nf(r) for l, r in current.items()}
    return final, truncated


def _contains(w, sub) -> bool:
    n, m = len(w), len(sub)
    return any(w[i:i + m] == sub for i in range(n - m + 1))
