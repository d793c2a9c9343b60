"""Finite groups as Cayley tables, with a small built-in corpus and JSON I/O."""
from __future__ import annotations

import json
from itertools import permutations, product
from pathlib import Path

from ..errors import StructureError


class FiniteGroupTable:
    """A finite group given by labels and a Cayley table ``table[g][h] = index of g*h``."""

    def __init__(self, elements, table, identity: int, name: str = ""):
        self.elements = [str(e) for e in elements]
        self.table = [[int(x) for x in row] for row in table]
        self.identity = int(identity)
        self.name = name
        self._validate()
        self.inverse = [self._find_inverse(g) for g in range(self.order)]

    @property
    def order(self) -> int:
        return len(self.elements)

    def _validate(self):
        n = self.order
        if n == 0:
            raise StructureError("group must have at least one element")
        if len(set(self.elements)) != n:
            raise StructureError("group element labels must be distinct")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise StructureError(f"Cayley table must be {n}x{n}")
        for g, row in enumerate(self.table):
            for h, x in enumerate(row):
                if not 0 <= x < n:
                    raise StructureError(f"table entry [{g}][{h}] = {x} is out of range")
        if not 0 <= self.identity < n:
            raise StructureError("identity index out of range")
        e = self.identity
        for g in range(n):
            if self.table[e][g] != g or self.table[g][e] != g:
                raise StructureError(f"identity law fails at element {self.elements[g]!r}")
        for g, h, k in product(range(n), repeat=3):
            if self.table[self.table[g][h]][k] != self.table[g][self.table[h][k]]:
                raise StructureError(
                    f"associativity fails at ({self.elements[g]}, {self.elements[h]}, {self.elements[k]})")

    def _find_inverse(self, g):
        for h in range(self.order):
            if self.table[g][h] == self.identity and self.table[h][g] == self.identity:
                return h
        raise StructureError(f"element {self.elements[g]!r} has no inverse")

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def is_abelian(self) -> bool:
        return all(self.table[g][h] == self.table[h][g] for g in range(self.order) for h in range(self.order))

    def conjugacy_classes(self):
        seen, classes = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            cls = sorted({self.table[self.table[h][g]][self.inverse[h]] for h in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "table": [list(r) for r in self.table], "identity": self.identity}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "FiniteGroupTable":
        for key in ("elements", "table", "identity"):
            if key not in data:
                raise StructureError(f"group document is missing the {key!r} field")
        return cls(data["elements"], data["table"], data["identity"], name=name)

    @classmethod
    def load(cls, path) -> "FiniteGroupTable":
        p = Path(path)
        with open(p) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise StructureError(f"{p}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        return cls.from_json(data, name=p.stem)

    def __eq__(self, other):
        return (isinstance(other, FiniteGroupTable) and self.elements == other.elements
                and self.table == other.table and self.identity == other.identity)

    def __repr__(self):
        return f"FiniteGroupTable({self.name or 'G'}, order={self.order})"


def cyclic_group(n: int) -> FiniteGroupTable:
    return FiniteGroupTable([str(k) for k in range(n)], [[(a + b) % n for b in range(n)] for a in range(n)], 0,
                            name=f"Z{n}")


def direct_product(G: FiniteGroupTable, H: FiniteGroupTable) -> FiniteGroupTable:
    pairs = list(product(range(G.order), range(H.order)))
    index = {p: k for k, p in enumerate(pairs)}
    table = [[index[(G.mul(a, c), H.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"({G.elements[a]},{H.elements[b]})" for a, b in pairs]
    return FiniteGroupTable(labels, table, index[(G.identity, H.identity)], name=f"{G.name}x{H.name}")


def symmetric_group(n: int) -> FiniteGroupTable:
    perms = sorted(permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    labels = ["".join(str(i + 1) for i in p) for p in perms]
    return FiniteGroupTable(labels, table, index[tuple(range(n))], name=f"S{n}")


def dihedral_group(n: int) -> FiniteGroupTable:
    """Symmetries of the n-gon: ``r^k s^f`` with ``s r s = r^-1``."""
    elems = [(k, f) for f in (0, 1) for k in range(n)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        k1, f1 = a
        k2, f2 = b
        return ((k1 + (-k2 if f1 else k2)) % n, (f1 + f2) % 2)

    table = [[index[mul(a, b)] for b in elems] for a in elems]
    labels = [("r%d" % k if k else "e") if not f else ("r%ds" % k if k else "s") for k, f in elems]
    return FiniteGroupTable(labels, table, index[(0, 0)], name=f"D{n}")


def corpus() -> dict:
    """The built-in corpus: Z2, Z3, Z4, Z2xZ2, S3, D4 (dihedral of order 8)."""
    z2 = cyclic_group(2)
    klein = direct_product(z2, z2)
    klein.name = "Z2xZ2"
    return {
        "Z2": z2,
        "Z3": cyclic_group(3),
        "Z4": cyclic_group(4),
        "Z2xZ2": klein,
        "S3": symmetric_group(3),
        "D4": dihedral_group(4),
    }


def group_by_name(name: str) -> FiniteGroupTable:
    c = corpus()
    key = {k.lower(): k for k in c}.get(name.lower())
    if key is None:
        raise StructureError(f"unknown group {name!r}; choose from {sorted(c)}")
    return c[key]
