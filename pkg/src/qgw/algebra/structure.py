"""Finite-dimensional *-algebras given by structure constants in a fixed basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import StructureError
from ..linalg import matmul
from ..scalars import (
    ONE,
    ZERO,
    arrays_equal,
    as_exact_array,
    get_tolerance,
    is_exact_array,
    is_zero,
    max_abs,
    to_float_array,
    zeros,
)


def _nonzero(v):
    if is_exact_array(v):
        return [(i, c) for i, c in enumerate(v) if c]
    idx = np.flatnonzero(v)
    return [(int(i), v[i]) for i in idx]


class StructureAlgebra:
    """Associative unital *-algebra ``span{b_0, ..., b_{d-1}}``.

    ``products[i][j]`` lists the nonzero ``(k, c)`` with ``b_i b_j = sum c b_k``.
    Column ``i`` of ``star_matrix`` holds the coordinates of ``b_i*``; the
    involution is extended antilinearly.
    """

    def __init__(self, products, unit, star_matrix, name: str = "", exact: bool | None = None):
        self.dim = len(products)
        self._prod = [[tuple(cell) for cell in row] for row in products]
        if exact is None:
            exact = is_exact_array(np.asarray(unit))
        self.exact = bool(exact)
        if self.exact:
            self.unit = as_exact_array(unit)
            self.star_matrix = as_exact_array(star_matrix)
        else:
            self.unit = to_float_array(unit)
            self.star_matrix = to_float_array(star_matrix)
        self.name = name
        if self.unit.shape != (self.dim,) or self.star_matrix.shape != (self.dim, self.dim):
            raise StructureError("unit/star shapes do not match the number of basis elements")

    # construction -----------------------------------------------------------
    @classmethod
    def from_constants(cls, constants, unit, star_matrix, name: str = ""):
        """Build from a dense ``(d, d, d)`` array ``C[i, j, k]``."""
        C = np.asarray(constants)
        d = C.shape[0]
        if C.shape != (d, d, d):
            raise StructureError("structure constants must have shape (d, d, d)")
        exact = is_exact_array(C)
        if exact:
            C = as_exact_array(C)
        prods = [[_nonzero(C[i, j]) for j in range(d)] for i in range(d)]
        return cls(prods, unit, star_matrix, name=name, exact=exact)

    def to_float(self) -> "StructureAlgebra":
        if not self.exact:
            return self
        prods = [[tuple((k, complex(c)) for k, c in cell) for cell in row] for row in self._prod]
        return StructureAlgebra(prods, to_float_array(self.unit), to_float_array(self.star_matrix),
                                name=self.name, exact=False)

    def zero(self):
        return zeros(self.dim, self.exact)

    def basis(self, i: int):
        v = self.zero()
        v[i] = ONE if self.exact else 1.0
        return v

    def coerce(self, x):
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise StructureError(f"element has shape {x.shape}, expected ({self.dim},)")
        if self.exact and not is_exact_array(x):
            return as_exact_array(x) if x.dtype.kind in "iu" else x
        return x

    @cached_property
    def constants(self):
        C = zeros((self.dim, self.dim, self.dim), self.exact)
        for i, row in enumerate(self._prod):
            for j, cell in enumerate(row):
                for k, c in cell:
                    C[i, j, k] = c
        return C

    @cached_property
    def _float_constants(self):
        return to_float_array(self.constants)

    # arithmetic -------------------------------------------------------------
    def mul(self, x, y):
        exact = self.exact and is_exact_array(x) and is_exact_array(y)
        if not exact:
            x, y = to_float_array(x), to_float_array(y)
            return np.einsum("i,j,ijk->k", x, y, self._float_constants)
        acc = {}
        ys = _nonzero(y)
        for i, a in _nonzero(x):
            row = self._prod[i]
            for j, b in ys:
                cell = row[j]
                if not cell:
                    continue
                ab = a * b
                for k, c in cell:
                    acc[k] = acc.get(k, ZERO) + ab * c
        out = self.zero()
        for k, v in acc.items():
            out[k] = v
        return out

    def star(self, x):
        return matmul(self.star_matrix, np.conj(x))

    def commutator(self, x, y):
        return self.mul(x, y) - self.mul(y, x)

    def left_matrix(self, x):
        """Matrix of ``y -> x y``."""
        cols = [self.mul(x, self.basis(j)) for j in range(self.dim)]
        return np.stack(cols, axis=1)

    def right_matrix(self, x):
        """Matrix of ``y -> y x``."""
        cols = [self.mul(self.basis(j), x) for j in range(self.dim)]
        return np.stack(cols, axis=1)

    def equal(self, x, y, tol: float | None = None) -> bool:
        return arrays_equal(x, y, tol)

    def is_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if not self.equal(self.mul(self.basis(i), self.basis(j)), self.mul(self.basis(j), self.basis(i))):
                    return False
        return True

    def tensor(self, other: "StructureAlgebra") -> "StructureAlgebra":
        """Tensor product; basis ``b_i (x) c_j`` sits at index ``i * other.dim + j``."""
        d2 = other.dim
        prods = []
        for i in range(self.dim):
            for j in range(d2):
                row = []
                for k in range(self.dim):
                    p1 = self._prod[i][k]
                    for l in range(d2):
                        p2 = other._prod[j][l]
                        row.append([(m * d2 + n, c1 * c2) for m, c1 in p1 for n, c2 in p2])
                prods.append(row)
        exact = self.exact and other.exact
        unit = np.kron(self.unit, other.unit) if exact else np.kron(to_float_array(self.unit), to_float_array(other.unit))
        star = np.kron(self.star_matrix, other.star_matrix) if exact else np.kron(
            to_float_array(self.star_matrix), to_float_array(other.star_matrix))
        name = f"{self.name} (x) {other.name}" if self.name and other.name else ""
        return StructureAlgebra(prods, unit, star, name=name, exact=exact)

    def check_associative(self) -> list:
        """Basis triples violating associativity (empty list when associative)."""
        bad = []
        for i in range(self.dim):
            bi = self.basis(i)
            for j in range(self.dim):
                bij = self.mul(bi, self.basis(j))
                for k in range(self.dim):
                    bk = self.basis(k)
                    if not self.equal(self.mul(bij, bk), self.mul(bi, self.mul(self.basis(j), bk))):
                        bad.append((i, j, k))
        return bad

    def check_unit(self) -> bool:
        return all(self.equal(self.mul(self.unit, self.basis(i)), self.basis(i))
                   and self.equal(self.mul(self.basis(i), self.unit), self.basis(i)) for i in range(self.dim))

    def check_star(self) -> list:
        """Violations of ``(xy)* = y* x*`` and ``x** = x`` on the basis."""
        bad = []
        for i in range(self.dim):
            bi = self.basis(i)
            if not self.equal(self.star(self.star(bi)), bi):
                bad.append(("involution", i))
            for j in range(self.dim):
                bj = self.basis(j)
                if not self.equal(self.star(self.mul(bi, bj)), self.mul(self.star(bj), self.star(bi))):
                    bad.append(("antimultiplicative", i, j))
        return bad

    def decomposition(self, seed: int = 0):
        """Cached Wedderburn decomposition (see :func:`qgw.algebra.wedderburn_decompose`)."""
        cache = self.__dict__.setdefault("_decomp_cache", {})
        if seed not in cache:
            from .wedderburn import wedderburn_decompose

            cache[seed] = wedderburn_decompose(self, seed=seed)
        return cache[seed]

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"StructureAlgebra(dim={self.dim}, {mode}{', ' + self.name if self.name else ''})"


@dataclass
class HomReport:
    multiplicative: bool = True
    star: bool = True
    unital: bool = True
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.multiplicative and self.star and self.unital


class LinearMapRep:
    """A linear map between structure algebras, stored as a matrix in their bases.

    ``is_star_hom``/``is_unital`` start as ``None`` (unknown) and are only set
    by :func:`verify_star_homomorphism`.
    """

    def __init__(self, source: StructureAlgebra, target: StructureAlgebra, matrix, name: str = ""):
        M = np.asarray(matrix)
        if M.shape != (target.dim, source.dim):
            raise StructureError(f"map matrix has shape {M.shape}, expected {(target.dim, source.dim)}")
        self.source = source
        self.target = target
        self.matrix = M
        self.name = name
        self.is_star_hom: bool | None = None
        self.is_anti_hom: bool | None = None
        self.is_unital: bool | None = None

    def __call__(self, x):
        return matmul(self.matrix, x)

    def compose(self, inner: "LinearMapRep") -> "LinearMapRep":
        """``self o inner``; verified flags propagate when both maps carry them."""
        if inner.target is not self.source and inner.target.dim != self.source.dim:
            raise StructureError("cannot compose: dimension mismatch")
        out = LinearMapRep(inner.source, self.target, matmul(self.matrix, inner.matrix),
                           name=f"{self.name} o {inner.name}")
        if self.is_star_hom and inner.is_star_hom:
            out.is_star_hom = True
        if self.is_unital and inner.is_unital:
            out.is_unital = True
        return out

    @classmethod
    def identity(cls, A: StructureAlgebra) -> "LinearMapRep":
        from ..scalars import identity

        return cls(A, A, identity(A.dim, A.exact), name="id")


def verify_star_homomorphism(f: LinearMapRep, unital: bool = True, anti: bool = False,
                             tol: float | None = None) -> HomReport:
    """Check ``f(xy) = f(x) f(y)`` (or ``f(y) f(x)`` if ``anti``), ``f(x*) = f(x)*`` and ``f(1) = 1``.

    Runs over all basis pairs and records the first witnesses of each failure.
    """
    A, B = f.source, f.target
    rep = HomReport()
    imgs = [f(A.basis(i)) for i in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = f(A.mul(A.basis(i), A.basis(j)))
            rhs = B.mul(imgs[j], imgs[i]) if anti else B.mul(imgs[i], imgs[j])
            if not arrays_equal(lhs, rhs, tol):
                if rep.multiplicative:
                    rep.violations.append({"identity": "anti-multiplicative" if anti else "multiplicative",
                                           "basis": [i, j], "defect": max_abs(to_float_array(lhs) - to_float_array(rhs))})
                rep.multiplicative = False
        if not arrays_equal(f(A.star(A.basis(i))), B.star(imgs[i]), tol):
            if rep.star:
                rep.violations.append({"identity": "star", "basis": [i]})
            rep.star = False
    if unital and not arrays_equal(f(A.unit), B.unit, tol):
        rep.unital = False
        rep.violations.append({"identity": "unital"})
    if anti:
        f.is_anti_hom = rep.multiplicative and rep.star
    else:
        f.is_star_hom = rep.multiplicative and rep.star
    if unital:
        f.is_unital = rep.unital
    return rep


class Functional:
    """Linear functional ``x -> sum_i coeffs[i] x_i`` on a structure algebra."""

    def __init__(self, parent: StructureAlgebra, coeffs):
        c = np.asarray(coeffs)
        if c.shape != (parent.dim,):
            raise StructureError("functional length does not match the algebra dimension")
        if parent.exact and is_exact_array(c):
            self.coeffs = c
        elif parent.exact and c.dtype.kind in "iu":
            self.coeffs = as_exact_array(c)
        else:
            self.coeffs = to_float_array(c)
        self.parent = parent

    @property
    def exact(self) -> bool:
        return is_exact_array(self.coeffs)

    def __call__(self, x):
        x = np.asarray(x)
        if self.exact and is_exact_array(x):
            acc = ZERO
            for a, b in zip(self.coeffs, x):
                if a and b:
                    acc = acc + a * b
            return acc
        return complex(np.dot(to_float_array(self.coeffs), to_float_array(x)))

    def _check(self, other):
        if not isinstance(other, Functional) or other.parent is not self.parent and other.parent.dim != self.parent.dim:
            raise StructureError("functionals live on different algebras")

    def __add__(self, other):
        self._check(other)
        return Functional(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return Functional(self.parent, self.coeffs - other.coeffs)

    def __mul__(self, s):
        return Functional(self.parent, self.coeffs * s)

    __rmul__ = __mul__

    def equals(self, other, tol: float | None = None) -> bool:
        self._check(other)
        return arrays_equal(self.coeffs, other.coeffs, tol)

    def distance(self, other) -> float:
        return max_abs(to_float_array(self.coeffs) - to_float_array(other.coeffs))

    def to_float(self) -> "Functional":
        return Functional(self.parent, to_float_array(self.coeffs))

    def density_matrices(self, seed: int = 0):
        """Per-block matrices ``rho_k`` with ``phi(x) = sum_k tr(rho_k x_k)``."""
        dec = self.parent.decomposition(seed)
        values = matmul(self.coeffs, dec.from_blocks.matrix) if (self.exact and dec.exact) else \
            to_float_array(self.coeffs) @ to_float_array(dec.from_blocks.matrix)
        out, off = [], 0
        for n in dec.blocks.dims:
            out.append(values[off: off + n * n].reshape(n, n).T)
            off += n * n
        return out

    def is_tracial(self, tol: float | None = None) -> bool:
        A = self.parent
        for i in range(A.dim):
            for j in range(i + 1, A.dim):
                v = self(A.commutator(A.basis(i), A.basis(j)))
                if not is_zero(v, tol):
                    return False
        return True

    def is_positive(self, tol: float | None = None, seed: int = 0) -> bool:
        from .blocks import matrix_is_psd

        for rho in self.density_matrices(seed):
            if not matrix_is_psd(rho, tol):
                return False
        return True

    def is_state(self, tol: float | None = None, seed: int = 0) -> bool:
        one = self(self.parent.unit)
        if not is_zero(one - (ONE if self.exact else 1.0), tol):
            return False
        return self.is_positive(tol, seed)

    def is_faithful(self, tol: float | None = None, seed: int = 0) -> bool:
        """Positive with every density matrix strictly positive definite."""
        tol = get_tolerance() if tol is None else tol
        if not self.is_positive(tol, seed):
            return False
        for rho in self.density_matrices(seed):
            ev = np.linalg.eigvalsh(to_float_array(rho))
            if ev.size and ev.min() <= tol:
                return False
        return True

    def __repr__(self):
        return f"Functional(dim={self.parent.dim}, {'exact' if self.exact else 'float'})"
