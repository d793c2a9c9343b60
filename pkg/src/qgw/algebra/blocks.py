"""Direct sums of full matrix algebras and their elements."""
from __future__ import annotations

from itertools import product

import numpy as np

from ..errors import StructureError
from ..scalars import (
    ONE,
    ZERO,
    arrays_equal,
    as_exact_array,
    get_tolerance,
    identity,
    is_exact_array,
    to_float_array,
    zeros,
)
from .structure import StructureAlgebra


class BlockAlgebra:
    """``M_{n_1} + ... + M_{n_K}``.

    The flat coordinate layout concatenates the blocks, each in row-major
    order, so matrix unit ``E^k_{ij}`` sits at ``offset(k) + i * n_k + j``.
    """

    def __init__(self, block_dims, exact: bool = True):
        dims = tuple(int(n) for n in block_dims)
        if not dims or any(n <= 0 for n in dims):
            raise StructureError(f"block dimensions must be a non-empty list of positive integers, got {block_dims!r}")
        self.block_dims = dims
        self.exact = bool(exact)
        self.offsets = tuple(int(x) for x in np.cumsum((0,) + tuple(n * n for n in dims))[:-1])

    @property
    def dims(self):
        return self.block_dims

    @property
    def dim(self) -> int:
        return sum(n * n for n in self.block_dims)

    def __eq__(self, other):
        return isinstance(other, BlockAlgebra) and self.block_dims == other.block_dims

    def __hash__(self):
        return hash(self.block_dims)

    def __repr__(self):
        return f"BlockAlgebra({list(self.block_dims)})"

    def sorted_dims(self):
        return sorted(self.block_dims)

    # elements ---------------------------------------------------------------
    def element(self, blocks) -> "AlgElement":
        return AlgElement(self, blocks)

    def zero(self) -> "AlgElement":
        return AlgElement(self, [zeros((n, n), self.exact) for n in self.block_dims])

    def unit(self) -> "AlgElement":
        return AlgElement(self, [identity(n, self.exact) for n in self.block_dims])

    def matrix_unit(self, k: int, i: int, j: int) -> "AlgElement":
        x = self.zero()
        x.blocks[k][i, j] = ONE if self.exact else 1.0
        return x

    def from_vector(self, v) -> "AlgElement":
        v = np.asarray(v)
        if v.shape != (self.dim,):
            raise StructureError(f"vector of length {v.shape} does not match dimension {self.dim}")
        blocks = []
        for n, off in zip(self.block_dims, self.offsets):
            blocks.append(v[off: off + n * n].reshape(n, n).copy())
        return AlgElement(self, blocks)

    def random_element(self, rng, rational: bool | None = None) -> "AlgElement":
        """Random element; small-integer Gaussian entries in exact mode."""
        rational = self.exact if rational is None else rational
        blocks = []
        for n in self.block_dims:
            if rational:
                re_ = rng.integers(-3, 4, size=(n, n))
                im_ = rng.integers(-3, 4, size=(n, n))
                from ..scalars import ExactComplex

                b = np.empty((n, n), dtype=object)
                for i in range(n):
                    for j in range(n):
                        b[i, j] = ExactComplex(int(re_[i, j]), int(im_[i, j]))
            else:
                b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            blocks.append(b)
        return AlgElement(self, blocks)

    def structure(self) -> StructureAlgebra:
        """Structure constants in the matrix-unit basis."""
        prods = [[() for _ in range(self.dim)] for _ in range(self.dim)]
        one = ONE if self.exact else 1.0
        for k, (n, off) in enumerate(zip(self.block_dims, self.offsets)):
            for i, j, l in product(range(n), repeat=3):
                prods[off + i * n + j][off + j * n + l] = ((off + i * n + l, one),)
        unit = zeros(self.dim, self.exact)
        star = zeros((self.dim, self.dim), self.exact)
        for n, off in zip(self.block_dims, self.offsets):
            for i in range(n):
                unit[off + i * n + i] = one
                for j in range(n):
                    star[off + j * n + i, off + i * n + j] = one
        return StructureAlgebra(prods, unit, star, name=f"blocks{list(self.block_dims)}", exact=self.exact)


class AlgElement:
    """Element of a :class:`BlockAlgebra`, held as a list of square matrices."""

    __slots__ = ("parent", "blocks")

    def __init__(self, parent: BlockAlgebra, blocks):
        if len(blocks) != len(parent.block_dims):
            raise StructureError("number of blocks does not match the parent algebra")
        out = []
        for b, n in zip(blocks, parent.block_dims):
            b = np.asarray(b)
            if b.shape != (n, n):
                raise StructureError(f"block of shape {b.shape} where ({n}, {n}) was expected")
            if parent.exact and not is_exact_array(b):
                if b.dtype.kind in "iu":
                    b = as_exact_array(b)
            out.append(b)
        self.parent = parent
        self.blocks = out

    @property
    def exact(self) -> bool:
        return all(is_exact_array(b) for b in self.blocks)

    def _check(self, other):
        if not isinstance(other, AlgElement) or other.parent != self.parent:
            raise StructureError("elements belong to different algebras")

    def to_vector(self):
        return np.concatenate([b.reshape(-1) for b in self.blocks])

    def to_float(self) -> "AlgElement":
        return AlgElement(BlockAlgebra(self.parent.block_dims, exact=False),
                          [to_float_array(b) for b in self.blocks])

    def __add__(self, other):
        self._check(other)
        return AlgElement(self.parent, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return AlgElement(self.parent, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgElement(self.parent, [-a for a in self.blocks])

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return multiply(self, other)
        return AlgElement(self.parent, [a * other for a in self.blocks])

    def __rmul__(self, s):
        return AlgElement(self.parent, [s * a for a in self.blocks])

    def star(self) -> "AlgElement":
        return AlgElement(self.parent, [np.conj(b).T.copy() for b in self.blocks])

    adjoint = star

    def equals(self, other, tol: float | None = None) -> bool:
        self._check(other)
        return all(arrays_equal(a, b, tol) for a, b in zip(self.blocks, other.blocks))

    def __eq__(self, other):
        if not isinstance(other, AlgElement) or other.parent != self.parent:
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def is_self_adjoint(self, tol: float | None = None) -> bool:
        return self.equals(self.star(), tol)

    def __repr__(self):
        return f"AlgElement({list(self.parent.block_dims)}, blocks={[b.tolist() for b in self.blocks]!r})"


def multiply(x: AlgElement, y: AlgElement) -> AlgElement:
    """Blockwise matrix product."""
    x._check(y)
    from ..linalg import matmul

    return AlgElement(x.parent, [matmul(a, b) for a, b in zip(x.blocks, y.blocks)])


def tensor_algebra(A1: BlockAlgebra, A2: BlockAlgebra):
    """Tensor product of block algebras together with the element map ``(x, y) -> x (x) y``.

    Blocks of the result are ``M_{n_i} (x) M_{m_j}`` in lexicographic ``(i, j)`` order.
    """
    dims = [n * m for n in A1.block_dims for m in A2.block_dims]
    T = BlockAlgebra(dims, exact=A1.exact and A2.exact)

    def element_map(x: AlgElement, y: AlgElement) -> AlgElement:
        if x.parent != A1 or y.parent != A2:
            raise StructureError("tensor element map applied to elements of the wrong algebras")
        blocks = []
        for a in x.blocks:
            for b in y.blocks:
                if is_exact_array(a) and is_exact_array(b):
                    blocks.append(np.kron(a, b))
                else:
                    blocks.append(np.kron(to_float_array(a), to_float_array(b)))
        return AlgElement(T, blocks)

    return T, element_map


def _charpoly_exact(M):
    """Faddeev-LeVerrier coefficients of ``det(t - M)``, leading first."""
    from ..linalg import matmul

    n = M.shape[0]
    coeffs = [ONE]
    I = identity(n, True)
    Mk_prev = zeros((n, n), True)
    for k in range(1, n + 1):
        Mk = matmul(M, Mk_prev) + I * coeffs[-1] if k > 1 else I.copy()
        AM = matmul(M, Mk)
        tr = ZERO
        for i in range(n):
            tr = tr + AM[i, i]
        coeffs.append(-tr / k)
        Mk_prev = Mk
    return coeffs


def matrix_is_psd(M, tol: float | None = None) -> bool:
    """Self-adjoint with spectrum >= -tol (float) or >= 0 (exact, n <= 6)."""
    M = np.asarray(M)
    n = M.shape[0]
    if n == 0:
        return True
    if is_exact_array(M) and n <= 6:
        if not arrays_equal(M, np.conj(M).T.copy()):
            return False
        coeffs = _charpoly_exact(M)
        # Hermitian: all roots real, so roots >= 0 iff coefficients alternate in sign
        for k, c in enumerate(coeffs):
            if c.im:
                return False
            s = c.re * (-1) ** k
            if s < 0:
                return False
        return True
    Mf = to_float_array(M)
    tol = get_tolerance() if tol is None else tol
    if not np.allclose(Mf, Mf.conj().T, atol=tol, rtol=0):
        return False
    return bool(np.linalg.eigvalsh((Mf + Mf.conj().T) / 2).min() >= -tol)


def is_positive(x: AlgElement, tol: float | None = None) -> bool:
    """True iff ``x = x*`` and every block has spectrum >= -tol."""
    return all(matrix_is_psd(b, tol) for b in x.blocks)
