"""Wedderburn decomposition of a finite-dimensional C*-algebra given by structure constants.

The splitting is computed numerically (seeded, so it is reproducible) and then
certified: central idempotents are rationalized and checked exactly whenever
the input is exact, and the resulting isomorphism is verified as a unital
*-homomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..errors import DecompositionError
from ..linalg import inverse, nullspace, orthonormal_columns, rank, solve
from ..scalars import (
    ZERO,
    arrays_equal,
    exact_from_float,
    is_exact_array,
    to_float_array,
    zeros,
)
from .blocks import AlgElement, BlockAlgebra
from .structure import Functional, LinearMapRep, StructureAlgebra, verify_star_homomorphism

_CLUSTER_TOL = 1e-6
_MAX_TRIES = 8


@dataclass
class WedderburnResult:
    """Block data, the isomorphism in both directions, and per-block traces.

    ``from_blocks`` maps flat block coordinates to carrier coordinates (its
    columns are the matrix units); ``to_blocks`` is its inverse.
    """

    source: StructureAlgebra
    blocks: BlockAlgebra
    from_blocks: LinearMapRep
    to_blocks: LinearMapRep
    central_idempotents: list
    block_traces: list
    exact: bool
    certified_idempotents: bool
    report: dict = field(default_factory=dict)

    @property
    def block_dims(self):
        return list(self.blocks.block_dims)

    def to_element(self, x) -> AlgElement:
        return self.blocks.from_vector(self.to_blocks(x))

    def from_element(self, y: AlgElement):
        return self.from_blocks(y.to_vector())

    def matrix_unit(self, k: int, i: int, j: int):
        n = self.blocks.block_dims[k]
        return self.from_blocks.matrix[:, self.blocks.offsets[k] + i * n + j]


def _trace_form(A: StructureAlgebra):
    """``T[i, j] = tr(L_{b_i b_j})`` for the regular representation."""
    C = A.constants
    d = A.dim
    if A.exact:
        tl = [sum((C[k, m, m] for m in range(d)), ZERO) for k in range(d)]
        T = zeros((d, d), True)
        for i in range(d):
            for j in range(d):
                acc = ZERO
                for k, c in A._prod[i][j]:
                    if tl[k]:
                        acc = acc + c * tl[k]
                T[i, j] = acc
        return T
    Cf = to_float_array(C)
    tl = np.einsum("kmm->k", Cf)
    return np.einsum("ijk,k->ij", Cf, tl)


def _center_basis(A: StructureAlgebra):
    rows = []
    for i in range(A.dim):
        bi = A.basis(i)
        rows.append(A.left_matrix(bi) - A.right_matrix(bi))
    M = np.concatenate(rows, axis=0)
    return nullspace(M)


def _trace_space(A: StructureAlgebra):
    """Columns span the functionals vanishing on all commutators."""
    comms = []
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            c = A.commutator(A.basis(i), A.basis(j))
            if is_exact_array(c):
                if any(c):
                    comms.append(c)
            elif np.max(np.abs(c)) > 0:
                comms.append(c)
    if not comms:
        return nullspace(zeros((0, A.dim), A.exact))
    return nullspace(np.stack(comms))


def _cluster(vals, tol):
    """Group complex numbers closer than ``tol``; returns cluster centers and sizes."""
    centers, sizes = [], []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        for k, c in enumerate(centers):
            if abs(v - c) <= tol:
                sizes[k] += 1
                centers[k] = c + (v - c) / sizes[k]
                break
        else:
            centers.append(v)
            sizes.append(1)
    return centers, sizes


def _central_idempotents(Af: StructureAlgebra, Z, rng):
    """Minimal central projections (float) from a random self-adjoint central element."""
    z = Z.shape[1]
    if z == 1:
        return [Af.unit.copy()]
    Q = orthonormal_columns(Z)
    for _ in range(_MAX_TRIES):
        x = Q @ (rng.standard_normal(z) + 1j * rng.standard_normal(z))
        c = x + Af.star(x)
        # action of c on the center in the orthonormal basis Q
        M = Q.conj().T @ Af.left_matrix(c) @ Q
        vals, vecs = np.linalg.eig(M)
        scale = max(1.0, float(np.max(np.abs(vals))))
        _, sizes = _cluster(list(vals), _CLUSTER_TOL * scale)
        if max(sizes) > 1:
            continue
        out = []
        for k in range(z):
            y = Q @ vecs[:, k]
            yy = Af.mul(y, y)
            i = int(np.argmax(np.abs(y)))
            mu = yy[i] / y[i]
            out.append(y / mu)
        return out
    raise DecompositionError("could not separate the center with a random self-adjoint element")


def _certify_idempotents(A: StructureAlgebra, es):
    """Rationalize float idempotents and check all idempotent relations exactly."""
    cand = [np.array([exact_from_float(v, 10**4) for v in e], dtype=object) for e in es]
    total = zeros(A.dim, True)
    for i, e in enumerate(cand):
        if not arrays_equal(A.mul(e, e), e) or not arrays_equal(A.star(e), e):
            return None
        for b in range(A.dim):
            bb = A.basis(b)
            if not arrays_equal(A.mul(e, bb), A.mul(bb, e)):
                return None
        total = total + e
    if not arrays_equal(total, A.unit):
        return None
    for i in range(len(cand)):
        for j in range(i + 1, len(cand)):
            if any(A.mul(cand[i], cand[j])):
                return None
    return cand


def _minimal_projection(Af: StructureAlgebra, e, n, rng):
    """A rank-one projection inside the block ``e A`` (``e`` central, block ``M_n``)."""
    if n == 1:
        return e
    Le = Af.left_matrix(e)
    Qk = orthonormal_columns(Le)
    for _ in range(_MAX_TRIES):
        x = Qk @ (rng.standard_normal(Qk.shape[1]) + 1j * rng.standard_normal(Qk.shape[1]))
        a = Af.mul(e, x + Af.star(x))
        M = Qk.conj().T @ Af.left_matrix(a) @ Qk
        vals = np.linalg.eigvals(M)
        scale = max(1.0, float(np.max(np.abs(vals))))
        centers, sizes = _cluster(list(vals), _CLUSTER_TOL * scale)
        if len(centers) != n or any(s != n for s in sizes):
            continue
        lam = centers[-1]
        p = e.copy()
        for mu in centers[:-1]:
            p = Af.mul(p, (a - mu * e) / (lam - mu))
        if np.max(np.abs(Af.mul(p, p) - p)) > 1e-7:
            continue
        return p
    raise DecompositionError("could not find a minimal projection in a matrix block")


def _matrix_units(Af: StructureAlgebra, e, n, rng):
    """Matrix units ``E[i][j]`` (carrier vectors) for the block ``e A = M_n``."""
    p = _minimal_projection(Af, e, n, rng)
    if n == 1:
        return [[p]]
    W = orthonormal_columns(Af.right_matrix(p))
    if W.shape[1] != n:
        raise DecompositionError(f"left ideal has dimension {W.shape[1]}, expected {n}")
    pn = np.vdot(p, p).real

    def inner(x, y):
        # y* x = <x, y> p
        return np.vdot(p, Af.mul(Af.star(y), x)) / pn

    vs = []
    for k in range(n):
        w = W[:, k].copy()
        for v in vs:
            w = w - inner(w, v) * v
        nrm = inner(w, w).real
        if nrm <= 1e-12:
            raise DecompositionError("degenerate left ideal during Gram-Schmidt")
        vs.append(w / np.sqrt(nrm))
    return [[Af.mul(vs[i], Af.star(vs[j])) for j in range(n)] for i in range(n)]


def _block_key(n, e):
    ef = to_float_array(e)
    nz = np.flatnonzero(np.abs(ef) > 1e-9)
    first = int(nz[0]) if nz.size else len(ef)
    coords = tuple((-round(v.real, 6) + 0.0, -round(v.imag, 6) + 0.0) for v in ef)
    return (n, first, coords)


def wedderburn_decompose(A: StructureAlgebra, seed: int = 0, verify: bool = True) -> WedderburnResult:
    """Decompose a semisimple *-algebra into ``M_{n_1} + ... + M_{n_K}``.

    Blocks are sorted by size, ties broken by the first carrier coordinate on
    which the central idempotent is supported.  Raises
    :class:`DecompositionError` if the trace form is degenerate (a nonzero
    radical exists) or the numerical splitting fails.
    """
    rng = np.random.default_rng(seed)
    d = A.dim
    T = _trace_form(A)
    r = rank(T)
    if r != d:
        raise DecompositionError(f"algebra is not semisimple: radical of dimension {d - r}")

    Af = A.to_float()
    Z = _center_basis(A)
    es_float = _central_idempotents(Af, to_float_array(Z), rng)
    es_exact = _certify_idempotents(A, es_float) if A.exact else None

    blocks = []
    for k, e in enumerate(es_float):
        rk = rank(Af.left_matrix(e))
        n = int(round(np.sqrt(rk)))
        if n * n != rk:
            raise DecompositionError(f"block ideal of dimension {rk} is not a full matrix algebra")
        blocks.append((n, e, es_exact[k] if es_exact is not None else None))
    blocks.sort(key=lambda t: _block_key(t[0], t[2] if t[2] is not None else t[1]))

    dims = [b[0] for b in blocks]
    iso_exact = es_exact is not None and all(n == 1 for n in dims)
    cols = []
    for n, e, ee in blocks:
        if iso_exact:
            cols.append(ee)
            continue
        units = _matrix_units(Af, e, n, rng)
        for i in range(n):
            for j in range(n):
                cols.append(units[i][j])
    Phi = np.stack(cols, axis=1) if iso_exact else np.stack([to_float_array(c) for c in cols], axis=1)
    B = BlockAlgebra(dims, exact=iso_exact)
    Bs = B.structure()
    target = A if iso_exact else Af
    from_blocks = LinearMapRep(Bs, target, Phi, name="wedderburn")
    to_blocks = LinearMapRep(target, Bs, inverse(Phi), name="wedderburn^-1")

    # normalized block traces, exact when the idempotents are
    traces = _block_traces(A, Af, blocks, to_blocks, B, es_exact is not None)

    report = {}
    if verify:
        rep = verify_star_homomorphism(from_blocks, tol=1e-8)
        report = {"star_hom": rep.ok, "violations": rep.violations}
        if not rep.ok:
            raise DecompositionError(f"constructed isomorphism failed verification: {rep.violations[:3]}")
        to_blocks.is_star_hom = True
        to_blocks.is_unital = True
    central = [b[2] if b[2] is not None else b[1] for b in blocks]
    return WedderburnResult(A, B, from_blocks, to_blocks, central, traces, iso_exact,
                            es_exact is not None, report)


def _block_traces(A, Af, blocks, to_blocks, B, certified):
    K = len(blocks)
    if certified:
        Tsp = _trace_space(A)
        if Tsp.shape[1] == K:
            G = zeros((K, K), True)
            for j, (_, _, ee) in enumerate(blocks):
                for m in range(K):
                    acc = ZERO
                    for a, b in zip(Tsp[:, m], ee):
                        if a and b:
                            acc = acc + a * b
                    G[j, m] = acc
            from ..scalars import identity

            coef = solve(G, identity(K, True))
            return [Functional(A, _mv(Tsp, coef[:, k])) for k in range(K)]
    out = []
    M = to_float_array(to_blocks.matrix)
    for k, n in enumerate(B.block_dims):
        off = B.offsets[k]
        row = sum(M[off + i * n + i] for i in range(n)) / n
        out.append(Functional(A, row))
    return out


def _mv(M, v):
    out = zeros(M.shape[0], True)
    for j, c in enumerate(v):
        if c:
            for i in range(M.shape[0]):
                if M[i, j]:
                    out[i] = out[i] + M[i, j] * c
    return out


class WedderburnDecomposition(BaseEstimator, TransformerMixin):
    """Estimator wrapper: ``fit`` a structure algebra, ``transform`` carrier vectors to block coordinates.

    Parameters
    ----------
    seed : int
        Seed for the random self-adjoint elements used to split the algebra.
    verify : bool
        Verify the isomorphism after construction.
    """

    def __init__(self, seed: int = 0, verify: bool = True):
        self.seed = seed
        self.verify = verify

    def fit(self, X: StructureAlgebra, y=None):
        self.result_ = wedderburn_decompose(X, seed=self.seed, verify=self.verify)
        self.block_dims_ = self.result_.block_dims
        return self

    def transform(self, X):
        check_is_fitted(self, "result_")
        M = self.result_.to_blocks.matrix
        X = np.asarray(X)
        if self.result_.exact and is_exact_array(X):
            from ..linalg import matmul

            return matmul(X, M.T.copy())
        return to_float_array(X) @ to_float_array(M).T

    def inverse_transform(self, X):
        check_is_fitted(self, "result_")
        M = self.result_.from_blocks.matrix
        X = np.asarray(X)
        if self.result_.exact and is_exact_array(X):
            from ..linalg import matmul

            return matmul(X, M.T.copy())
        return to_float_array(X) @ to_float_array(M).T
