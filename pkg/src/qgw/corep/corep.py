"""Unitary corepresentations of finite quantum groups.

A corepresentation is an ``N x N`` matrix ``u`` with entries in the algebra
(stored as carrier coordinate vectors, shape ``(N, N, d)``) such that
``Delta(u_kl) = sum_p u_kp (x) u_pl``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra import StructureAlgebra, wedderburn_decompose
from ..errors import NumericalError, StructureError
from ..hopf.quantum_group import FiniteQuantumGroup, haar_state
from ..linalg import matmul, nullspace, orthonormal_columns, rank
from ..scalars import arrays_equal, is_exact_array, to_float_array, zeros


class Corepresentation:
    """``N x N`` matrix of algebra elements of a finite quantum group."""

    def __init__(self, Q: FiniteQuantumGroup, entries, name: str = ""):
        E = np.asarray(entries)
        if E.ndim != 3 or E.shape[0] != E.shape[1] or E.shape[2] != Q.dim:
            raise StructureError(f"corepresentation entries must have shape (N, N, {Q.dim}), got {E.shape}")
        self.Q = Q
        self.entries = E
        self.name = name

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact_array(self.entries)

    def entry(self, k: int, l: int):
        return self.entries[k, l]

    def character(self):
        acc = self.entries[0, 0].copy()
        for k in range(1, self.dim):
            acc = acc + self.entries[k, k]
        return acc

    def to_float(self) -> "Corepresentation":
        return Corepresentation(self.Q, to_float_array(self.entries), self.name)

    def __repr__(self):
        return f"Corepresentation({self.name or '?'}, dim={self.dim})"


def trivial_corep(Q: FiniteQuantumGroup) -> Corepresentation:
    return Corepresentation(Q, Q.structure.unit.reshape(1, 1, -1).copy(), "trivial")


def _algebra(Q, exact_mode):
    return Q.structure if exact_mode else Q.structure.to_float()


def is_unitary_corep(Q: FiniteQuantumGroup, u: Corepresentation, tol: float = 1e-9) -> bool:
    """Unitarity ``u* u = u u* = 1`` and ``Delta(u_kl) = sum_p u_kp (x) u_pl``."""
    exact_mode = Q.exact and u.exact
    A = _algebra(Q, exact_mode)
    t = None if exact_mode else tol
    E = u.entries if exact_mode else to_float_array(u.entries)
    N = u.dim
    delta = Q.delta if exact_mode else to_float_array(Q.delta)
    one, zero = A.unit, A.zero()
    for k in range(N):
        for l in range(N):
            a = zero.copy()
            b = zero.copy()
            for p in range(N):
                a = a + A.mul(A.star(E[p, k]), E[p, l])
                b = b + A.mul(E[k, p], A.star(E[l, p]))
            target = one if k == l else zero
            if not arrays_equal(a, target, t) or not arrays_equal(b, target, t):
                return False
            lhs = matmul(delta, E[k, l])
            kron = _kron if exact_mode else np.kron
            rhs = zeros(Q.dim * Q.dim, exact_mode)
            for p in range(N):
                rhs = rhs + kron(E[k, p], E[p, l])
            if not arrays_equal(lhs, rhs, t):
                return False
    return True


def _kron(a, b):
    return np.array([x * y for x in a for y in b], dtype=object)


def regular_corep(Q: FiniteQuantumGroup) -> Corepresentation:
    """``Delta(b_l) = sum_k b_k (x) u_kl``, made unitary in a Haar-orthonormal basis if needed."""
    d = Q.dim
    D = Q.delta.reshape(d, d, d)  # D[k, j, l]: coefficient of b_k (x) b_j in Delta(b_l)
    E = np.transpose(D, (0, 2, 1)).copy()
    u = Corepresentation(Q, E, "regular")
    if is_unitary_corep(Q, u):
        return u
    # change to a basis orthonormal for <x, y> = h(x* y)
    h = to_float_array(haar_state(Q).coeffs)
    A = Q.structure.to_float()
    G = np.array([[h @ A.mul(A.star(A.basis(k)), A.basis(l)) for l in range(d)] for k in range(d)])
    w, V = np.linalg.eigh((G + G.conj().T) / 2)
    if w.min() <= 1e-12:
        raise NumericalError("Haar state is not faithful on the carrier basis")
    M = V @ np.diag(w ** -0.5) @ V.conj().T
    Minv = V @ np.diag(w ** 0.5) @ V.conj().T
    Ef = to_float_array(E)
    E2 = np.einsum("nk,kld,lm->nmd", Minv, Ef, M)
    u = Corepresentation(Q, E2, "regular")
    if not is_unitary_corep(Q, u):
        raise NumericalError("regular corepresentation is not unitary in the Haar-orthonormal basis")
    return u


def tensor_corep(u: Corepresentation, v: Corepresentation) -> Corepresentation:
    """``(u (x) v)_{(i,j),(k,l)} = u_ik v_jl`` (index ``i * dim v + j``)."""
    if u.Q is not v.Q:
        raise StructureError("tensor product needs corepresentations of the same quantum group")
    Q = u.Q
    exact_mode = u.exact and v.exact and Q.exact
    A = _algebra(Q, exact_mode)
    Eu = u.entries if exact_mode else to_float_array(u.entries)
    Ev = v.entries if exact_mode else to_float_array(v.entries)
    n, m = u.dim, v.dim
    out = zeros((n * m, n * m, Q.dim), exact_mode)
    for i in range(n):
        for j in range(m):
            for k in range(n):
                for l in range(m):
                    out[i * m + j, k * m + l] = A.mul(Eu[i, k], Ev[j, l])
    return Corepresentation(Q, out, f"{u.name}x{v.name}")


def intertwiners(u: Corepresentation, tol: float = 1e-9):
    """Orthonormal (Frobenius) basis of ``{T : T u = u T}`` as an array ``(m, N, N)``."""
    E = to_float_array(u.entries)
    N, d = u.dim, u.Q.dim
    # unknown T flattened row-major; equation (T u - u T)_{kl}[c] = 0
    rows = np.zeros((N * N * d, N * N), dtype=complex)
    for k in range(N):
        for l in range(N):
            for p in range(N):
                rows[(k * N + l) * d:(k * N + l + 1) * d, k * N + p] += E[p, l]
                rows[(k * N + l) * d:(k * N + l + 1) * d, p * N + l] -= E[k, p]
    Z = nullspace(rows, tol=tol)
    if Z.shape[1] == 0:
        raise NumericalError("intertwiner space is empty; input is not a corepresentation")
    Z = orthonormal_columns(Z)
    return np.array([Z[:, i].reshape(N, N) for i in range(Z.shape[1])])


def _endomorphism_algebra(basis) -> StructureAlgebra:
    m = len(basis)
    flat = np.array([b.reshape(-1) for b in basis]).T  # columns orthonormal
    C = np.zeros((m, m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            C[i, j] = flat.conj().T @ (basis[i] @ basis[j]).reshape(-1)
    N = basis[0].shape[0]
    unit = flat.conj().T @ np.eye(N).reshape(-1)
    S = np.array([flat.conj().T @ basis[i].conj().T.reshape(-1) for i in range(m)]).T
    # star(x) = S @ conj(x)
    return StructureAlgebra.from_constants(C, unit, S, name="End(u)")


@dataclass
class Decomposition:
    """Irreducible components with multiplicities, in canonical order."""

    corep: Corepresentation
    irreducibles: list
    multiplicities: list
    isometries: list = field(default_factory=list)

    @property
    def dims(self):
        return [v.dim for v in self.irreducibles]

    def summary(self):
        return [{"dim": v.dim, "multiplicity": m} for v, m in zip(self.irreducibles, self.multiplicities)]


def decompose_corep(Q: FiniteQuantumGroup, u: Corepresentation, seed: int = 0) -> Decomposition:
    """Split ``u`` into irreducibles via minimal projections of its intertwiner algebra.

    Components are ordered by dimension, then by the first nonzero row of
    their minimal projection.  Each component is ``V* u V`` for an isometry
    ``V`` onto the range of a minimal projection.
    """
    if not is_unitary_corep(Q, u):
        raise StructureError("decompose_corep needs a unitary corepresentation")
    T = intertwiners(u)
    Ef = to_float_array(u.entries)
    if len(T) == 1:
        return Decomposition(u, [u], [1], [np.eye(u.dim)])
    End = _endomorphism_algebra(T)
    W = wedderburn_decompose(End, seed=seed)
    flat = np.array([b.reshape(-1) for b in T]).T
    comps = []
    for k, mult in enumerate(W.blocks.block_dims):
        p = (flat @ to_float_array(W.matrix_unit(k, 0, 0))).reshape(u.dim, u.dim)
        p = (p + p.conj().T) / 2
        V = orthonormal_columns(p, tol=1e-7)
        first = int(np.argmax(np.max(np.abs(p), axis=1) > 1e-7))
        comps.append((V.shape[1], first, V, mult))
    comps.sort(key=lambda c: (c[0], c[1]))
    irreps, mults, isos = [], [], []
    for n, _, V, mult in comps:
        E = np.einsum("ak,abd,bl->kld", V.conj(), Ef, V)
        v = Corepresentation(Q, E, f"irrep{len(irreps)}")
        if not is_unitary_corep(Q, v, tol=1e-7):
            raise NumericalError("restricted component failed the corepresentation check")
        irreps.append(v)
        mults.append(mult)
        isos.append(V)
    if sum(v.dim * m for v, m in zip(irreps, mults)) != u.dim:
        raise NumericalError("component dimensions do not add up")
    return Decomposition(u, irreps, mults, isos)


def _same_character(a, b, tol=1e-7) -> bool:
    return np.max(np.abs(to_float_array(a) - to_float_array(b))) <= tol


@dataclass
class MatrixElementSpan:
    dim: int
    rank: int
    basis: np.ndarray
    irreducible_dims: list

    @property
    def full(self) -> bool:
        return self.rank == self.dim


def matrix_element_span(Q: FiniteQuantumGroup) -> MatrixElementSpan:
    """Span of the matrix elements of the irreducible components of the regular corepresentation."""
    dec = decompose_corep(Q, regular_corep(Q))
    vecs = [to_float_array(v.entries[k, l]) for v in dec.irreducibles for k in range(v.dim) for l in range(v.dim)]
    M = np.array(vecs).T
    B = orthonormal_columns(M, tol=1e-8)
    return MatrixElementSpan(Q.dim, rank(M, tol=1e-8), B, dec.dims)


# fusion ---------------------------------------------------------------------------------

@dataclass
class FusionTable:
    """``N[a][b][c]`` = multiplicity of irreducible ``c`` in ``a (x) b``."""

    irreducibles: list
    table: np.ndarray

    @property
    def dims(self):
        return [v.dim for v in self.irreducibles]

    def unit_index(self) -> int:
        for i, v in enumerate(self.irreducibles):
            if v.dim == 1 and _same_character(v.character(), v.Q.structure.unit):
                return i
        raise StructureError("trivial corepresentation missing from the irreducibles")

    def is_associative(self) -> bool:
        N = self.table
        left = np.einsum("abe,ecf->abcf", N, N)
        right = np.einsum("bce,aef->abcf", N, N)
        return bool(np.array_equal(left, right))

    def has_unit(self) -> bool:
        u = self.unit_index()
        I = np.eye(len(self.irreducibles), dtype=int)
        return bool(np.array_equal(self.table[u], I) and np.array_equal(self.table[:, u], I))

    def to_json(self):
        return {"dims": self.dims, "table": self.table.tolist()}


def irreducibles(Q: FiniteQuantumGroup):
    """One representative per class, from the regular corepresentation."""
    return decompose_corep(Q, regular_corep(Q)).irreducibles


def _match(Q, chars, v) -> int:
    c = v.character()
    for i, ch in enumerate(chars):
        if _same_character(ch, c):
            return i
    raise NumericalError("component character matches no known irreducible")


def fusion_table(Q: FiniteQuantumGroup) -> FusionTable:
    irr = irreducibles(Q)
    chars = [v.character() for v in irr]
    s = len(irr)
    N = np.zeros((s, s, s), dtype=int)
    for a in range(s):
        for b in range(s):
            dec = decompose_corep(Q, tensor_corep(irr[a], irr[b]))
            for v, m in zip(dec.irreducibles, dec.multiplicities):
                N[a, b, _match(Q, chars, v)] += m
    return FusionTable(irr, N)
