"""Rank, nullspace and solves over exact Gaussian rationals or floats.

Exact routines do plain Gaussian elimination on Python lists and skip zero
entries, which keeps the sparse 0/1 matrices of group-type data cheap.  Float
routines are SVD based with the global tolerance.
"""
from __future__ import annotations

import numpy as np

from .scalars import (
    ONE,
    ZERO,
    get_tolerance,
    is_exact_array,
    to_float_array,
    zeros,
)


class LinAlgError(ArithmeticError):
    pass


def _rows(M):
    return [list(r) for r in M]


def rref(M):
    """Exact reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    A = _rows(M)
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        prow = A[r]
        inv = ONE / prow[c]
        nz = [j for j in range(c, ncols) if prow[j]]
        for j in nz:
            prow[j] = prow[j] * inv
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if f:
                    row = A[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots


def _float_tol(M, tol):
    tol = get_tolerance() if tol is None else tol
    return tol


def rank(M, tol: float | None = None) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if is_exact_array(M):
        # eliminate on the thinner orientation
        if M.shape[0] > M.shape[1]:
            M = M.T
        return len(rref(M)[1])
    s = np.linalg.svd(to_float_array(M), compute_uv=False)
    return int(np.sum(s > _float_tol(M, tol) * max(1.0, s[0] if s.size else 1.0)))


def nullspace(M, tol: float | None = None):
    """Basis of ``{x : M x = 0}`` as the columns of the returned array."""
    M = np.asarray(M)
    n = M.shape[1]
    if is_exact_array(M):
        if M.shape[0] == 0:
            from .scalars import identity

            return identity(n, True)
        R, piv = rref(M)
        free = [c for c in range(n) if c not in set(piv)]
        out = zeros((n, len(free)), True)
        for k, f in enumerate(free):
            out[f, k] = ONE
            for i, p in enumerate(piv):
                if R[i][f]:
                    out[p, k] = -R[i][f]
        return out
    Mf = to_float_array(M)
    if Mf.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(Mf)
    t = _float_tol(M, tol) * max(1.0, s[0] if s.size else 1.0)
    r = int(np.sum(s > t))
    return vh[r:].conj().T.copy()


def solve(A, b, tol: float | None = None):
    """Solve ``A x = b`` (any consistent system); raises if inconsistent."""
    A = np.asarray(A)
    b = np.asarray(b)
    vec = b.ndim == 1
    B = b.reshape(b.shape[0], -1)
    if is_exact_array(A) and is_exact_array(B):
        n = A.shape[1]
        aug = np.concatenate([A, B], axis=1)
        R, piv = rref(aug)
        if any(p >= n for p in piv):
            raise LinAlgError("inconsistent linear system")
        X = zeros((n, B.shape[1]), True)
        for i, p in enumerate(piv):
            for k in range(B.shape[1]):
                X[p, k] = R[i][n + k]
        return X[:, 0] if vec else X
    Af, Bf = to_float_array(A), to_float_array(B)
    X, *_ = np.linalg.lstsq(Af, Bf, rcond=None)
    res = np.max(np.abs(Af @ X - Bf)) if Bf.size else 0.0
    tol = _float_tol(A, tol)
    if res > tol * max(1.0, float(np.max(np.abs(Bf))) if Bf.size else 1.0) * 10:
        raise LinAlgError(f"inconsistent linear system (residual {res:.3g})")
    return X[:, 0] if vec else X


def inverse(A):
    A = np.asarray(A)
    n = A.shape[0]
    if is_exact_array(A):
        from .scalars import identity

        X = solve(A, identity(n, True))
        if rank(A) != n:
            raise LinAlgError("singular matrix")
        return X
    return np.linalg.inv(to_float_array(A))


def matmul(A, B):
    """Matrix product; exact inputs use a zero-skipping loop."""
    if not (is_exact_array(A) or is_exact_array(B)):
        return np.asarray(A) @ np.asarray(B)
    if not is_exact_array(A) or not is_exact_array(B):
        return to_float_array(A) @ to_float_array(B)
    if A.ndim == 1:
        return matmul(A.reshape(1, -1), B)[0]
    vec = B.ndim == 1
    B2 = B.reshape(B.shape[0], -1)
    n, m = A.shape[0], B2.shape[1]
    brows = [[(j, v) for j, v in enumerate(B2[k]) if v] for k in range(B2.shape[0])]
    out = zeros((n, m), True)
    for i in range(n):
        acc = {}
        for k, a in enumerate(A[i]):
            if not a:
                continue
            for j, v in brows[k]:
                acc[j] = acc.get(j, ZERO) + a * v
        row = out[i]
        for j, v in acc.items():
            row[j] = v
    return out[:, 0] if vec else out


def orthonormal_columns(M, tol: float | None = None):
    """Orthonormal basis (float) of the column space of ``M``."""
    Mf = to_float_array(M)
    if Mf.size == 0:
        return Mf.reshape(Mf.shape[0], 0)
    u, s, _ = np.linalg.svd(Mf, full_matrices=False)
    t = _float_tol(M, tol) * max(1.0, s[0] if s.size else 1.0)
    return u[:, : int(np.sum(s > t))]


class Echelon:
    """Incrementally maintained echelon basis of sparse vectors.

    Vectors are dicts ``key -> coefficient``.  Each stored row is indexed by its
    heaviest key under ``weight``; reduction therefore terminates.  With
    ``track=True`` every row also carries the combination of inserted labels
    that produced it, which is what certificate extraction needs.
    """

    def __init__(self, weight=None, exact: bool = True, tol: float | None = None, track: bool = False):
        self.weight = weight if weight is not None else (lambda k: k)
        self.exact = exact
        self.tol = get_tolerance() if tol is None else tol
        self.track = track
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    def _zero(self, c) -> bool:
        return (not c) if self.exact else abs(c) <= self.tol

    def _clean(self, vec):
        return {k: v for k, v in vec.items() if not self._zero(v)}

    def reduce(self, vec: dict, combo: dict | None = None):
        vec = self._clean(vec)
        combo = dict(combo or {})
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                return vec, combo
            k = max(hits, key=self.weight)
            row, rcombo = self.rows[k]
            f = vec[k] / row[k]
            for kk, v in row.items():
                vec[kk] = vec.get(kk, 0) - f * v
                if self._zero(vec[kk]):
                    del vec[kk]
            vec.pop(k, None)
            if self.track:
                for lab, v in rcombo.items():
                    nv = combo.get(lab, 0) - f * v
                    if self._zero(nv):
                        combo.pop(lab, None)
                    else:
                        combo[lab] = nv
        # unreachable

    def add(self, vec: dict, label=None) -> bool:
        """Insert ``vec``; returns True if it enlarged the span."""
        start = {label: ONE if self.exact else 1.0} if self.track else None
        red, combo = self.reduce(vec, start)
        if not red:
            return False
        lead = max(red, key=self.weight)
        self.rows[lead] = (red, combo)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: dict):
        """Return a label combination equal to ``vec``, or None if outside the span."""
        red, combo = self.reduce(vec, {})
        if red:
            return None
        return {lab: -v for lab, v in combo.items()}

    def basis(self):
        return [self.rows[k][0] for k in sorted(self.rows, key=self.weight, reverse=True)]
