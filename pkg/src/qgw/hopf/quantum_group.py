"""Finite quantum groups: Hopf *-algebra data on a structure algebra.

A :class:`FiniteQuantumGroup` stores everything in a fixed carrier basis
``b_0, ..., b_{d-1}``:

* ``delta`` is the ``(d*d, d)`` matrix of the comultiplication; column ``k`` is
  ``Delta(b_k)`` with ``b_i (x) b_j`` at row ``i * d + j``;
* ``counit`` is the vector ``(eps(b_k))_k``;
* ``antipode`` is the ``(d, d)`` matrix of the coinverse ``kappa``.

The block (Wedderburn) picture is computed lazily and exposed as ``algebra``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..algebra import BlockAlgebra, Functional, LinearMapRep, StructureAlgebra, verify_star_homomorphism
from ..errors import InvariantViolation, StructureError
from ..linalg import matmul, nullspace, rank
from ..scalars import (
    ONE,
    ZERO,
    arrays_equal,
    as_exact_array,
    get_tolerance,
    identity,
    is_exact_array,
    is_zero,
    max_abs,
    to_float_array,
    zeros,
)
from .groups import FiniteGroupTable


class FiniteQuantumGroup:
    def __init__(self, structure: StructureAlgebra, delta, counit, antipode, name: str = ""):
        d = structure.dim
        self.structure = structure
        ex = structure.exact
        conv = as_exact_array if ex else to_float_array
        self.delta = conv(np.asarray(delta))
        self.counit = conv(np.asarray(counit))
        self.antipode = conv(np.asarray(antipode))
        if self.delta.shape != (d * d, d):
            raise StructureError(f"comultiplication matrix has shape {self.delta.shape}, expected {(d * d, d)}")
        if self.counit.shape != (d,) or self.antipode.shape != (d, d):
            raise StructureError("counit/antipode shapes do not match the algebra dimension")
        self.name = name or structure.name

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def exact(self) -> bool:
        return self.structure.exact

    def __repr__(self):
        return f"FiniteQuantumGroup({self.name!r}, dim={self.dim}, blocks={list(self.algebra.block_dims)})"

    # derived views -----------------------------------------------------------
    def decomposition(self, seed: int = 0):
        return self.structure.decomposition(seed)

    @property
    def algebra(self) -> BlockAlgebra:
        return self.decomposition().blocks

    @cached_property
    def tensor_structure(self) -> StructureAlgebra:
        return self.structure.tensor(self.structure)

    @property
    def comultiplication(self) -> LinearMapRep:
        return LinearMapRep(self.structure, self.tensor_structure, self.delta, name="Delta")

    @property
    def counit_functional(self) -> Functional:
        return Functional(self.structure, self.counit)

    @property
    def coinverse(self) -> LinearMapRep:
        return LinearMapRep(self.structure, self.structure, self.antipode, name="kappa")

    def coproduct_matrix(self, k: int):
        """``Delta(b_k)`` as a ``(d, d)`` coefficient matrix."""
        return self.delta[:, k].reshape(self.dim, self.dim)

    def apply_delta(self, x):
        return matmul(self.delta, x).reshape(self.dim, self.dim)

    def convolve(self, phi, psi):
        """``(phi (x) psi) o Delta`` for coefficient vectors or Functionals."""
        a = phi.coeffs if isinstance(phi, Functional) else phi
        b = psi.coeffs if isinstance(psi, Functional) else psi
        if is_exact_array(a) and is_exact_array(b) and self.exact:
            outer = zeros(self.dim * self.dim, True)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            outer[i * self.dim + j] = x * y
            return matmul(outer.reshape(1, -1), self.delta)[0]
        return np.kron(to_float_array(a), to_float_array(b)) @ to_float_array(self.delta)

    def to_float(self) -> "FiniteQuantumGroup":
        if not self.exact:
            return self
        return FiniteQuantumGroup(self.structure.to_float(), to_float_array(self.delta),
                                  to_float_array(self.counit), to_float_array(self.antipode), name=self.name)


# constructors ------------------------------------------------------------------

def function_algebra(G: FiniteGroupTable) -> FiniteQuantumGroup:
    """``C(G)``: basis of point masses ``delta_g``; ``Delta(f)(g, h) = f(gh)``."""
    n = G.order
    prods = [[((i, ONE),) if i == j else () for j in range(n)] for i in range(n)]
    unit = np.array([ONE] * n, dtype=object)
    star = identity(n, True)
    A = StructureAlgebra(prods, unit, star, name=f"C({G.name})", exact=True)
    delta = zeros((n * n, n), True)
    for h in range(n):
        for k in range(n):
            delta[h * n + k, G.mul(h, k)] = ONE
    counit = zeros(n, True)
    counit[G.identity] = ONE
    kappa = zeros((n, n), True)
    for g in range(n):
        kappa[G.inverse[g], g] = ONE
    return FiniteQuantumGroup(A, delta, counit, kappa, name=f"C({G.name})")


def group_algebra(G: FiniteGroupTable) -> FiniteQuantumGroup:
    """``C*(G)``: basis of unitaries ``U_g``; ``Delta(U_g) = U_g (x) U_g``."""
    n = G.order
    prods = [[((G.mul(g, h), ONE),) for h in range(n)] for g in range(n)]
    unit = zeros(n, True)
    unit[G.identity] = ONE
    star = zeros((n, n), True)
    for g in range(n):
        star[G.inverse[g], g] = ONE
    A = StructureAlgebra(prods, unit, star, name=f"C*({G.name})", exact=True)
    delta = zeros((n * n, n), True)
    for g in range(n):
        delta[g * n + g, g] = ONE
    counit = np.array([ONE] * n, dtype=object)
    return FiniteQuantumGroup(A, delta, counit, star.copy(), name=f"C*({G.name})")


def dual(Q: FiniteQuantumGroup) -> FiniteQuantumGroup:
    """The dual quantum group on the dual vector space, in the dual basis ``f_i(b_j) = delta_ij``.

    The product is convolution ``f g = (f (x) g) o Delta``, the involution is
    ``f*(x) = conj(f(kappa(x)*))``, and ``Delta``, ``eps``, ``kappa`` are the
    transposes of multiplication, unit and ``kappa``.
    """
    A = Q.structure
    d = A.dim
    C = Q.delta.reshape(d, d, d)
    star = matmul(np.conj(A.star_matrix), Q.antipode).T.copy()
    B = StructureAlgebra.from_constants(C, Q.counit.copy(), star, name=f"dual({Q.name})")
    delta = A.constants.reshape(d * d, d).copy()
    return FiniteQuantumGroup(B, delta, A.unit.copy(), Q.antipode.T.copy(), name=f"dual({Q.name})")


# Hopf axioms -------------------------------------------------------------------

@dataclass
class HopfReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, witness=None):
        prev = self.checks.get(name, True)
        self.checks[name] = prev and passed
        if not passed:
            self.failures.append({"check": name, "witness": witness})

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failures": list(self.failures)}


def _flat_equal(a, b, tol):
    return arrays_equal(a.reshape(-1), b.reshape(-1), tol)


def verify_hopf_axioms(Q: FiniteQuantumGroup, tol: float | None = None, galois: bool = True) -> HopfReport:
    """Check the Hopf *-algebra axioms on the full carrier basis.

    Records coassociativity, both counit laws, both antipode laws, bijectivity
    of the two Galois maps, that ``Delta`` and ``eps`` are unital
    *-homomorphisms, that ``kappa`` is a unital anti-homomorphism, and that
    ``kappa(kappa(x)*)* = x``.  Exact data is checked exactly; float data
    within ``tol`` (default ``1e-10``).
    """
    tol = 1e-10 if tol is None else tol
    A = Q.structure
    d = A.dim
    D, K, eps = Q.delta, Q.antipode, Q.counit
    rep = HopfReport()
    Cflat = A.constants.reshape(d * d, d)
    Ts = [Q.coproduct_matrix(k) for k in range(d)]
    for k in range(d):
        T = Ts[k]
        left = matmul(D, T)  # (Delta (x) id) Delta
        right = matmul(T, D.T.copy())  # (id (x) Delta) Delta
        if not _flat_equal(left, right, tol):
            rep.record("coassociativity", False, {"basis": k, "defect": max_abs(
                to_float_array(left).reshape(-1) - to_float_array(right).reshape(-1))})
        else:
            rep.record("coassociativity", True)
        bk = A.basis(k)
        ok_l = _flat_equal(matmul(eps.reshape(1, -1), T)[0], bk, tol)
        rep.record("counit_left", ok_l, None if ok_l else {"basis": k})
        ok_r = _flat_equal(matmul(T, eps), bk, tol)
        rep.record("counit_right", ok_r, None if ok_r else {"basis": k})
        target = A.unit * eps[k]
        s_left = matmul(matmul(K, T).reshape(1, -1), Cflat)[0]
        ok = _flat_equal(s_left, target, tol)
        rep.record("antipode_left", ok, None if ok else {"basis": k})
        s_right = matmul(matmul(T, K.T.copy()).reshape(1, -1), Cflat)[0]
        ok = _flat_equal(s_right, target, tol)
        rep.record("antipode_right", ok, None if ok else {"basis": k})

    if galois:
        R = [A.right_matrix(A.basis(j)) for j in range(d)]
        L = [A.left_matrix(A.basis(i)) for i in range(d)]
        G1 = zeros((d * d, d * d), Q.exact)
        G2 = zeros((d * d, d * d), Q.exact)
        for i in range(d):
            for j in range(d):
                G1[:, i * d + j] = matmul(Ts[i], R[j].T.copy()).reshape(-1)
                G2[:, i * d + j] = matmul(L[i], Ts[j]).reshape(-1)
        r1 = rank(G1, tol) if not Q.exact else rank(G1)
        r2 = rank(G2, tol) if not Q.exact else rank(G2)
        rep.record("galois_left", r1 == d * d, None if r1 == d * d else {"rank": r1, "expected": d * d})
        rep.record("galois_right", r2 == d * d, None if r2 == d * d else {"rank": r2, "expected": d * d})

    hd = verify_star_homomorphism(Q.comultiplication, tol=tol)
    rep.record("delta_star_hom", hd.ok, None if hd.ok else hd.violations[:3])
    C1 = _scalars(Q.exact)
    he = verify_star_homomorphism(LinearMapRep(A, C1, eps.reshape(1, -1), name="eps"), tol=tol)
    rep.record("counit_character", he.ok, None if he.ok else he.violations[:3])
    hk = verify_star_homomorphism(Q.coinverse, anti=True, tol=tol)
    ok = hk.multiplicative and hk.unital
    rep.record("coinverse_anti_hom", ok, None if ok else hk.violations[:3])
    bad = []
    for k in range(d):
        x = A.basis(k)
        y = A.star(matmul(K, A.star(matmul(K, x))))
        if not arrays_equal(y, x, tol):
            bad.append(k)
    rep.record("coinverse_star_twist", not bad, {"basis": bad[:3]} if bad else None)
    return rep


def _scalars(exact_mode: bool) -> StructureAlgebra:
    one = ONE if exact_mode else 1.0
    u = zeros(1, exact_mode)
    u[0] = one
    s = zeros((1, 1), exact_mode)
    s[0, 0] = one
    return StructureAlgebra([[((0, one),)]], u, s, name="C", exact=exact_mode)


# Haar state --------------------------------------------------------------------

def _invariance_system(Q: FiniteQuantumGroup):
    d = Q.dim
    u = Q.structure.unit
    blocks = []
    for k in range(d):
        T = Q.coproduct_matrix(k)
        L = T.copy()
        R = T.T.copy()
        for i in range(d):
            if u[i]:
                L[i, k] = L[i, k] - u[i]
                R[i, k] = R[i, k] - u[i]
        blocks.append(L)
        blocks.append(R)
    return np.concatenate(blocks, axis=0)


def haar_state(Q: FiniteQuantumGroup, check_positive: bool = True) -> Functional:
    """The unique state ``h`` with ``(id (x) h) Delta(x) = h(x) 1 = (h (x) id) Delta(x)``."""
    N = nullspace(_invariance_system(Q), tol=1e-9)
    if N.shape[1] != 1:
        raise StructureError(f"invariant functionals form a space of dimension {N.shape[1]}, expected 1")
    h = N[:, 0]
    norm = sum((a * b for a, b in zip(h, Q.structure.unit)), ZERO if Q.exact else 0.0)
    if is_zero(norm, 1e-12):
        raise StructureError("invariant functional vanishes on the unit")
    h = h / norm
    phi = Functional(Q.structure, h)
    if check_positive and not phi.is_positive(1e-9):
        raise StructureError("invariant functional is not positive")
    return phi


# counit projection and density -------------------------------------------------

def counit_projection(Q: FiniteQuantumGroup):
    """The projection ``h`` with ``h a = a h = eps(a) h`` and ``eps(h) = 1`` (carrier coordinates)."""
    A = Q.structure
    d = A.dim
    rows = []
    for i in range(d):
        bi = A.basis(i)
        L = A.left_matrix(bi)
        R = A.right_matrix(bi)
        for M in (L, R):
            M = M.copy()
            for j in range(d):
                M[j, j] = M[j, j] - Q.counit[i]
            rows.append(M)
    N = nullspace(np.concatenate(rows, axis=0), tol=1e-9)
    if N.shape[1] != 1:
        raise StructureError(f"counit-supporting elements form a space of dimension {N.shape[1]}, expected 1")
    x = N[:, 0]
    e = sum((a * b for a, b in zip(Q.counit, x)), ZERO if Q.exact else 0.0)
    if is_zero(e, 1e-12):
        raise StructureError("counit vanishes on its supporting element")
    p = x / e
    tol = None if Q.exact else 1e-9
    if not arrays_equal(A.mul(p, p), p, tol) or not arrays_equal(A.star(p), p, tol):
        raise StructureError("counit-supporting element is not a projection")
    return p


def verify_density_gest(Q: FiniteQuantumGroup, p=None) -> bool:
    """Rank of ``omega -> (id (x) omega) Delta(h)`` equals ``dim Q``."""
    if p is None:
        p = counit_projection(Q)
    H = Q.apply_delta(p)
    return rank(H) == Q.dim


# Kac type ----------------------------------------------------------------------

def is_kac(Q: FiniteQuantumGroup, tol: float | None = None) -> dict:
    """Evaluate three equivalent Kac-type conditions and require that they agree."""
    tol = get_tolerance() if tol is None else tol
    K = Q.antipode
    involutive = arrays_equal(matmul(K, K), identity(Q.dim, Q.exact), None if Q.exact else tol)
    h = haar_state(Q)
    tracial = h.is_tracial(None if h.exact else tol)
    hd = haar_state(dual(Q))
    dual_tracial = hd.is_tracial(None if hd.exact else tol)
    items = {"kappa_involutive": bool(involutive), "haar_tracial": bool(tracial),
             "dual_haar_tracial": bool(dual_tracial)}
    vals = set(items.values())
    if len(vals) != 1:
        raise InvariantViolation(f"Kac-type conditions disagree: {items}")
    return {**items, "kac": vals.pop()}
