"""Tracial states, the trace-kernel ideal J and the canonical Kac quotient.

For a finite quantum group the algebra carries a faithful family of traces,
so J = {0} and the Kac quotient is the identity.  For presented algebras the
ideal is built from trace-zero certificates for ``g* g``: such a certificate
forces ``tau(g* g) = 0`` for every tracial state, hence ``g`` lies in J.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgElement, BlockAlgebra, Functional, LinearMapRep, verify_star_homomorphism
from .errors import CertificateError, NumericalError, StructureError
from .hopf.quantum_group import FiniteQuantumGroup, _invariance_system, haar_state, is_kac
from .linalg import matmul
from .presented import (
    CommutatorSearch,
    Presentation,
    default_functional,
    hopf_descent_check,
    is_faithful_on_degree,
    quotient_map,
    quotient_presentation,
    trace_zero_certificate,
    verify_trace,
)
from .presented.quotient import _ideal_polys
from .presented.rewriting import pmul, pstar
from .scalars import ONE, ZERO, array_is_zero, arrays_equal, exact, exact_from_float, get_tolerance, to_float_array


class TraceDescriptor:
    """Tracial state ``sum_k w_k tr_k / n_k`` on a block algebra.

    Every tracial state of ``M_{n_1} + ... + M_{n_K}`` has this form.  When a
    Wedderburn decomposition is attached, :meth:`functional` returns the state
    in the carrier coordinates of the decomposed algebra.
    """

    def __init__(self, parent: BlockAlgebra, weights, decomposition=None):
        if len(weights) != len(parent.block_dims):
            raise StructureError(f"expected {len(parent.block_dims)} block weights, got {len(weights)}")
        # exact when the blocks are, or when every attached block trace is exact and no weight is a float
        self.exact = parent.exact or (
            decomposition is not None and all(t.exact for t in decomposition.block_traces)
            and not any(isinstance(x, (float, complex, np.floating, np.complexfloating)) for x in weights))
        if self.exact:
            w = [exact(x) for x in weights]
            if any(x.im or x.re < 0 for x in w):
                raise StructureError("block weights must be nonnegative reals")
            if sum(w, ZERO) != ONE:
                raise StructureError("block weights must sum to 1")
        else:
            w = [complex(x).real for x in weights]
            if min(w) < 0 or abs(sum(w) - 1) > 1e-12:
                raise StructureError("block weights must be nonnegative and sum to 1")
        self.parent = parent
        self.weights = w
        self.decomposition = decomposition

    @classmethod
    def uniform(cls, parent: BlockAlgebra, decomposition=None) -> "TraceDescriptor":
        K = len(parent.block_dims)
        return cls(parent, [ONE / K] * K, decomposition)

    @classmethod
    def for_quantum_group(cls, Q: FiniteQuantumGroup, weights=None) -> "TraceDescriptor":
        dec = Q.decomposition()
        if weights is None:
            return cls.uniform(dec.blocks, dec)
        return cls(dec.blocks, weights, dec)

    @property
    def faithful(self) -> bool:
        return all(x != 0 for x in self.weights)

    def __call__(self, x: AlgElement):
        acc = ZERO if self.parent.exact else 0.0
        for w, n, b in zip(self.weights, self.parent.block_dims, x.blocks):
            if w:
                w = w if self.parent.exact else complex(w).real
                acc = acc + w * sum(b[i, i] for i in range(n)) / n
        return acc

    def functional(self) -> Functional:
        """The state as a :class:`Functional` on the carrier (or on the matrix-unit basis)."""
        if self.decomposition is not None:
            traces = self.decomposition.block_traces
            acc = None
            for w, t in zip(self.weights, traces):
                if self.exact:
                    term = t.coeffs * w
                else:
                    term = to_float_array(t.coeffs) * complex(w).real
                acc = term if acc is None else acc + term
            return Functional(self.decomposition.source, acc)
        S = self.parent.structure()
        coeffs = np.array([ZERO if self.parent.exact else 0.0] * S.dim, dtype=object if self.parent.exact else float)
        for w, n, off in zip(self.weights, self.parent.block_dims, self.parent.offsets):
            for i in range(n):
                coeffs[off + i * n + i] = w / n
        return Functional(S, coeffs)

    def __repr__(self):
        return f"TraceDescriptor({list(self.parent.block_dims)}, weights={[str(w) for w in self.weights]})"


def convolve(phi: Functional, psi: Functional, Q: FiniteQuantumGroup) -> Functional:
    """``(phi * psi)(x) = (phi (x) psi)(Delta x)``."""
    for f in (phi, psi):
        if not isinstance(f, Functional) or f.parent.dim != Q.dim:
            raise StructureError("convolution needs two functionals on the quantum group's algebra")
    return Functional(Q.structure, Q.convolve(phi, psi))


# trace-kernel ideal ----------------------------------------------------------------

@dataclass
class TraceKernelIdeal:
    """``J = {b : tau(b* b) = 0 for all traces tau}``: a sum of blocks."""

    parent: BlockAlgebra
    blocks: list
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.blocks


def trace_kernel_ideal(A: BlockAlgebra, traces=None) -> TraceKernelIdeal:
    """The ideal killed by ``b -> tau(b* b)`` for every trace in ``traces``.

    ``traces=None`` uses all block traces (so J = {0}); an empty list means no
    tracial state is available and J is the whole algebra.  Each trace is a
    :class:`TraceDescriptor` or any callable on :class:`AlgElement`.
    """
    if traces is None:
        traces = []
        for k in range(len(A.block_dims)):
            w = [ONE if j == k else ZERO for j in range(len(A.block_dims))] if A.exact else \
                [1.0 if j == k else 0.0 for j in range(len(A.block_dims))]
            traces.append(TraceDescriptor(A, w))
    tol = get_tolerance()
    blocks, basis = [], []
    for k, n in enumerate(A.block_dims):
        killed = True
        for i in range(n):
            for j in range(n):
                b = A.matrix_unit(k, i, j)
                bb = b.star() * b
                if any(abs(complex(t(bb))) > tol for t in traces):
                    killed = False
                    break
            if not killed:
                break
        if killed:
            blocks.append(k)
            basis.extend(A.matrix_unit(k, i, j) for i in range(n) for j in range(n))
    return TraceKernelIdeal(A, blocks, basis)


# iterative Haar ---------------------------------------------------------------------

def _periodic_limit(Q, seed_coeffs, max_exact: int):
    """Exact convolution powers; the Cesaro limit if they become periodic early."""
    powers = [seed_coeffs]
    for _ in range(max_exact):
        nxt = Q.convolve(powers[-1], seed_coeffs)
        for m, prev in enumerate(powers):
            if arrays_equal(prev, nxt, None):
                cycle = powers[m:]
                acc = cycle[0]
                for c in cycle[1:]:
                    acc = acc + c
                return acc / len(cycle), len(powers)
        powers.append(nxt)
    return None, len(powers)


def iterative_haar(Q: FiniteQuantumGroup, seed: TraceDescriptor | None = None, tol: float = 1e-12,
                   max_steps: int = 10_000, return_info: bool = False):
    """Haar state as the limit of convolution powers of a faithful tracial state.

    Exact mode first looks for exact eventual periodicity of ``seed^{*n}``
    (then the Cesaro mean is the average over one period).  Otherwise the
    powers are squared in floating point, ``sigma <- sigma * sigma``, until
    the increment drops below ``tol``; ``max_steps`` bounds the convolution
    power reached.  An exact quantum group gets the rationalized limit,
    accepted only if it satisfies the invariance equations exactly.
    """
    if seed is None:
        seed = TraceDescriptor.for_quantum_group(Q)
    if not seed.faithful:
        raise StructureError("iterative_haar needs a faithful seed (all block weights positive)")
    s = seed.functional()
    if s.parent.dim != Q.dim:
        raise StructureError("seed is not a state on this quantum group")
    info = {"method": None, "power": 1, "increment": None, "exact": False}
    if Q.exact and s.exact:
        lim, n = _periodic_limit(Q, s.coeffs, max_exact=min(8, max_steps))
        if lim is not None:
            info.update(method="periodic", power=n, increment=0.0, exact=True)
            h = Functional(Q.structure, lim)
            return (h, info) if return_info else h
    Qf = Q.to_float()
    sigma = to_float_array(s.coeffs)
    power, diff, steps = 1, np.inf, 0
    while power * 2 <= max_steps:
        nxt = Qf.convolve(sigma, sigma)
        diff = float(np.max(np.abs(nxt - sigma)))
        sigma, power, steps = nxt, power * 2, steps + 1
        if diff < tol:
            break
    if diff >= tol:
        raise NumericalError(f"convolution powers did not converge within power {power} (increment {diff:.3g})")
    info.update(method="squaring", power=power, squarings=steps, increment=diff)
    if Q.exact:
        cand = np.array([exact_from_float(v, 10**6) for v in sigma], dtype=object)
        if array_is_zero(matmul(_invariance_system(Q), cand)):
            info["exact"] = True
            h = Functional(Q.structure, cand)
            return (h, info) if return_info else h
    h = Functional(Q.structure, sigma)
    return (h, info) if return_info else h


# Kac quotient -----------------------------------------------------------------------

@dataclass
class KacQuotientResult:
    """The quotient, the map ``pi`` and the evidence that ``Delta`` descends."""

    source: object
    quotient: object
    pi: object
    kac_type: bool
    quotient_blocks: list
    descent_verified_to_degree: int | None
    identity: bool
    ideal_generators: list = field(default_factory=list)
    certificates: dict = field(default_factory=dict)
    rejected: dict = field(default_factory=dict)
    descent: object = None
    trace_report: object = None

    def to_json(self) -> dict:
        doc = {
            "kac_type": bool(self.kac_type),
            "quotient_blocks": list(self.quotient_blocks),
            "descent_verified_to_degree": self.descent_verified_to_degree,
            "identity": self.identity,
        }
        if isinstance(self.source, Presentation):
            P = self.source
            doc["ideal_generators"] = [
                [[str(c), list(w)] for w, c in sorted(p.items())] for p in self.ideal_generators]
            doc["certificates"] = {g: c.to_json() for g, c in sorted(self.certificates.items())}
            doc["rejected"] = dict(sorted(self.rejected.items()))
            doc["presentation"] = P.name
        return doc


def kac_quotient(Q, ideal=None, trace=None, cap: int = 6) -> KacQuotientResult:
    """Canonical Kac quotient of a finite quantum group or a presented Hopf *-algebra.

    Finite input: the algebra has a faithful trace, so the result is ``Q``
    itself with ``pi = id``.  Presented input: ``ideal`` lists candidate
    generators (names, words or polynomials); ``None`` tries every generator.
    A candidate ``g`` is kept only with a trace-zero certificate for ``g* g``
    and is rejected outright if ``trace`` (or the presentation's attached
    trace) is nonzero on ``g* g``.  A trace that is faithful on normal words
    of degree ``<= cap // 2`` rejects every candidate.  Raises
    :class:`CertificateError` if an explicitly supplied candidate has no
    certificate or if the comultiplication does not descend at the cap.
    """
    if isinstance(Q, FiniteQuantumGroup):
        return _kac_finite(Q)
    if isinstance(Q, Presentation):
        return _kac_presented(Q, ideal, trace, cap)
    raise StructureError(f"kac_quotient expects a FiniteQuantumGroup or a Presentation, got {type(Q).__name__}")


def _kac_finite(Q: FiniteQuantumGroup) -> KacQuotientResult:
    haar_state(Q)
    J = trace_kernel_ideal(Q.algebra)
    if not J.is_zero:
        raise StructureError("a finite-dimensional C*-algebra cannot have a nonzero trace kernel")
    pi = LinearMapRep.identity(Q.structure)
    rep = verify_star_homomorphism(pi)
    if not rep.ok:
        raise StructureError("identity map failed the *-homomorphism check")
    kac = is_kac(Q)["kac"]
    return KacQuotientResult(Q, Q, pi, kac, list(Q.algebra.block_dims), None, True)


def _kac_presented(P: Presentation, ideal, trace, cap: int) -> KacQuotientResult:
    if P.hopf is None:
        raise StructureError(f"presentation {P.name!r} carries no Hopf data")
    phi = trace if trace is not None else getattr(P, "trace", None)
    explicit = ideal is not None
    if explicit:
        candidates = _ideal_polys(P, ideal)
    else:
        seen, candidates = set(), []
        for g in P.generators:
            if P.involution[g] not in seen:
                seen.add(g)
                candidates.append({(g,): P.one})
    faithful = phi is not None and is_faithful_on_degree(P, phi, max(cap // 2, 1))
    tol = get_tolerance()
    kept, certs, rejected = [], {}, {}
    search = CommutatorSearch(P)
    for p in candidates:
        if not P.nf(p):
            continue
        label = " + ".join(" ".join(w) or "1" for w in sorted(p))
        gg = P.nf(pmul(pstar(p, P.involution), p, P.exact))
        if phi is not None:
            v = phi.on(P, gg)
            if abs(complex(v)) > tol:
                rejected[label] = "faithful trace is positive on g* g" if faithful else "trace is nonzero on g* g"
                continue
        cert = trace_zero_certificate(P, gg, cap, search)
        if cert is None:
            if explicit:
                raise CertificateError(f"no trace-zero certificate for ({label})* ({label}) up to cap {cap}")
            continue
        kept.append(p)
        certs[label] = cert
    if explicit and rejected:
        raise CertificateError(f"candidate generators rejected by the supplied trace: {sorted(rejected)}")
    Qp = quotient_presentation(P, kept, cap)
    descent = hopf_descent_check(P, P.hopf, kept, cap, quotient=Qp)
    if not descent.ok:
        raise CertificateError(f"comultiplication does not descend modulo the candidate ideal at cap {cap}: "
                               f"{sorted(descent.residuals)}")
    if not kept and phi is not None:
        Qp.trace = phi
    tr = verify_trace(Qp, default_functional(Qp), cap)
    return KacQuotientResult(P, Qp, quotient_map(P, Qp), tr.ok, Qp.normal_word_counts(cap), cap, not kept,
                             ideal_generators=kept, certificates=certs, rejected=rejected, descent=descent,
                             trace_report=tr)
