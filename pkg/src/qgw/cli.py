"""Command-line front end: ``qgw <subcommand> [options]``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on input or
I/O errors (with a location-bearing diagnostic on stderr).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .corep import (HankelWindow, decompose_corep, fusion_table, hankel_ap_test, matrix_element_span,
                    regular_corep)
from .errors import CertificateError, QGWError, StructureError
from .hopf import (FiniteGroupTable, counit_projection, dual, function_algebra, group_algebra, group_by_name,
                   haar_state, is_kac, verify_density_gest, verify_hopf_axioms)
from .hopf.groups import corpus
from .kac import iterative_haar, kac_quotient
from .presented import (BUILTINS, Presentation, hopf_descent_check, quotient_presentation, trace_zero_certificate,
                        verify_trace)
from .report import ReportIOError, build_report, emit_report, summary_lines
from .scalars import tolerance, to_float_array

DEFAULT_CAP = 6
KINDS = ("function", "group")


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    cap: int = DEFAULT_CAP
    mode: str = "exact"
    tol: float | None = None
    out: str | None = None
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cap < 1:
            raise StructureError("--cap must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise StructureError("--tol must be positive")
        if self.mode not in ("exact", "float"):
            raise StructureError("--mode must be 'exact' or 'float'")

    def echo(self) -> dict:
        doc = asdict(self)
        doc.pop("out")
        return doc


def default_cap() -> int:
    env = os.environ.get("QGW_DEFAULT_CAP")
    if env is None:
        return DEFAULT_CAP
    try:
        return int(env)
    except ValueError:
        raise StructureError(f"QGW_DEFAULT_CAP: expected an integer, got {env!r}") from None


# input resolution -------------------------------------------------------------------

def _data_file(kind: str, name: str):
    base = resources.files("qgw") / "data" / kind
    for cand in (name, f"{name}.json", f"{name.lower()}.json"):
        p = base / cand
        if p.is_file():
            return Path(str(p))
    return None


def load_group(spec: str) -> FiniteGroupTable:
    """A path to a group JSON file, a shipped data file name, or a corpus name."""
    p = Path(spec)
    if not p.is_file():
        p = _data_file("groups", spec)
    if p is not None and p.is_file():
        try:
            return FiniteGroupTable.load(p)
        except StructureError as exc:
            msg = str(exc)
            raise StructureError(msg if msg.startswith(str(p)) else f"{p}: {msg}") from None
    try:
        return group_by_name(spec)
    except StructureError:
        raise StructureError(f"{spec}: no such file, shipped group or corpus name") from None


def load_presentation(spec: str) -> Presentation:
    p = Path(spec)
    if p.is_file():
        return Presentation.load(p)
    if spec in BUILTINS:
        return BUILTINS[spec]()
    d = _data_file("presentations", spec)
    if d is not None:
        return Presentation.load(d)
    raise StructureError(f"{spec}: no such file or built-in presentation (built-ins: {sorted(BUILTINS)})")


def load_window(spec: str) -> HankelWindow:
    p = Path(spec)
    if not p.is_file():
        d = _data_file("windows", spec)
        if d is None:
            raise StructureError(f"{spec}: no such file or shipped window")
        p = d
    return HankelWindow.load(p)


def quantum_group(G: FiniteGroupTable, kind: str, mode: str):
    Q = function_algebra(G) if kind == "function" else group_algebra(G)
    return Q.to_float() if mode == "float" else Q


def _word(text: str, P: Presentation):
    w = tuple(text.split()) if text.strip() not in ("", "1") else ()
    for g in w:
        if g not in P.generators:
            raise StructureError(f"unknown generator {g!r} in {text!r}; generators are {P.generators}")
    return w


# commands -----------------------------------------------------------------------------

def _kinds(cfg):
    k = cfg.options.get("kind", "both")
    return KINDS if k == "both" else (k,)


def cmd_check_hopf(cfg):
    G = load_group(cfg.inputs["group"])
    results, failures = {}, []
    for kind in _kinds(cfg):
        Q = quantum_group(G, kind, cfg.mode)
        rep = verify_hopf_axioms(Q)
        results[Q.name] = rep.to_dict()
        failures += [f"{Q.name}: {f}" for f in rep.failures]
    return results, failures


def _haar_entry(Q, seed):
    h = haar_state(Q)
    hi, info = iterative_haar(Q, return_info=True)
    diff = float(np.max(np.abs(to_float_array(h.coeffs) - to_float_array(hi.coeffs))))
    k = is_kac(Q)
    return {
        "haar": h.coeffs,
        "iterative_agrees": diff <= 1e-10,
        "iterative_difference": diff,
        "iterative_exact": info["exact"],
        "tracial": h.is_tracial(),
        "faithful": h.is_faithful(),
        "kac": k,
    }


def cmd_haar(cfg):
    G = load_group(cfg.inputs["group"])
    results, failures = {}, []
    for kind in _kinds(cfg):
        Q = quantum_group(G, kind, cfg.mode)
        e = _haar_entry(Q, cfg.seed)
        results[Q.name] = e
        if not e["iterative_agrees"]:
            failures.append(f"{Q.name}: iterative Haar differs by {e['iterative_difference']:.3g}")
        if not e["tracial"]:
            failures.append(f"{Q.name}: Haar state is not tracial")
    return results, failures


def cmd_dual(cfg):
    G = load_group(cfg.inputs["group"])
    results, failures = {}, []
    for kind in _kinds(cfg):
        Q = quantum_group(G, kind, cfg.mode)
        D = dual(Q)
        DD = dual(D)
        rep = verify_hopf_axioms(D)
        e = {
            "blocks": sorted(Q.algebra.block_dims),
            "dual_blocks": sorted(D.algebra.block_dims),
            "bidual_blocks": sorted(DD.algebra.block_dims),
            "dual_hopf_ok": rep.ok,
        }
        results[Q.name] = e
        if e["blocks"] != e["bidual_blocks"]:
            failures.append(f"{Q.name}: bidual changed the block multiset")
        if not rep.ok:
            failures.append(f"{Q.name}: dual fails Hopf checks {rep.failures}")
    return results, failures


def cmd_kac_quotient(cfg):
    failures = []
    if cfg.inputs.get("presentation"):
        P = load_presentation(cfg.inputs["presentation"])
        ideal = cfg.options.get("ideal") or None
        if ideal:
            ideal = [_word(t, P) if " " in t else t for t in ideal]
            for t in ideal:
                if isinstance(t, str) and t not in P.generators:
                    raise StructureError(f"--ideal: unknown generator {t!r}; generators are {P.generators}")
        try:
            res = kac_quotient(P, ideal=ideal, cap=cfg.cap)
        except CertificateError as exc:
            return {"error": str(exc)}, [str(exc)]
        doc = res.to_json()
        doc["descent"] = res.descent.to_json() if res.descent is not None else None
        doc["trace_check"] = res.trace_report.to_json() if res.trace_report is not None else None
        if not res.kac_type:
            failures.append("quotient's designated functional is not tracial")
        return {P.name: doc}, failures
    G = load_group(cfg.inputs["group"])
    results = {}
    for kind in _kinds(cfg):
        Q = quantum_group(G, kind, cfg.mode)
        res = kac_quotient(Q)
        results[Q.name] = res.to_json()
        if not res.kac_type:
            failures.append(f"{Q.name}: not of Kac type")
    return results, failures


def cmd_certify_trace_zero(cfg):
    P = load_presentation(cfg.inputs["presentation"])
    targets = cfg.options.get("target") or []
    if not targets:
        raise StructureError("certify-trace-zero needs at least one --target word")
    results, failures = {}, []
    for t in targets:
        w = _word(t, P)
        cert = trace_zero_certificate(P, {w: P.one}, cfg.cap)
        if cert is None:
            results[t] = {"found": False, "note": f"not found at cap {cfg.cap}"}
        else:
            doc = cert.to_json()
            doc["found"] = True
            doc["expression"] = str(cert)
            results[t] = doc
            if not cert.sound:
                failures.append(f"{t}: certificate residual is nonzero")
    return results, failures


def cmd_quotient(cfg):
    P = load_presentation(cfg.inputs["presentation"])
    ideal = cfg.options.get("ideal") or []
    gens = [t if t in P.generators else _word(t, P) for t in ideal]
    Q = quotient_presentation(P, gens, cfg.cap)
    doc = {
        "name": Q.name,
        "rules": len(Q.rules),
        "collapsed": Q.collapsed,
        "truncated": bool(getattr(Q, "truncated", False)),
        "normal_word_counts": Q.normal_word_counts(cfg.cap) if not Q.relation_level else None,
    }
    failures = []
    if P.hopf is not None and gens:
        d = hopf_descent_check(P, P.hopf, gens, cfg.cap, quotient=Q)
        doc["descent"] = d.to_json()
        if not d.ok:
            failures.append("comultiplication does not descend to the quotient")
    if cfg.options.get("check_trace") and not Q.relation_level:
        tr = verify_trace(Q, cap=cfg.cap)
        doc["trace_check"] = tr.to_json()
        if not tr.ok:
            failures.append("designated functional is not tracial on the quotient")
    return {P.name: doc}, failures


def cmd_corep_decompose(cfg):
    G = load_group(cfg.inputs["group"])
    results, failures = {}, []
    for kind in _kinds(cfg):
        Q = quantum_group(G, kind, cfg.mode)
        dec = decompose_corep(Q, regular_corep(Q), seed=cfg.seed)
        span = matrix_element_span(Q)
        results[Q.name] = {"components": dec.summary(), "matrix_element_span": {
            "dim": span.dim, "rank": span.rank, "full": span.full}}
        if not span.full:
            failures.append(f"{Q.name}: matrix elements span only {span.rank} of {span.dim} dimensions")
    return results, failures


def cmd_fusion(cfg):
    G = load_group(cfg.inputs["group"])
    results, failures = {}, []
    for kind in _kinds(cfg):
        Q = quantum_group(G, kind, cfg.mode)
        F = fusion_table(Q)
        doc = F.to_json()
        doc["associative"] = F.is_associative()
        doc["unit"] = F.has_unit()
        results[Q.name] = doc
        if not (doc["associative"] and doc["unit"]):
            failures.append(f"{Q.name}: fusion table is not associative with unit")
    return results, failures


def cmd_hankel(cfg):
    w = load_window(cfg.inputs["window"])
    r = hankel_ap_test(w)
    return {"window": {"radius": w.radius, "offset": w.offset}, "result": r.to_json()}, []


def _presented_sweep(cap):
    out, failures = {}, []
    P = BUILTINS["suq2"]()
    cert = trace_zero_certificate(P, {("gamma", "gamma*"): P.one}, cap)
    res = kac_quotient(P, ideal=["gamma"], cap=cap)
    counts = res.quotient_blocks
    out["SUq2"] = {"certificate": str(cert) if cert else None, "quotient_counts": counts,
                   "descent_ok": res.descent.ok}
    if cert is None or counts != [1] + [2] * cap:
        failures.append("SUq2: Kac quotient pipeline mismatch")
    T = BUILTINS["double_torus"]()
    tr = verify_trace(T, cap=cap)
    unit = trace_zero_certificate(T, {(): T.one}, min(cap, 4))
    out["double_torus"] = {"trace_ok": tr.ok, "pairs_checked": tr.pairs_checked, "unit_certificate": unit is not None}
    if not tr.ok or unit is not None:
        failures.append("double torus: trace check mismatch")
    return out, failures


def cmd_corpus_sweep(cfg):
    results, failures = {}, []
    for name, G in sorted(corpus().items()):
        for kind in KINDS:
            Q = quantum_group(G, kind, cfg.mode)
            rep = verify_hopf_axioms(Q)
            e = _haar_entry(Q, cfg.seed)
            p = counit_projection(Q)
            span = matrix_element_span(Q)
            F = fusion_table(Q)
            D = dual(Q)
            entry = {
                "hopf_ok": rep.ok,
                "blocks": sorted(Q.algebra.block_dims),
                "dual_blocks": sorted(D.algebra.block_dims),
                "haar_agrees": e["iterative_agrees"],
                "tracial": e["tracial"],
                "kac": e["kac"]["kac"],
                "density": verify_density_gest(Q, p),
                "span_full": span.full,
                "irrep_dims": sorted(F.dims),
                "fusion_ok": F.is_associative() and F.has_unit(),
            }
            results[Q.name] = entry
            bad = [k for k in ("hopf_ok", "haar_agrees", "tracial", "kac", "density", "span_full", "fusion_ok")
                   if not entry[k]]
            failures += [f"{Q.name}: {k}" for k in bad]
    pres, pf = _presented_sweep(cfg.cap)
    results["presented"] = pres
    failures += pf
    return results, failures


COMMANDS = {
    "check-hopf": cmd_check_hopf,
    "haar": cmd_haar,
    "dual": cmd_dual,
    "kac-quotient": cmd_kac_quotient,
    "certify-trace-zero": cmd_certify_trace_zero,
    "quotient": cmd_quotient,
    "corep-decompose": cmd_corep_decompose,
    "fusion": cmd_fusion,
    "hankel": cmd_hankel,
    "corpus-sweep": cmd_corpus_sweep,
}


def run_command(cfg: RunConfig):
    """Execute one subcommand.  Returns ``(exit_status, report)``."""
    tol = cfg.tol if cfg.tol is not None else None
    if tol is not None:
        with tolerance(tol):
            results, failures = COMMANDS[cfg.command](cfg)
    else:
        results, failures = COMMANDS[cfg.command](cfg)
    doc = build_report(cfg.command, cfg.echo(), results, failures)
    return (1 if failures else 0), doc


# argument parsing ------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="degree cap (default 6, or $QGW_DEFAULT_CAP)")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=None, help="float tolerance override")
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="qgw", description="Finite and presented quantum group checks.")
    ap.add_argument("--version", action="version", version=f"qgw {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def group_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--group", required=True, help="group JSON file, shipped name (s3) or corpus name (S3)")
        p.add_argument("--kind", choices=("function", "group", "both"), default="both",
                       help="C(G), C*(G) or both")
        return p

    group_cmd("check-hopf", "verify the Hopf *-algebra axioms")
    group_cmd("haar", "Haar state, iterative Haar cross-check and Kac type")
    group_cmd("dual", "dual and bidual block structure")
    group_cmd("corep-decompose", "decompose the regular corepresentation")
    group_cmd("fusion", "fusion table of the irreducible corepresentations")

    p = sub.add_parser("kac-quotient", parents=[common], help="canonical Kac quotient")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--group")
    src.add_argument("--presentation")
    p.add_argument("--kind", choices=("function", "group", "both"), default="both")
    p.add_argument("--ideal", action="append", help="ideal generator (name or space-separated word); repeatable")

    p = sub.add_parser("certify-trace-zero", parents=[common], help="search for a trace-zero certificate")
    p.add_argument("--presentation", required=True)
    p.add_argument("--target", action="append", help="word as space-separated generators ('1' for the unit)")

    p = sub.add_parser("quotient", parents=[common], help="quotient presentation by an ideal")
    p.add_argument("--presentation", required=True)
    p.add_argument("--ideal", action="append")
    p.add_argument("--check-trace", action="store_true", dest="check_trace")

    p = sub.add_parser("hankel", parents=[common], help="windowed almost-periodicity test")
    p.add_argument("--window", required=True)

    sub.add_parser("corpus-sweep", parents=[common], help="run every check on the shipped corpus")
    return ap


_INPUT_KEYS = ("group", "presentation", "window")


def config_from_args(ns) -> RunConfig:
    inputs = {k: getattr(ns, k) for k in _INPUT_KEYS if getattr(ns, k, None) is not None}
    options = {k: v for k, v in vars(ns).items()
               if k not in _INPUT_KEYS + ("command", "cap", "mode", "tol", "out", "seed") and v is not None}
    cap = ns.cap if ns.cap is not None else default_cap()
    return RunConfig(ns.command, inputs, cap, ns.mode, ns.tol, ns.out, ns.seed, options)


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        status, doc = run_command(cfg)
        text = emit_report(doc, cfg.out)
    except (StructureError, ReportIOError, FileNotFoundError) as exc:
        print(f"qgw: error: {exc}", file=sys.stderr)
        return 2
    except QGWError as exc:
        print(f"qgw: check failed: {exc}", file=sys.stderr)
        return 1
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        print("\n".join(summary_lines(doc)))
    return status


if __name__ == "__main__":
    sys.exit(main())
