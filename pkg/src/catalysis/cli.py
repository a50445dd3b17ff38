"""Command-line front end.

Exit codes: 0 success (a legitimate NONE included), 1 verification failure,
2 malformed input, 3 precondition violated, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .errors import IndistinguishableEntropy, NotIncomparable, TooLarge
from .files import CertificateFile, FileFormatError, StatePair, fmt
from .majorization import (
    Comparability,
    compare,
    majorizes,
    nogo_check,
    verify_catalysis,
    verify_supercatalysis,
)
from .opmp import DEFAULT_CAP, chi_of, enumerate_opmps
from .oracle import DEFAULT_WORK_CAP, GridSpec, scan_catalysts, scan_supercatalysts
from .rational import (
    DEFAULT_MAX_PRECISION_BITS,
    EntropyInterval,
    Spectrum,
    entropy,
    make_spectrum,
    pad_pair,
    parse_rational,
    tensor,
    uniform,
)
from .supercat import find_supercatalyst, find_supercatalyst_to

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_CAP = 4

LABELS = {
    Comparability.SOURCE_TO_TARGET: "SOURCE→TARGET",
    Comparability.TARGET_TO_SOURCE: "TARGET→SOURCE",
    Comparability.EQUIVALENT: "EQUIVALENT",
    Comparability.INCOMPARABLE: "INCOMPARABLE",
}


class Precondition(Exception):
    pass


def approx(q: Fraction, places: int = 6) -> str:
    return f"≈{float(q):.{places}f}"


def show(q: Fraction) -> str:
    s = fmt(q)
    return s if q.denominator == 1 else f"{s} ({approx(q)})"


def show_spectrum(s: Spectrum) -> str:
    return "(" + ", ".join(fmt(v) for v in s) + ")"


def show_entropy(e: EntropyInterval, units: str) -> str:
    if units == "bits":
        e = e.to_bits()
    return f"{e} {units}"


def entropy_json(e: EntropyInterval, units: str) -> dict:
    if units == "bits":
        e = e.to_bits()
    return {"lower": str(e.lower), "upper": str(e.upper), "units": units}


def point_json(p) -> list[str]:
    return [fmt(x) for x in p]


def emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _require_incomparable(pair: StatePair) -> None:
    if compare(pair.psi, pair.phi) is not Comparability.INCOMPARABLE:
        raise Precondition("the pair is LOCC comparable; catalysis questions are trivial")


def _require_k(k: int) -> None:
    if k < 2:
        raise Precondition("--k must be at least 2")


# --------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    pair = StatePair.load(args.pair)
    cls = compare(pair.psi, pair.phi)
    a, b = pad_pair(pair.psi, pair.phi)
    rep = majorizes(a, b)
    lines = [f"psi = {show_spectrum(pair.psi)}", f"phi = {show_spectrum(pair.phi)}", LABELS[cls], "",
             "  m  psi prefix                phi prefix"]
    rows = []
    for m in range(1, a.dim + 1):
        x, y = rep.prefix_sums_source[m - 1], rep.prefix_sums_target[m - 1]
        rel = "=" if x == y else ("<" if x < y else ">")
        lines.append(f"{m:>3}  {show(x):<24}  {rel} {show(y)}")
        rows.append({"m": m, "psi": fmt(x), "phi": fmt(y), "relation": rel})
    payload = {"classification": LABELS[cls], "psi": point_json(pair.psi), "phi": point_json(pair.phi),
               "psi_to_phi": {"result": rep.result, "failing_index": rep.failing_index,
                              "tight_indices": list(rep.tight_indices)},
               "prefix_sums": rows}
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_find_catalyst(args) -> int:
    pair = StatePair.load(args.pair)
    _require_k(args.k)
    _require_incomparable(pair)
    cells = enumerate_opmps(pair.psi, pair.phi, args.k, cap=args.cap, coalesce=not args.atomic,
                            workers=args.workers)
    out = []
    lines = []
    for idx, o in enumerate(cells, 1):
        sample = o.sample_catalyst()
        entry = {"dim": o.dim, "vertices": [point_json(v) for v in o.vertices or []],
                 "sample_catalyst": point_json(sample),
                 "source_ordering": str(o.source_ordering), "target_ordering": str(o.target_ordering),
                 "fixed_prefixes": [m for m, _ in o.fixed_prefixes]}
        if args.k == 2:
            lo, hi = o.interval()
            entry["interval"] = [fmt(lo), fmt(hi)]
            head = f"OPMP {idx}: p in [{fmt(lo)}, {fmt(hi)}]  ({approx(lo)} .. {approx(hi)})"
        else:
            head = f"OPMP {idx}: dimension {o.dim}, {len(o.vertices or [])} vertices"
        lines.append(head)
        if args.k > 2:
            for v in o.vertices or []:
                lines.append("    vertex (" + ", ".join(fmt(x) for x in v) + ")")
        lines.append(f"    sample catalyst {show_spectrum(sample)}")
        out.append(entry)
    if not cells:
        lines.append(f"NONE FOUND at k={args.k}")
    emit(args, {"k": args.k, "opmps": out}, "\n".join(lines))
    return EXIT_OK


def _certificate_payload(psi, phi, chi, omega, delta: EntropyInterval, units: str) -> dict:
    shown = delta.to_bits() if units == "bits" else delta
    cert = CertificateFile(psi, phi, chi, omega, str(delta.lower), str(delta.upper))
    payload = cert.to_json()
    if units == "bits":
        payload["delta_bits"] = {"lower": str(shown.lower), "upper": str(shown.upper)}
    return payload


def cmd_find_supercatalyst(args) -> int:
    pair = StatePair.load(args.pair)
    _require_incomparable(pair)
    if args.require_final:
        try:
            omega = make_spectrum(parse_rational(x) for x in args.require_final.split(","))
        except ValueError as exc:
            raise FileFormatError(f"--require-final: {exc}") from exc
        if args.k is not None and args.k != omega.dim:
            raise Precondition(f"--require-final has {omega.dim} entries but --k is {args.k}")
        k = omega.dim
        _require_k(k)
        cert = find_supercatalyst_to(pair.psi, pair.phi, omega)
    else:
        k = 2 if args.k is None else args.k
        _require_k(k)
        cert = find_supercatalyst(pair.psi, pair.phi, k, maximize=args.maximize, cap=args.cap,
                                  cross=not args.no_cross)
    if cert is None:
        lines = [f"NONE at k={k}"]
        payload = {"k": k, "certificate": None}
        if pair.psi.dim == pair.phi.dim:
            ng = nogo_check(pair.psi, pair.phi)
            forbidden = (k == 2 and ng.forbids_2x2) or (k == 3 and ng.forbids_3x3)
            if forbidden:
                lines.append(f"no-go: {ng.reason}")
                payload["nogo_reason"] = ng.reason
        emit(args, payload, "\n".join(lines))
        return EXIT_OK
    payload = _certificate_payload(pair.psi, pair.phi, cert.chi, cert.omega, cert.delta, args.units)
    lines = [f"chi   = {show_spectrum(cert.chi)}",
             f"omega = {show_spectrum(cert.omega)}",
             f"delta = E(omega) - E(chi) in {show_entropy(cert.delta, args.units)}",
             "verified: psi ⊗ chi ≺ phi ⊗ omega and E(omega) > E(chi)"]
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = CertificateFile.load(args.certificate)
    if cert.chi.dim != cert.omega.dim:
        raise Precondition("chi and omega must have the same dimension")
    reason = None
    try:
        res = verify_supercatalysis(cert.psi, cert.phi, cert.chi, cert.omega, args.precision_bits)
        ok = res.valid
        if not ok:
            reason = res.reason
            rep = res.report
    except IndistinguishableEntropy:
        ok = False
        reason = f"entropies not separated within {args.precision_bits} bits"
        rep = None
    if not ok and cert.omega == uniform(cert.omega.dim):
        reason += "; omega is maximally entangled, which no supercatalysis can reach"
    payload = {"result": "PASS" if ok else "FAIL", "reason": reason or "ok"}
    if not ok and rep is not None and rep.failing_index is not None:
        m = rep.failing_index
        payload["failing_index"] = m
        payload["prefix_sums"] = {"source": fmt(rep.prefix_sums_source[m - 1]),
                                  "target": fmt(rep.prefix_sums_target[m - 1])}
    if ok:
        delta = entropy(cert.omega) - entropy(cert.chi)
        payload["delta"] = entropy_json(delta, args.units)
        text = f"PASS  delta in {show_entropy(delta, args.units)}"
    else:
        text = f"FAIL  {reason}"
        if "failing_index" in payload:
            ps = payload["prefix_sums"]
            text += f"\n  prefix m={payload['failing_index']}: psi⊗chi {ps['source']} > phi⊗omega {ps['target']}"
    emit(args, payload, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    pair = StatePair.load(args.pair)
    grid = GridSpec(args.k, args.grid_resolution)
    if args.mode == "catalyst":
        pts = scan_catalysts(pair.psi, pair.phi, grid, args.work_cap)
        payload = {"mode": "catalyst", "k": args.k, "resolution": args.grid_resolution, "count": len(pts),
                   "points": [point_json(p) for p in pts]}
        lines = [f"{len(pts)} catalytic grid points (k={args.k}, r={args.grid_resolution})"]
        if pts:
            lines.append("min (" + ", ".join(show(x) for x in min(pts)) + ")")
            lines.append("max (" + ", ".join(show(x) for x in max(pts)) + ")")
    else:
        pairs = scan_supercatalysts(pair.psi, pair.phi, grid, args.work_cap, workers=args.workers)
        payload = {"mode": "supercatalyst", "k": args.k, "resolution": args.grid_resolution, "count": len(pairs),
                   "pairs": [{"initial": point_json(p), "final": point_json(q)} for p, q in pairs]}
        lines = [f"{len(pairs)} supercatalytic grid pairs (k={args.k}, r={args.grid_resolution})"]
        if pairs:
            best = max(pairs, key=lambda pq: (float(entropy(chi_of(pq[1])).midpoint)
                                              - float(entropy(chi_of(pq[0])).midpoint)))
            lines.append("largest gain: chi " + show_spectrum(chi_of(best[0]))
                         + " -> omega " + show_spectrum(chi_of(best[1])))
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def scenario_steps():
    """The two-step limited-resource story, as (description, expected, actual) triples."""
    s = make_spectrum
    psi = s(["0.4", "0.4", "0.1", "0.1"])
    phi1 = s(["0.5", "0.25", "0.25", "0"])
    phi2 = s(["0.48", "0.27", "0.25", "0"])
    chi = s(["0.625", "0.375"])
    omega = s(["8/13", "5/13"])
    inc = Comparability.INCOMPARABLE
    steps = [
        ("psi, phi1 incomparable", True, compare(psi, phi1) is inc),
        ("psi, phi2 incomparable", True, compare(psi, phi2) is inc),
        ("psi⊗psi, phi1⊗phi2 incomparable", True, compare(tensor(psi, psi), tensor(phi1, phi2)) is inc),
        ("chi catalyzes psi -> phi1", True, verify_catalysis(psi, phi1, chi).result),
        ("chi catalyzes psi -> phi2", False, verify_catalysis(psi, phi2, chi).result),
        ("step 1: psi⊗chi -> phi1⊗omega with E(omega) > E(chi)", True,
         verify_supercatalysis(psi, phi1, chi, omega).valid),
        ("step 2: omega catalyzes psi -> phi2", True, verify_catalysis(psi, phi2, omega).result),
    ]
    return steps, (psi, phi1, phi2, chi, omega)


def cmd_scenario(args) -> int:
    steps, (psi, phi1, phi2, chi, omega) = scenario_steps()
    lines = [f"psi   = {show_spectrum(psi)}", f"phi1  = {show_spectrum(phi1)}", f"phi2  = {show_spectrum(phi2)}",
             f"chi   = {show_spectrum(chi)}", f"omega = {show_spectrum(omega)}", ""]
    ok = True
    out = []
    for desc, expected, actual in steps:
        good = expected == actual
        ok &= good
        lines.append(f"[{'ok' if good else 'FAIL'}] {desc}: {'yes' if actual else 'no'}")
        out.append({"step": desc, "expected": expected, "actual": actual})
    delta = entropy(omega) - entropy(chi)
    lines.append(f"entropy gain of the auxiliary state: {show_entropy(delta, args.units)}")
    emit(args, {"steps": out, "delta": entropy_json(delta, args.units), "result": "PASS" if ok else "FAIL"},
         "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--precision-bits", type=int, default=DEFAULT_MAX_PRECISION_BITS,
                        help="cap on working precision for entropy comparisons")
    common.add_argument("--units", choices=("nats", "bits"), default="nats", help="entropy display units")

    parser = argparse.ArgumentParser(prog="catalysis", description="Exact entanglement catalysis toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="classify a state pair under majorization")
    p.add_argument("pair")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find-catalyst", parents=[common], help="list the OPMPs of a pair")
    p.add_argument("pair")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest allowed n*k")
    p.add_argument("--atomic", action="store_true", help="split cells at every ordering change")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_find_catalyst)

    p = sub.add_parser("find-supercatalyst", parents=[common], help="search for a supercatalysis certificate")
    p.add_argument("pair")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--maximize", action="store_true", help="return the largest gain found")
    p.add_argument("--require-final", metavar="Q1,Q2,...", help="prescribed final auxiliary state")
    p.add_argument("--no-cross", action="store_true", help="only search inside single OPMPs")
    p.set_defaults(func=cmd_find_supercatalyst)

    p = sub.add_parser("verify", parents=[common], help="re-verify a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[common], help="brute-force exact grid scan")
    p.add_argument("pair")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--grid-resolution", type=int, default=100)
    p.add_argument("--mode", choices=("catalyst", "supercatalyst"), default="catalyst")
    p.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scenario", parents=[common], help="replay the two-step limited-resource scenario")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Precondition, NotIncomparable) as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except TooLarge as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
