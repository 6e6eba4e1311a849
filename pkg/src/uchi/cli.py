"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 budget exceeded, 3 a consistency
verdict failed (main-theorem check, KW match, semicontinuity, parity, ...).
Data goes to stdout or ``--output``; timings go to a separate metadata
block (``--meta`` file, or one JSON line on stderr with ``--timing``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import centers
from .errors import BudgetExceeded, CertificationError, ExtensionFieldRequired, InputError, UchiError
from .liealg import JordanPair, jacobson_check, LiePresentation, from_json, make_catalog_algebra, validate_presentation, verify_jordan
from .representatives import representative, standard_sweep
from .uenv import DEFAULT_BUDGET, ReducedEnveloping, associativity_check

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3

CENTER_CSV = ["label", "p", "algebra", "dim_g", "rank", "dim_stab", "regular", "dim_center",
              "p_to_ell", "consistent", "elapsed_ms"]


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def load_algebra(args) -> LiePresentation:
    if args.algebra_file:
        try:
            text = Path(args.algebra_file).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.algebra_file}: {exc}") from exc
        g = from_json(text, name=Path(args.algebra_file).stem)
        if args.p is not None and args.p != g.p:
            raise InputError(f"--p {args.p} disagrees with the presentation file (p={g.p})")
        report = validate_presentation(g)
        if not report.passed:
            raise InputError("imported presentation fails validation:\n" + report.summary())
        return g
    if not args.algebra:
        raise InputError("one of --algebra or --algebra-file is required")
    if args.p is None:
        raise InputError("--p is required with a catalog algebra")
    return make_catalog_algebra(args.algebra, None, args.p)


def _form(g: LiePresentation, v, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (g.n,):
        raise InputError(f"{what} needs {g.n} coefficients, got {v.size}")
    return v % g.p


def parse_chi(spec: str, g: LiePresentation):
    """A LinearForm (array) or certified JordanPair from a name, inline JSON or a file."""
    text = spec.strip()
    if not text.startswith("{") and not text.startswith("[") and Path(text).is_file():
        text = Path(text).read_text().strip()
    if text.startswith("{") or text.startswith("["):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed character JSON: {exc}") from exc
        if isinstance(doc, list):
            return _form(g, doc, "chi")
        if "coeffs" in doc:
            return _form(g, doc["coeffs"], "chi")
        if "chi_s" in doc and "chi_n" in doc:
            jp = JordanPair.of(_form(g, doc["chi_s"], "chi_s"), _form(g, doc["chi_n"], "chi_n"))
            return verify_jordan(g, jp)
        raise InputError('character JSON needs "coeffs" or "chi_s" and "chi_n"')
    return representative(g, text)


def _chi_vector(g: LiePresentation, chi) -> np.ndarray:
    return chi.chi(g.p) if isinstance(chi, JordanPair) else chi


def parse_budget(text: str) -> int:
    try:
        if "^" in text:
            b, e = text.split("^")
            return int(b) ** int(e)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a budget: {text!r}") from None


def _center_kwargs(args) -> dict:
    return {"budget": args.budget, "method": args.method, "generators": args.generators,
            "reduce_torus": not args.no_reduce}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _center_rows(reports, timing: bool):
    for r in reports:
        d = r.to_dict()
        row = [d[k] for k in CENTER_CSV[:-1]]
        row.append(round(r.elapsed * 1000) if timing else "")
        yield [str(x).lower() if isinstance(x, bool) else x for x in row]


def render(kind: str, payload, fmt: str, timing: bool = False) -> str:
    """Deterministic text for a command's data payload."""
    if fmt == "json":
        if kind in ("center", "sweep"):
            doc = [r.to_dict() for r in payload]
            doc = doc[0] if kind == "center" else doc
        elif kind in ("census", "kw", "validate", "support", "tensor", "uenv"):
            doc = payload
        elif kind == "probe":
            doc = [r.to_dict() for r in payload]
        else:  # pragma: no cover
            raise ValueError(kind)
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "csv":
        raise InputError(f"unknown format {fmt!r}")
    if kind in ("center", "sweep"):
        return _csv(CENTER_CSV, _center_rows(payload, timing))
    if kind == "census":
        return _csv(["dim_stab", "count"], [[h["dim_stab"], h["count"]] for h in payload["histogram"]])
    if kind == "probe":
        rows = []
        for k, r in enumerate(payload):
            for t, d in r.points:
                rows.append([k, " ".join(map(str, r.chi0)), " ".join(map(str, r.psi)), t, d])
        return _csv(["line", "chi0", "psi", "t", "dim_center"], rows)
    if kind == "validate":
        return _csv(["axiom", "passed", "witness"],
                    [[a["axiom"], str(a["passed"]).lower(), a["witness"] or ""] for a in payload["axioms"]])
    if kind == "uenv":
        return _csv(["chi", "triples", "associative", "p_center"],
                    [[r["chi"], r["triples"], str(r["associative"]).lower(), str(r["p_center"]).lower()]
                     for r in payload["checks"]])
    if kind in ("kw", "support", "tensor"):
        doc = payload if isinstance(payload, list) else [payload]
        keys = list(doc[0])
        return _csv(keys, [[str(d[k]).lower() if isinstance(d[k], bool) else d[k] for k in keys]
                           for d in doc])
    raise ValueError(kind)  # pragma: no cover


def emit_report(kind: str, payload, fmt: str, path: str | None, timing: bool = False) -> None:
    text = render(kind, payload, fmt, timing)
    if path:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(g, args):
    report = validate_presentation(g)
    axioms = [{"axiom": r.name, "passed": r.passed,
               "witness": list(r.witness) if r.witness is not None else None}
              for r in report.results]
    if g.realization is not None and args.pairs:
        _, bad = jacobson_check(g, args.pairs, args.seed)
        axioms.append({"axiom": f"jacobson_vs_matrix({args.pairs} pairs)", "passed": bad is None,
                       "witness": [list(v) for v in bad] if bad else None})
    passed = all(a["passed"] for a in axioms)
    doc = {"algebra": g.name, "p": g.p, "dim": g.n, "rank": g.rank, "passed": passed,
           "axioms": axioms}
    if not passed:
        print(report.summary(), file=sys.stderr)
    return "validate", doc, True if passed else EXIT_INPUT


def cmd_uenv(g, args):
    rows = []
    for name in args.chi or ["zero"]:
        chi = _chi_vector(g, parse_chi(name, g))
        U = ReducedEnveloping(g, chi)
        _, bad = associativity_check(U, args.triples, args.seed)
        rel = U.p_center_relation_check()
        rows.append({"chi": name, "coeffs": [int(c) for c in chi], "triples": args.triples,
                     "associative": bad is None, "associativity_witness": list(bad) if bad else None,
                     "p_center": all(ok for *_, ok in rel),
                     "p_center_failures": [label for _, label, ok in rel if not ok]})
    doc = {"algebra": g.name, "p": g.p, "checks": rows}
    return "uenv", doc, all(r["associative"] and r["p_center"] for r in rows)


def cmd_center(g, args):
    chi = parse_chi(args.chi, g)
    rep = centers.center_report(g, _chi_vector(g, chi), args.chi, **_center_kwargs(args))
    return "center", [rep], rep.consistent and rep.lower_bound


def cmd_sweep(g, args):
    if args.reps == "standard":
        reps = standard_sweep(g)
    else:
        reps = [(name, parse_chi(name, g)) for name in args.reps.split(",")]
    res = centers.theorem_sweep(g, reps, threads=args.threads, **_center_kwargs(args))
    for label, exc in res.errors.items():
        print(f"error in representative {label}: {exc}", file=sys.stderr)
    for r in res.reports:
        if r.diagnostics:
            print(json.dumps({"inconsistent": r.label, **r.diagnostics}), file=sys.stderr)
    if res.errors and res.passed:
        codes = [EXIT_BUDGET if isinstance(e, BudgetExceeded) else EXIT_INPUT for e in res.errors.values()]
        return "sweep", res.reports, max(codes)
    return "sweep", res.reports, res.passed


def cmd_census(g, args):
    if args.exhaustive:
        rep = centers.census(g, "exhaustive")
    else:
        rep = centers.census(g, "random", count=args.samples, seed=args.seed)
    return "census", rep.to_dict(), rep.parity_ok


def cmd_probe(g, args):
    bases = args.chi0 or ["zero"]
    if args.psi:
        dirs = [_chi_vector(g, parse_chi(args.psi, g))]
    elif args.all_lines:
        dirs = centers.all_directions(g.n, g.p)
    else:
        dirs = centers.sample_directions(g.n, g.p, args.lines, args.seed)
    out = []
    kw = _center_kwargs(args)
    for b in bases:
        chi0 = _chi_vector(g, parse_chi(b, g))
        cache: dict = {}
        out.extend(centers.line_probe(g, chi0, psi, cache=cache, **kw) for psi in dirs)
    print(centers.SEMICONTINUITY_CAVEAT, file=sys.stderr)
    return "probe", out, all(r.holds for r in out)


def cmd_kw(g, args):
    chi = parse_chi(args.chi, g)
    if not isinstance(chi, JordanPair):
        chi = verify_jordan(g, JordanPair.of(chi, np.zeros(g.n, dtype=np.int64)))
    rep = centers.kw_check(g, chi, args.chi, **_center_kwargs(args))
    return "kw", rep.to_dict(), rep.passed


def cmd_support(g, args):
    chi = _chi_vector(g, parse_chi(args.chi, g))
    res = centers.support_lemma_check(g, chi, **_center_kwargs(args))
    doc = {"chi": [int(c) for c in chi], "dim_center": res.dim_chi,
           "dim_center_zeroed": res.dim_zeroed, "equal": res.equal}
    return "support", doc, res.equal


def cmd_tensor(g, args):
    parts = args.algebra.split("+") if args.algebra else []
    if len(parts) != 2:
        raise InputError("tensor needs --algebra A+B with exactly two catalog summands")
    g1, g2 = (make_catalog_algebra(s, None, args.p) for s in parts)
    chi = _chi_vector(g, parse_chi(args.chi, g))
    res = centers.tensor_factor_check(g1, g2, chi, **_center_kwargs(args))
    doc = {"algebra": g.name, "p": g.p, "chi": [int(c) for c in chi], "dim_center": res.dim_sum,
           "dim_center_1": res.dims[0], "dim_center_2": res.dims[1], "holds": res.holds}
    return "tensor", doc, res.holds


COMMANDS = {"validate": cmd_validate, "center": cmd_center, "sweep": cmd_sweep,
            "census": cmd_census, "probe": cmd_probe, "kw": cmd_kw,
            "support": cmd_support, "tensor": cmd_tensor, "uenv": cmd_uenv}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="catalog name, e.g. sl2, gl3, sp4, torus2, sl2+torus1")
    common.add_argument("--algebra-file", help="presentation JSON (liealg schema)")
    common.add_argument("--p", type=int, help="the prime")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", help="write data here instead of stdout")
    common.add_argument("--meta", help="write the metadata block (timings) to this file")
    common.add_argument("--timing", action="store_true",
                        help="fill elapsed_ms in CSV rows and echo metadata on stderr")
    common.add_argument("--budget", type=parse_budget, default=DEFAULT_BUDGET,
                        help="max PBW monomials for unreduced computations (default 3^10)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--method", choices=("stack", "iterative"), default="stack")
    common.add_argument("--generators", choices=("lie", "all"), default="lie")
    common.add_argument("--no-reduce", action="store_true", help="skip the toral weight reduction")

    ap = argparse.ArgumentParser(prog="uchi", description="Centers of reduced enveloping algebras over F_p.")
    ap.add_argument("--version", action="version", version=f"uchi {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="check presentation axioms")
    s.add_argument("--pairs", type=int, default=200,
                   help="random pairs for the Jacobson-vs-matrix check (0 to skip)")
    s = sub.add_parser("uenv", parents=[common], help="associativity and p-center relations in U_chi")
    s.add_argument("--chi", action="append", help="character (repeatable; default zero)")
    s.add_argument("--triples", type=int, default=50)
    s = sub.add_parser("center", parents=[common], help="center report for one character")
    s.add_argument("--chi", default="zero")
    s = sub.add_parser("sweep", parents=[common], help="main-theorem sweep over representatives")
    s.add_argument("--reps", default="standard", help="'standard' or comma-separated names")
    s = sub.add_parser("census", parents=[common], help="histogram of stabiliser dimensions")
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--samples", type=int, default=10000)
    s = sub.add_parser("probe", parents=[common], help="center dimension along lines chi0 + t psi")
    s.add_argument("--chi0", action="append", help="base point (repeatable; default zero)")
    s.add_argument("--psi", help="direction; default: sampled lines")
    s.add_argument("--lines", type=int, default=5, help="number of sampled directions")
    s.add_argument("--all-lines", action="store_true", help="every line through the base point")
    s = sub.add_parser("kw", parents=[common], help="Kac-Weisfeiler dimension check")
    s.add_argument("--chi", required=True, help="mixed:<levi>:<nilp> or {chi_s, chi_n} JSON")
    s = sub.add_parser("support", parents=[common], help="zero the central part of chi")
    s.add_argument("--chi", required=True)
    s = sub.add_parser("tensor", parents=[common], help="product rule on a two-summand direct sum")
    s.add_argument("--chi", default="zero")
    return ap


DEFAULT_FORMAT = {"census": "csv"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        g = load_algebra(args)
        kind, payload, verdict = COMMANDS[args.command](g, args)
        fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")
        emit_report(kind, payload, fmt, args.output, args.timing)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, CertificationError, ExtensionFieldRequired) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UchiError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    meta = {"command": args.command, "version": __version__,
            "elapsed_ms": round((time.perf_counter() - t0) * 1000)}
    if args.meta:
        Path(args.meta).write_text(json.dumps(meta, indent=2) + "\n")
    if args.timing:
        print(json.dumps(meta), file=sys.stderr)
    if verdict is True:
        return EXIT_OK
    if verdict is False:
        print("consistency check failed", file=sys.stderr)
        return EXIT_INCONSISTENT
    return int(verdict)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
