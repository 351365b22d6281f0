"""Command line pipeline: ``corkforge <command> [options]``.

Every command writes one JSON report.  Exit status: 0 when the report is
verified (or established with every assumption cited), 2 when it is
inconclusive, 1 on errors.  Options may also be set through environment
variables named ``CORKFORGE_<OPTION>``, e.g. ``CORKFORGE_JOBS=4``.
"""

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .hyp import report as hyp_report
from .hyp.equations import DEFAULT_TOL
from .hyp.triangulation import HEADER, TriangulationError, parse_triangulation
from .kirby.diagram import DiagramError, HandleDiagram, require_valid
from .kirby.groups import DEFAULT_BUDGET, pi1_presentation, tietze_simplify
from .kirby.linking import first_homology, handle_homology, linking_matrix, matrix_ids
from .kirby.moves import boundary_det, detect_cancel_and_reduce
from .recipes.double import (ReasonablyNiceCertificate, TangleModification, check_contractible,
                             derive_partner, symmetric_double)
from .recipes.families import (chiral_family, nonstrong_family, nonstrong_partner_family,
                               symmetry_from_dict)
from .recipes.family import TwistFamily, instantiate_family
from .recipes.proof import proof_trace_chiral, proof_trace_nonstrong

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2
ENV_PREFIX = "CORKFORGE_"
TEMPLATES = ("nonstrong", "nonstrong-partner", "chiral")


class UsageError(ValueError):
    pass


# -- option parsing -----------------------------------------------------------

def parse_n_range(text):
    """``A..B`` (inclusive) or a single integer."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo > hi:
        raise UsageError(f"empty n-range {text!r}")
    return list(range(lo, hi + 1))


def parse_slope(text):
    """``p/q``, ``p,q`` or ``complete``; ``q`` may be a linear form in
    ``n`` such as ``2n``.  Returns a pair of strings or ``None``."""
    text = text.strip()
    if text.lower() in ("complete", "c", "-"):
        return None
    sep = "/" if "/" in text else ","
    if sep not in text:
        return (text, "0") if text != "" else None
    p, q = text.split(sep, 1)
    return p.strip(), q.strip()


def _concrete(slopes):
    out = []
    for s in slopes:
        if s is None:
            out.append(None)
        else:
            try:
                out.append((int(s[0]), int(s[1])))
            except ValueError:
                raise UsageError(f"slope {s[0]}/{s[1]} must be numeric here") from None
    return out


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


class Context:
    """Inputs read so far, their hashes and the tolerances in force."""

    def __init__(self, args):
        self.args = args
        self.hashes = {}

    def read(self, path):
        data = _read(path)
        self.hashes[path] = hashlib.sha256(data).hexdigest()
        return data.decode()

    def json(self, path):
        text = self.read(path)
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path} is not valid JSON: {exc}") from None

    def config(self):
        return {"command": self.args.command_path, "version": __version__,
                "inputs": dict(sorted(self.hashes.items())),
                "tolerances": {"newton": self.args.tol, "tietze_budget": self.args.budget}}


def _need_input(args):
    if not args.input:
        raise UsageError("--input is required")
    return args.input


# -- commands -----------------------------------------------------------------

def cmd_validate(ctx):
    path = _need_input(ctx.args)
    text = ctx.read(path)
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines()
                  if ln.split("#", 1)[0].strip()), "")
    if first == HEADER:
        tri = parse_triangulation(text)
        return {"kind": "validate", "type": "triangulation", "status": "verified",
                "tetrahedra": tri.num_tetrahedra, "edge_classes": len(tri.edge_classes()),
                "cusps": tri.num_cusps}
    data = _parse_json(text, path)
    if "template" in data:
        fam = TwistFamily.from_dict(data)
        return {"kind": "validate", "type": "family", "status": "verified",
                "regions": [r.id for r in fam.template.twist_regions]}
    d = require_valid(HandleDiagram.from_dict(data))
    return {"kind": "validate", "type": "diagram", "status": "verified",
            "components": [c.id for c in d.components], "crossings": len(d.crossings)}


def _parse_json(text, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is neither {HEADER} text nor JSON: {exc}") from None


def diagram_invariants(d, budget=DEFAULT_BUDGET):
    require_valid(d)
    m = linking_matrix(d)
    h1 = first_homology(m)
    tz = tietze_simplify(pi1_presentation(d), budget)
    return {"linking_matrix": {"ids": matrix_ids(d), "rows": m},
            "det": boundary_det(d),
            "boundary_homology": h1.to_dict(), "boundary_homology_trivial": h1.trivial,
            "handle_homology": handle_homology(d).to_dict(),
            "pi1": tz.to_dict(),
            "mazur_type": detect_cancel_and_reduce(d).is_mazur_type
            if any(c.role == "dotted" for c in d.components) else False}


def cmd_invariants(ctx):
    path = _need_input(ctx.args)
    d = HandleDiagram.from_dict(_parse_json(ctx.read(path), path))
    inv = diagram_invariants(d, ctx.args.budget)
    conclusive = inv["pi1"]["status"] != "inconclusive"
    return dict(kind="invariants", status="verified" if conclusive else "partial", **inv)


def _certificate(ctx):
    if not ctx.args.certificate:
        return None
    return ReasonablyNiceCertificate.from_dict(ctx.json(ctx.args.certificate))


def cmd_double(ctx):
    path = _need_input(ctx.args)
    c = HandleDiagram.from_dict(_parse_json(ctx.read(path), path))
    cert = _certificate(ctx)
    mod = None
    if ctx.args.modification:
        mod = TangleModification.from_dict(ctx.json(ctx.args.modification))
    w, f = symmetric_double(c, cert, mod)
    w_prime = derive_partner(w)
    trace = proof_trace_nonstrong(w, w_prime, f, cert)
    established = trace.established and trace.cited
    return {"kind": "double", "status": "verified" if established else "partial",
            "W": w.to_dict(), "W_prime": w_prime.to_dict(), "symmetry": f.to_dict(),
            "checks": {"W": check_contractible(w)[1], "W_prime": check_contractible(w_prime)[1]},
            "trace": trace.to_dict(), "assumptions": _trace_assumptions(trace)}


def _trace_assumptions(trace):
    return [{"id": s.id, "statement": s.claim, "citation": s.citation}
            for s in trace.steps if s.status == "assumed"]


def _family(ctx):
    args = ctx.args
    if args.template:
        if args.template == "nonstrong":
            return nonstrong_family()
        if args.template == "nonstrong-partner":
            return nonstrong_partner_family()
        return chiral_family()
    path = _need_input(args)
    return TwistFamily.from_dict(_parse_json(ctx.read(path), path))


def _family_member(job):
    data, n, budget = job
    fam = TwistFamily.from_dict(data)
    d = instantiate_family(fam, n)
    inv = diagram_invariants(d, budget)
    ok = inv["det"] == 1 and inv["pi1"]["trivial"]
    return {"n": n, "sha256": hashlib.sha256(d.to_json().encode()).hexdigest(),
            "crossings": len(d.crossings), "det": inv["det"],
            "pi1": inv["pi1"]["status"], "contractible_checks": ok,
            "mazur_type": inv["mazur_type"]}


def _pool_map(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(fn, jobs))
    else:
        out = [fn(j) for j in jobs]
    return sorted(out, key=lambda e: e["n"])


def cmd_family(ctx):
    fam = _family(ctx)
    ns = parse_n_range(ctx.args.n_range)
    data = fam.to_dict()
    members = _pool_map(_family_member, [(data, n, ctx.args.budget) for n in ns],
                        ctx.args.jobs)
    ok = all(m["contractible_checks"] for m in members)
    return {"kind": "family", "status": "verified" if ok else "partial",
            "template_sha256": hashlib.sha256(json.dumps(data, sort_keys=True)
                                              .encode()).hexdigest(),
            "meta": fam.meta, "members": members}


def _triangulation(ctx):
    path = _need_input(ctx.args)
    return parse_triangulation(ctx.read(path))


def _slopes(ctx, tri):
    raw = ctx.args.slope or []
    if not raw:
        return [None] * tri.num_cusps
    slopes = [parse_slope(s) for s in raw]
    if len(slopes) == 1 and tri.num_cusps > 1:
        slopes = slopes * tri.num_cusps
    return slopes


def cmd_hyp(ctx):
    sub = ctx.args.hyp_command
    tri = _triangulation(ctx)
    tol = ctx.args.tol
    if sub == "solve":
        return hyp_report.solve_report(tri, _concrete(_slopes(ctx, tri)), tol)
    if sub == "certify":
        return hyp_report.certify_report(tri, _concrete(_slopes(ctx, tri)), tol)
    if sub == "symmetries":
        return hyp_report.symmetries_report(tri, tol)
    template = _slopes(ctx, tri)
    if any(s is None for s in template) or not ctx.args.slope:
        raise UsageError("mcg-bound needs a slope template per cusp, e.g. --slope 1/n")
    ns = parse_n_range(ctx.args.n_range)
    return hyp_report.mcg_bound_report(tri, template, ns, tol, ctx.args.jobs)


def cmd_chiral(ctx):
    ns = parse_n_range(ctx.args.n_range)
    cert = _certificate(ctx)
    report = ctx.json(ctx.args.report) if ctx.args.report else None
    fam = chiral_family()
    traces = []
    for n in ns:
        w = instantiate_family(fam, n)
        trace = proof_trace_chiral(w, report, n, cert)
        traces.append({"n": n, "trace": trace.to_dict(),
                       "established": trace.established and trace.cited})
    ok = all(t["established"] for t in traces)
    assumptions = []
    if traces:
        first = proof_trace_chiral(instantiate_family(fam, ns[0]), report, ns[0], cert)
        assumptions = _trace_assumptions(first)
    return {"kind": "chiral", "status": "verified" if ok else "partial",
            "symmetry": symmetry_from_dict(fam.meta["symmetry"]).to_dict(),
            "traces": traces, "assumptions": assumptions}


COMMANDS = {"validate": cmd_validate, "invariants": cmd_invariants, "double": cmd_double,
            "family": cmd_family, "hyp": cmd_hyp, "chiral": cmd_chiral}


# -- entry point --------------------------------------------------------------

def _env(name, default):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _positive_int(text):
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return x


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=_env("input", None), help="input file")
    common.add_argument("--out", default=_env("out", None), help="report path (default stdout)")
    common.add_argument("--n-range", default=_env("n_range", "5..20"),
                        help="inclusive parameter range A..B")
    common.add_argument("--tol", type=_positive_float,
                        default=_positive_float(_env("tol", DEFAULT_TOL)),
                        help="Newton residual tolerance")
    common.add_argument("--jobs", type=_positive_int,
                        default=_positive_int(_env("jobs", os.cpu_count() or 1)),
                        help="worker processes for sweeps")
    common.add_argument("--format", choices=["json"], default=_env("format", "json"))
    common.add_argument("--budget", type=_positive_int,
                        default=_positive_int(_env("budget", DEFAULT_BUDGET)),
                        help="Tietze step budget")
    parser = argparse.ArgumentParser(prog="corkforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    subs.add_parser("validate", parents=[common], help="check a diagram or triangulation")
    subs.add_parser("invariants", parents=[common], help="linking matrix, homology and pi_1")
    p = subs.add_parser("double", parents=[common], help="symmetric double and its partner")
    p.add_argument("--certificate", default=_env("certificate", None))
    p.add_argument("--modification", default=_env("modification", None))
    p = subs.add_parser("family", parents=[common], help="instantiate a twist family")
    p.add_argument("--template", choices=TEMPLATES, default=_env("template", None))
    p = subs.add_parser("hyp", help="hyperbolic kernel")
    hsubs = p.add_subparsers(dest="hyp_command", required=True)
    for name in ("solve", "certify", "symmetries", "mcg-bound"):
        h = hsubs.add_parser(name, parents=[common])
        h.add_argument("--slope", action="append",
                       help="per cusp: p/q, 'complete', or a template such as -1/2n")
    p = subs.add_parser("chiral", parents=[common], help="trace of the chirality argument")
    p.add_argument("--certificate", default=_env("certificate", None))
    p.add_argument("--report", default=_env("report", None), help="mcg-bound report JSON")
    return parser


def exit_status(report):
    """0 for verified, 2 for anything else that completed."""
    return EXIT_OK if report.get("status") == "verified" else EXIT_INCONCLUSIVE


def render(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run(argv=None):
    """Run one command; returns ``(exit status, report or None)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_ERROR), None
    args.command_path = args.command + (f" {args.hyp_command}" if args.command == "hyp" else "")
    ctx = Context(args)
    try:
        report = COMMANDS[args.command](ctx)
    except (UsageError, TriangulationError, DiagramError, ValueError, KeyError,
            RuntimeError) as exc:
        print(f"corkforge: error: {exc}", file=sys.stderr)
        return EXIT_ERROR, None
    report["config"] = ctx.config()
    text = render(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_status(report), report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
