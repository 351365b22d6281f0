"""Verification reports for the hyperbolic kernel.

Reports are plain dicts ready for JSON.  Each carries ``status``
(``verified``, ``partial`` or ``failed``), an ``assumptions`` list, the
tool version, a hash of the input triangulation and the tolerances used.
"""

import hashlib
from concurrent.futures import ProcessPoolExecutor

from .. import __version__
from ..recipes.family import LinearForm
from .canonical import CANONICAL, canonical_verify
from .certify import INFLATION, RETRY_INFLATION, certify_geometric
from .equations import (DEFAULT_TOL, ConvergenceError, core_length, gluing_system,
                        normalize_slopes, solve_shapes, volume)
from .symmetries import automorphisms
from .triangulation import parse_triangulation, serialize

VERIFIED = "verified"
PARTIAL = "partial"
FAILED = "failed"

MOSTOW = {
    "id": "mostow",
    "statement": "for a closed hyperbolic 3-manifold the mapping class group is isomorphic "
                 "to the isometry group",
    "citation": "Mostow rigidity; Gabai, Meyerhoff and Thurston",
}
SHORTEST = {
    "id": "shortest_core",
    "statement": "the cores of the filled solid tori are the shortest closed geodesics, so "
                 "every isometry of the filling restricts to an isometry of the exterior",
    "citation": "Thurston's hyperbolic Dehn surgery theorem; computed core lengths as evidence",
}


def tri_hash(tri):
    return hashlib.sha256(serialize(tri).encode()).hexdigest()


def envelope(kind, tri, tol, **fields):
    out = {"kind": kind, "version": __version__,
           "inputs": {"triangulation_sha256": tri_hash(tri)},
           "tolerances": {"newton": tol, "inflation": [INFLATION, RETRY_INFLATION]},
           "assumptions": []}
    out.update(fields)
    return out


def _shape_list(shapes):
    return [[z.real, z.imag] for z in shapes]


def solve_report(tri, slopes=None, tol=DEFAULT_TOL):
    slopes = normalize_slopes(tri, slopes)
    try:
        shapes, info = solve_shapes(gluing_system(tri, slopes), tol=tol)
    except ConvergenceError as exc:
        return envelope("solve", tri, tol, status=FAILED, slopes=_slopes(slopes),
                        diagnostics=[str(exc)])
    geometric = all(z.imag > 0 for z in shapes)
    return envelope("solve", tri, tol, status=VERIFIED if geometric else PARTIAL,
                    slopes=_slopes(slopes), shapes=_shape_list(shapes),
                    iterations=info["iterations"], residual=info["residual"],
                    volume=volume(shapes), geometric=geometric)


def _slopes(slopes):
    return [None if s is None else list(s) for s in slopes]


def certify_structure(tri, slopes=None, tol=DEFAULT_TOL):
    """Solve and certify; returns ``(shapes, certificate, diagnostics)``."""
    slopes = normalize_slopes(tri, slopes)
    try:
        shapes, _ = solve_shapes(gluing_system(tri, slopes), tol=tol)
    except ConvergenceError as exc:
        return None, None, [str(exc)]
    cert = certify_geometric(tri, slopes, shapes)
    return shapes, cert, list(cert.diagnostics)


def certify_report(tri, slopes=None, tol=DEFAULT_TOL):
    slopes = normalize_slopes(tri, slopes)
    shapes, cert, diag = certify_structure(tri, slopes, tol)
    if cert is None:
        return envelope("certify", tri, tol, status=FAILED, slopes=_slopes(slopes),
                        diagnostics=diag)
    out = envelope("certify", tri, tol, status=VERIFIED if cert.verified else FAILED,
                   slopes=_slopes(slopes), shapes=_shape_list(shapes), volume=volume(shapes),
                   certificate=cert.to_dict())
    if cert.verified:
        out["cores"] = [core_length(tri, slopes, shapes, c).to_dict()
                        for c, s in enumerate(slopes) if s is not None]
    return out


def symmetries_report(tri, tol=DEFAULT_TOL):
    group = automorphisms(tri)
    shapes, cert, diag = certify_structure(tri, None, tol)
    verdict, sums = None, {}
    if cert is not None and cert.verified:
        verdict, sums = canonical_verify(tri, shapes, cert)
    exact = verdict == CANONICAL
    return envelope("symmetries", tri, tol, status=VERIFIED if exact else PARTIAL,
                    group=group.to_dict(tri), canonical=verdict,
                    tilt_sums=[[list(k), list(v)] for k, v in sums.items()],
                    isometry_count={"value": group.order, "exact": exact},
                    diagnostics=diag)


def slope_template(spec):
    """Per-cusp ``(p, q)`` linear forms in ``n``; e.g. ``[("1", "n")]`` or
    ``[("-1", "2*n")]``."""
    return tuple((LinearForm.parse(p), LinearForm.parse(q)) for p, q in spec)


def slopes_at(template, n):
    return tuple((p(n), q(n)) for p, q in template)


def _filling_job(args):
    text, template_spec, n, tol = args
    tri = parse_triangulation(text)
    slopes = slopes_at(slope_template(template_spec), n)
    entry = {"n": n, "slopes": _slopes(slopes)}
    try:
        slopes = normalize_slopes(tri, slopes)
    except ValueError as exc:
        entry.update(certified=False, diagnostics=[str(exc)])
        return entry
    shapes, cert, diag = certify_structure(tri, slopes, tol)
    entry["certified"] = bool(cert is not None and cert.verified)
    entry["diagnostics"] = diag
    if entry["certified"]:
        entry["volume"] = volume(shapes)
        entry["cores"] = [core_length(tri, slopes, shapes, c).to_dict()
                          for c in range(len(slopes))]
    return entry


def sweep_fillings(tri, template_spec, ns, tol=DEFAULT_TOL, jobs=1):
    """Certify each filling in ``ns``; results sorted by ``n``."""
    text = serialize(tri)
    spec = [(str(p), str(q)) for p, q in template_spec]
    args = [(text, spec, n, tol) for n in sorted(ns)]
    if jobs and jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_filling_job, args))
    else:
        results = [_filling_job(a) for a in args]
    return sorted(results, key=lambda e: e["n"])


def mcg_bound_report(tri, template_spec, ns, tol=DEFAULT_TOL, jobs=1):
    """Bound the mapping class groups of the fillings of ``tri`` along the
    slope template, for every ``n`` in ``ns``."""
    ns = sorted(ns)
    base = envelope("mcg_bound", tri, tol, slope_template=[list(map(str, t))
                                                           for t in template_spec],
                    requested=[ns[0], ns[-1]] if ns else [])
    shapes, cert, diag = certify_structure(tri, None, tol)
    if cert is None or not cert.verified:
        base.update(status=FAILED, stage="exterior", diagnostics=diag)
        return base
    group = automorphisms(tri)
    verdict, sums = canonical_verify(tri, shapes, cert)
    exact = verdict == CANONICAL
    complete_volume = volume(shapes)
    base["exterior"] = {"volume": complete_volume, "shapes": _shape_list(shapes),
                        "certificate": cert.to_dict(), "canonical": verdict,
                        "tilt_sums": [[list(k), list(v)] for k, v in sums.items()]}
    base["group"] = group.to_dict(tri)
    base["bound"] = {"isometry_order": group.order, "exact": exact,
                     "orientation_reversing": group.orientation_reversing}
    fillings = sweep_fillings(tri, template_spec, ns, tol, jobs)
    kept, failure = [], None
    for entry in fillings:
        if not entry["certified"]:
            failure = entry
            break
        if not entry["volume"] < complete_volume:
            entry["certified"] = False
            entry["diagnostics"].append("filled volume is not below the complete volume")
            failure = entry
            break
        kept.append(entry)
    base["fillings"] = kept
    base["certified_range"] = [kept[0]["n"], kept[-1]["n"]] if kept else None
    diagnostics = list(diag)
    if failure is not None:
        diagnostics.append(f"truncated at n = {failure['n']}: "
                           + "; ".join(failure.get("diagnostics", [])))
    if not exact:
        diagnostics.append(f"triangulation is {verdict}; |Aut| = {group.order} is only a "
                           "lower bound for the isometry group")
    base["diagnostics"] = diagnostics
    base["assumptions"] = [MOSTOW, SHORTEST] if kept else [MOSTOW]
    base["status"] = VERIFIED if exact and failure is None and kept else PARTIAL
    base["statement"] = (
        f"for n in {kept[0]['n']}..{kept[-1]['n']}, |MCG(Y_n)| <= {group.order}"
        if exact and kept else
        f"|Aut| = {group.order} (lower bound); no upper bound established")
    return base


def core_lengths(report):
    """``[(n, [real lengths])]`` from a report."""
    return [(e["n"], [c["real_length"] for c in e["cores"]]) for e in report.get("fillings", [])]

