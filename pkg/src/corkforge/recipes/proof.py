"""Mechanical checks of the non-extension arguments.

A trace is a list of steps with stable ids.  Each step is ``checked`` (a
structural fact verified on the diagrams), ``assumed`` (an imported
result, with citation), ``failed`` or ``skipped``.  The verdict is
established only when every step is checked or assumed.
"""

import json
from dataclasses import dataclass, field

from ..kirby.diagram import DOTTED, TWO_HANDLE, DiagramError
from ..kirby.moves import erase_component
from .library import meridian_of
from .symmetry import MIRROR, apply_symmetry, rotate_mirror

CHECKED = "checked"
ASSUMED = "assumed"
FAILED = "failed"
SKIPPED = "skipped"

TRACE_VERSION = "proof-trace/1"


@dataclass
class ProofStep:
    id: str
    claim: str
    status: str = SKIPPED
    detail: str = ""
    citation: str = ""

    def to_dict(self):
        out = {"id": self.id, "claim": self.claim, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.citation:
            out["citation"] = self.citation
        return out


@dataclass
class ProofTrace:
    kind: str
    conclusion: str
    steps: list = field(default_factory=list)

    @property
    def assumptions(self):
        return [s.id for s in self.steps if s.status == ASSUMED]

    @property
    def withheld_at(self):
        for s in self.steps:
            if s.status not in (CHECKED, ASSUMED):
                return s.id
        return None

    @property
    def established(self):
        return self.withheld_at is None and bool(self.steps)

    @property
    def cited(self):
        """Every assumed step carries a citation."""
        return all(s.citation for s in self.steps if s.status == ASSUMED)

    @property
    def verdict(self):
        return self.conclusion if self.established else "withheld"

    def to_dict(self):
        return {"version": TRACE_VERSION, "kind": self.kind,
                "steps": [s.to_dict() for s in self.steps],
                "verdict": {"status": "established" if self.established else "withheld",
                            "statement": self.verdict,
                            "assumptions": self.assumptions,
                            "withheld_at": self.withheld_at}}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


class _Runner:
    """Runs steps in order; after the first failure the rest are skipped."""

    def __init__(self, trace):
        self.trace = trace
        self.stopped = False

    def check(self, sid, claim, fn):
        step = ProofStep(sid, claim)
        self.trace.steps.append(step)
        if self.stopped:
            return None
        try:
            ok, detail = fn()
        except DiagramError as exc:
            ok, detail = False, str(exc)
        step.status = CHECKED if ok else FAILED
        step.detail = detail
        if not ok:
            self.stopped = True
        return ok

    def assume(self, sid, claim, citation, available=True, detail=""):
        step = ProofStep(sid, claim, citation=citation, detail=detail)
        self.trace.steps.append(step)
        if self.stopped:
            return
        if available:
            step.status = ASSUMED
        else:
            step.status = FAILED
            step.detail = detail or "no certificate supplied"
            self.stopped = True


def _split_from(d, cid, others):
    """No crossings and no disk passages between ``cid`` and ``others``."""
    owner = d.arc_owner()
    for x in d.crossings:
        pair = {owner[x.over_in], owner[x.under_in]}
        if cid in pair and pair & set(others):
            return False, f"{cid} crosses {sorted(pair & set(others))[0]}"
    for did, plist in d.passages.items():
        for p in plist:
            if {did, p.component} & {cid} and {did, p.component} & set(others):
                return False, f"{p.component} passes through {did}"
    return True, f"{cid} is split from {', '.join(sorted(others))}"


def _is_round_zero(d, cid):
    c = d.component(cid)
    owner = d.arc_owner()
    if any(owner[x.over_in] == owner[x.under_in] == cid for x in d.crossings):
        return False
    return c.role == TWO_HANDLE and c.framing == 0


def proof_trace_nonstrong(w, w_prime, f, cert, meridian="mu", suffix="'"):
    """Trace of the argument that ``f`` extends over ``w`` but not over
    ``w_prime``."""
    trace = ProofTrace("nonstrong",
                       "(W', f) is a non-strong cork: f extends over W but not over W'")
    run = _Runner(trace)
    left = [c.id for c in w.components if not c.id.endswith(suffix)]
    jp = next((c.id for c in w.components if c.role == DOTTED and c.id.endswith(suffix)), None)
    hp = next((c.id for c in w.components
               if c.role == TWO_HANDLE and c.id.endswith(suffix)), None)
    x_holder = {}

    def symmetry():
        if apply_symmetry(f, w) != w:
            return False, "F does not map W to itself"
        if apply_symmetry(f, apply_symmetry(f, w)) != w or f.order != 2:
            return False, "F is not of order 2"
        return True, "F is an order-2 symmetry of W, so f = F on the boundary extends over W"

    def image_meridian():
        if jp is None or hp is None:
            return False, "cannot find the right-hand pair"
        fmu = f.components.get(meridian, meridian)
        if w_prime.component(jp).role != TWO_HANDLE:
            return False, f"{jp} is not a 2-handle in W'"
        owner = meridian_of(w_prime, fmu)
        if owner != jp:
            return False, f"f({meridian}) = {fmu} is a meridian of {owner}, not of {jp}"
        return True, f"f({meridian}) = {fmu} is a meridian of the 2-handle {jp}, so it bounds a disk in W'"

    def erase():
        if w_prime.component(hp).role != DOTTED:
            return False, f"{hp} is not dotted in W'"
        x_holder["X"] = erase_component(w_prime, hp)
        return True, f"X = W' without the dotted circle {hp}; W' is X minus a slice disk"

    def split():
        x = x_holder["X"]
        if not _is_round_zero(x, jp):
            return False, f"{jp} is not a crossing-free 0-framed 2-handle in X"
        return _split_from(x, jp, left)

    def reduce_to_c():
        x = x_holder["X"]
        rest = [c.id for c in x.components if c.id.endswith(suffix) and c.id != jp]
        for cid in rest:
            if meridian_of(x, cid) != jp:
                return False, f"{cid} is not a meridian of {jp}"
        return True, (f"X is C with a split 0-framed unknot {jp} (C plus S2xD2); a slice disk for "
                      f"{meridian} in X gives one in C")

    run.check("nonstrong.0", "F is an order-2 symmetry of W", symmetry)
    run.check("nonstrong.1", "f(mu) is the meridian of the 2-handle j' in W'", image_meridian)
    run.check("nonstrong.2", "W' embeds in X = W' with the dotted h' erased", erase)
    run.check("nonstrong.3", "j' is a 0-framed unknot split from the C side of X", split)
    run.check("nonstrong.4", "mu slice in X implies mu slice in C", reduce_to_c)
    run.assume("nonstrong.5", "mu is not slice in C",
               "" if cert is None else cert.citation,
               available=cert is not None,
               detail="" if cert is None else cert.assumption)
    return trace


def proof_trace_chiral(w_n, report, n, cert=None, meridian="mu", suffix="-"):
    """Trace of the argument that ``W_n`` and ``-W_n`` are homeomorphic but
    not diffeomorphic.  ``report`` is an mcg-bound report for the boundary
    (see :func:`corkforge.hyp.mcg_bound_report`)."""
    from .families import mirror_partner

    trace = ProofTrace("chiral", "W_n is homeomorphic but not diffeomorphic to -W_n")
    run = _Runner(trace)
    left = [c.id for c in w_n.components if not c.id.endswith(suffix)]
    held = {}

    def rotation():
        minus, sym = mirror_partner(w_n, suffix)
        mirror, _ = rotate_mirror(w_n, MIRROR)
        if minus != mirror:
            return False, "rotation followed by the role exchange is not the mirror diagram"
        held["minus"], held["sym"] = minus, sym
        return True, "the rotation carries the framed link to its mirror, giving f: Y_n -> -Y_n"

    def image_meridian():
        minus, sym = held["minus"], held["sym"]
        fmu = sym.components.get(meridian, meridian)
        owner = meridian_of(minus, fmu)
        if owner is None or minus.component(owner).role != TWO_HANDLE:
            return False, f"f({meridian}) is not a 2-handle meridian in -W_n"
        return True, f"f({meridian}) = {fmu} is a meridian of the 2-handle {owner} of -W_n"

    def erase():
        dotted = [c.id for c in w_n.components if c.role == DOTTED and c.id.endswith(suffix)]
        if len(dotted) != 1:
            return False, "cannot find the right-hand dotted circle"
        held["X"] = erase_component(w_n, dotted[0])
        return True, f"X_n = W_n without {dotted[0]}; W_n is X_n minus a slice disk"

    def split():
        x = held["X"]
        framed = [c.id for c in x.components if c.role == TWO_HANDLE and c.id.endswith(suffix)]
        if len(framed) != 1 or not _is_round_zero(x, framed[0]):
            return False, "right-hand 2-handle is not a crossing-free 0-framed unknot"
        return _split_from(x, framed[0], left)

    def bound():
        return _check_report(report, n)

    run.check("chiral.1", "the rotation f carries Y_n to -Y_n", rotation)
    run.assume("chiral.2", "f extends to a homeomorphism W_n -> -W_n",
               "cork twists on embedded copies of the cork and its mirror; Freedman")
    run.check("chiral.3", "f(mu) bounds a smoothly embedded disk in -W_n", image_meridian)
    run.check("chiral.4", "W_n embeds in X_n = W_n with the right dotted circle erased", erase)
    run.check("chiral.5", "the right 2-handle of X_n is a split 0-framed unknot", split)
    run.assume("chiral.6", "X_n is diffeomorphic to the cork boundary-summed with S2xD2",
               "handle cancellation in the split picture")
    run.assume("chiral.7", "mu is not slice in the Akbulut cork",
               "" if cert is None else cert.citation,
               available=cert is not None,
               detail="" if cert is None else cert.assumption)
    run.check("chiral.8", "every orientation-reversing mapping class of Y_n is f", bound)
    if isinstance(report, dict):
        for k, a in enumerate(report.get("assumptions", []), 1):
            run.assume(f"chiral.8.{k}", a.get("statement", str(a)), a.get("citation", ""))
    return trace


def _check_report(report, n):
    if not isinstance(report, dict) or report.get("kind") != "mcg_bound":
        return False, "no mapping-class-group report"
    if report.get("status") == "failed":
        return False, "report status failed"
    bound = report.get("bound") or {}
    order = bound.get("isometry_order")
    if not bound.get("exact"):
        return False, "isometry count is only a lower bound"
    if order is None or order > 2:
        return False, f"isometry bound {order} exceeds 2"
    if bound.get("orientation_reversing", 0) < 1:
        return False, "no orientation-reversing isometry in the bound"
    lo, hi = (report.get("certified_range") or (None, None))
    if lo is None or not lo <= n <= hi:
        return False, f"n = {n} outside the certified range {lo}..{hi}"
    return True, f"|MCG(Y_n)| <= {order} with an orientation-reversing element, n in {lo}..{hi}"
