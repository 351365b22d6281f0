"""Handle diagrams: dotted circles, framed 2-handles and marked curves.

A diagram is stored as oriented arcs joined at crossings.  Every crossing
lists the incoming and outgoing arc of its over strand and of its under
strand, plus the usual crossing sign.  Dotted circles additionally carry an
ordered list of disk passages: the transverse intersections of the other
components with the spanning disk of the circle.
"""

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

DOTTED = "dotted"
TWO_HANDLE = "twohandle"
MARKED = "marked"
ROLES = (DOTTED, TWO_HANDLE, MARKED)
_ROLE_ORDER = {DOTTED: 0, TWO_HANDLE: 1, MARKED: 2}

DIAGRAM_VERSION = "kirby-diagram/1"
SURGERY_VERSION = "kirby-surgery/1"


class DiagramError(ValueError):
    """Raised when diagram data is malformed or an operation's
    precondition fails."""


@dataclass(frozen=True)
class Component:
    id: str
    role: str
    arcs: tuple
    framing: Optional[int] = None


@dataclass(frozen=True)
class Crossing:
    over_in: int
    over_out: int
    under_in: int
    under_out: int
    sign: int
    region: Optional[str] = None

    def arcs(self):
        return (self.over_in, self.over_out, self.under_in, self.under_out)

    def sort_key(self):
        return (self.over_in, self.over_out, self.under_in, self.under_out,
                self.sign, self.region or "")


@dataclass(frozen=True)
class Passage:
    component: str
    sign: int
    arc: Optional[int] = None


@dataclass(frozen=True)
class TwistRegion:
    """A box of full twists between two crossing-free arcs.

    ``parameter`` is an integer or a linear form such as ``"2*n+1"``.
    ``side`` (+1 or -1) records on which side of the first arc the second
    one lies; it is needed only when the arcs lie in different pieces of
    the diagram and is otherwise read off the faces.
    """
    id: str
    arcs: tuple
    parameter: Union[int, str] = 0
    orientation: str = "parallel"
    side: Optional[int] = None


@dataclass(frozen=True)
class HandleDiagram:
    components: tuple
    crossings: tuple
    passages: dict = field(default_factory=dict)
    twist_regions: tuple = ()
    name: str = ""

    # -- lookup helpers ---------------------------------------------------

    def component(self, cid):
        for c in self.components:
            if c.id == cid:
                return c
        raise DiagramError(f"no component {cid!r}")

    def ids(self, role=None):
        return [c.id for c in self.components if role is None or c.role == role]

    def arc_owner(self):
        owner = {}
        for c in self.components:
            for a in c.arcs:
                owner[a] = c.id
        return owner

    def crossings_between(self, a, b):
        owner = self.arc_owner()
        out = []
        for x in self.crossings:
            pair = {owner.get(x.over_in), owner.get(x.under_in)}
            if pair == {a, b} or (a == b and pair == {a}):
                out.append(x)
        return out

    def with_roles(self, **roles):
        comps = []
        for c in self.components:
            if c.id in roles:
                role, framing = roles[c.id]
                c = replace(c, role=role, framing=framing)
            comps.append(c)
        return replace(self, components=tuple(comps))

    # -- serialization ----------------------------------------------------

    def canonical(self):
        """Return an equal diagram with canonically ordered parts."""
        comps = sorted(self.components, key=lambda c: (_ROLE_ORDER[c.role], c.id))
        crossings = sorted(self.crossings, key=Crossing.sort_key)
        # stable sort: passages sharing an arc keep their order along it
        passages = {k: tuple(sorted(v, key=lambda p: (p.component, -1 if p.arc is None else p.arc)))
                    for k, v in sorted(self.passages.items()) if v}
        regions = sorted(self.twist_regions, key=lambda r: r.id)
        return HandleDiagram(tuple(comps), tuple(crossings), passages,
                             tuple(regions), self.name)

    def to_dict(self):
        d = self.canonical()
        out = {
            "version": DIAGRAM_VERSION,
            "components": [_component_dict(c) for c in d.components],
            "crossings": [_crossing_dict(x) for x in d.crossings],
            "passages": {k: [_passage_dict(p) for p in v]
                         for k, v in d.passages.items()},
            "twist_regions": [_region_dict(r) for r in d.twist_regions],
        }
        if d.name:
            out["name"] = d.name
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def __eq__(self, other):
        if not isinstance(other, HandleDiagram):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.to_json())

    @classmethod
    def from_dict(cls, data):
        version = data.get("version", DIAGRAM_VERSION)
        if version != DIAGRAM_VERSION:
            raise DiagramError(f"unsupported diagram version {version!r}")
        try:
            comps = []
            for c in data["components"]:
                role = c["role"]
                if role not in ROLES:
                    raise DiagramError(f"component {c['id']!r}: unknown role {role!r}")
                framing = c.get("framing")
                comps.append(Component(str(c["id"]), role,
                                       tuple(int(a) for a in c["arcs"]),
                                       None if framing is None else int(framing)))
            crossings = [Crossing(int(x["over_in"]), int(x["over_out"]),
                                  int(x["under_in"]), int(x["under_out"]),
                                  int(x["sign"]), x.get("region"))
                         for x in data.get("crossings", [])]
            passages = {}
            for k, plist in data.get("passages", {}).items():
                passages[str(k)] = tuple(
                    Passage(str(p["component"]), int(p["sign"]),
                            None if p.get("arc") is None else int(p["arc"]))
                    for p in plist)
            regions = [TwistRegion(str(r["id"]), tuple(int(a) for a in r["arcs"]),
                                   r.get("parameter", 0),
                                   r.get("orientation", "parallel"),
                                   None if r.get("side") is None else int(r["side"]))
                       for r in data.get("twist_regions", [])]
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"schema violation: {exc}") from exc
        return cls(tuple(comps), tuple(crossings), passages, tuple(regions),
                   data.get("name", ""))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _component_dict(c):
    d = {"id": c.id, "role": c.role, "arcs": list(c.arcs)}
    if c.framing is not None:
        d["framing"] = c.framing
    return d


def _crossing_dict(x):
    d = {"over_in": x.over_in, "over_out": x.over_out,
         "under_in": x.under_in, "under_out": x.under_out, "sign": x.sign}
    if x.region is not None:
        d["region"] = x.region
    return d


def _region_dict(r):
    out = {"id": r.id, "arcs": list(r.arcs), "parameter": r.parameter,
           "orientation": r.orientation}
    if r.side is not None:
        out["side"] = r.side
    return out


def _passage_dict(p):
    d = {"component": p.component, "sign": p.sign}
    if p.arc is not None:
        d["arc"] = p.arc
    return d


def load_diagram(path):
    with open(path) as fh:
        return HandleDiagram.from_json(fh.read())


# -- surgery diagrams -----------------------------------------------------

@dataclass(frozen=True)
class SurgeryComponent:
    id: str
    arcs: tuple
    coefficient: Optional[Fraction]  # None for marked curves


@dataclass(frozen=True)
class SurgeryDiagram:
    components: tuple
    crossings: tuple

    def canonical(self):
        return SurgeryDiagram(tuple(sorted(self.components, key=lambda c: c.id)),
                              tuple(sorted(self.crossings, key=Crossing.sort_key)))

    def to_dict(self):
        d = self.canonical()
        comps = []
        for c in d.components:
            entry = {"id": c.id, "arcs": list(c.arcs)}
            if c.coefficient is None:
                entry["marked"] = True
            else:
                entry["coefficient"] = f"{c.coefficient.numerator}/{c.coefficient.denominator}"
            comps.append(entry)
        return {"version": SURGERY_VERSION, "components": comps,
                "crossings": [_crossing_dict(x) for x in d.crossings]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def __eq__(self, other):
        if not isinstance(other, SurgeryDiagram):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.to_json())


# -- validation -----------------------------------------------------------

@dataclass
class Violation:
    code: str
    message: str
    where: tuple = ()


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self):
        return not self.violations

    def codes(self):
        return {v.code for v in self.violations}

    def add(self, code, message, *where):
        self.violations.append(Violation(code, message, tuple(where)))

    def to_dict(self):
        return {"valid": self.valid,
                "violations": [{"code": v.code, "message": v.message,
                                "where": list(v.where)} for v in self.violations]}


def crossing_linking(d, a, b):
    """Signed crossing sum between components a != b (twice the linking number)."""
    return sum(x.sign for x in d.crossings_between(a, b))


def validate_diagram(d):
    """Check every structural invariant of a handle diagram.

    Never raises; all problems are collected in the returned report.
    """
    rep = ValidationReport()
    owner = {}
    for c in d.components:
        if c.role not in ROLES:
            rep.add("role", f"component {c.id} has unknown role {c.role!r}", c.id)
        if c.role == TWO_HANDLE and c.framing is None:
            rep.add("framing", f"2-handle {c.id} has no framing", c.id)
        if c.role != TWO_HANDLE and c.framing is not None:
            rep.add("framing", f"{c.role} component {c.id} carries a framing", c.id)
        if not c.arcs:
            rep.add("arcs", f"component {c.id} has no arcs", c.id)
        for a in c.arcs:
            if a in owner:
                rep.add("arcs", f"arc {a} occurs in {owner[a]} and {c.id}", a)
            owner[a] = c.id
    if len({c.id for c in d.components}) != len(d.components):
        rep.add("ids", "duplicate component ids")

    starts, ends = {}, {}
    for i, x in enumerate(d.crossings):
        if x.sign not in (1, -1):
            rep.add("sign", f"crossing {i} has sign {x.sign}", i)
        for a in x.arcs():
            if a not in owner:
                rep.add("arcs", f"crossing {i} references unknown arc {a}", i, a)
        for a in (x.over_out, x.under_out):
            if a in starts:
                rep.add("incidence", f"arc {a} starts at crossings {starts[a][0]} and {i}", a)
            starts[a] = (i, a == x.over_out)
        for a in (x.over_in, x.under_in):
            if a in ends:
                rep.add("incidence", f"arc {a} ends at crossings {ends[a][0]} and {i}", a)
            ends[a] = (i, a == x.over_in)
        if owner.get(x.over_in) != owner.get(x.over_out):
            rep.add("incidence", f"crossing {i}: over strand changes component", i)
        if owner.get(x.under_in) != owner.get(x.under_out):
            rep.add("incidence", f"crossing {i}: under strand changes component", i)

    for c in d.components:
        n = len(c.arcs)
        touched = [a for a in c.arcs if a in starts or a in ends]
        if n == 1 and not touched:
            continue
        for k, a in enumerate(c.arcs):
            if a not in starts or a not in ends:
                rep.add("incidence", f"arc {a} of {c.id} is not bounded by two crossing endpoints", c.id, a)
                continue
            nxt = c.arcs[(k + 1) % n]
            i, over = ends[a]
            x = d.crossings[i]
            expect = x.over_out if over else x.under_out
            if expect != nxt:
                rep.add("incidence", f"component {c.id}: arc {a} is followed by {expect} at crossing {i}, not {nxt}", c.id, i)

    if rep.violations:
        return rep

    roles = {c.id: c.role for c in d.components}
    region_ids = {r.id for r in d.twist_regions}
    for i, x in enumerate(d.crossings):
        a, b = owner[x.over_in], owner[x.under_in]
        if a == b and roles[a] == DOTTED and x.region not in region_ids:
            rep.add("dotted-convention", f"dotted circle {a} crosses itself at crossing {i}", a, i)
        if a != b and roles[a] == DOTTED and roles[b] == DOTTED:
            rep.add("dotted-convention", f"dotted circles {a} and {b} cross at crossing {i}", a, b, i)

    ids = [c.id for c in d.components]
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if crossing_linking(d, a, b) % 2:
                rep.add("parity", f"odd signed crossing sum between {a} and {b}", a, b)

    for did, plist in d.passages.items():
        if did not in roles:
            rep.add("passages", f"passages for unknown component {did}", did)
            continue
        if roles[did] == MARKED:
            rep.add("passages", f"marked component {did} carries disk passages", did)
        for p in plist:
            if p.component not in roles or p.component == did:
                rep.add("passages", f"passage through {did} by invalid component {p.component}", did)
            elif p.sign not in (1, -1):
                rep.add("passages", f"passage through {did} has sign {p.sign}", did)
            elif p.arc is not None and owner.get(p.arc) != p.component:
                rep.add("passages", f"passage through {did} anchored on arc {p.arc} not in {p.component}", did)
    for c in d.components:
        if c.role != DOTTED and c.id not in d.passages:
            continue
        plist = d.passages.get(c.id, ())
        for other in ids:
            if other == c.id:
                continue
            s = sum(p.sign for p in plist if p.component == other)
            lk2 = crossing_linking(d, c.id, other)
            if 2 * s != lk2:
                rep.add("passage-sum", f"passages of {other} through {c.id} sum to {s} but lk = {Fraction(lk2, 2)}", c.id, other)

    for r in d.twist_regions:
        for a in r.arcs:
            if a not in owner:
                rep.add("twist-region", f"twist region {r.id} references unknown arc {a}", r.id)
        if r.orientation not in ("parallel", "antiparallel"):
            rep.add("twist-region", f"twist region {r.id} has orientation {r.orientation!r}", r.id)
        if r.side not in (None, 1, -1):
            rep.add("twist-region", f"twist region {r.id} has side {r.side!r}", r.id)
    return rep


def require_valid(d):
    rep = validate_diagram(d)
    if not rep.valid:
        msg = "; ".join(v.message for v in rep.violations[:5])
        raise DiagramError(f"invalid diagram: {msg}")
    return d
