"""Twist families: diagrams whose twist boxes carry a linear parameter."""

import re
from dataclasses import dataclass, field

from ..kirby.diagram import DiagramError, HandleDiagram, require_valid
from ..kirby.planar import Faces
from ..kirby.sketch import Sketch

_TERM = re.compile(r"([+-]?)(\d*)(\*?n)?")


@dataclass(frozen=True)
class LinearForm:
    """``a*n + b`` with integer coefficients."""
    a: int = 0
    b: int = 0

    @classmethod
    def parse(cls, text):
        if isinstance(text, LinearForm):
            return text
        if isinstance(text, int):
            return cls(0, text)
        s = str(text).replace(" ", "")
        if not s:
            raise ValueError("empty linear form")
        a = b = 0
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse linear form {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            digits, var = m.group(2), m.group(3)
            if var is None and not digits:
                raise ValueError(f"cannot parse linear form {text!r}")
            if var is not None and var.startswith("*") and not digits:
                raise ValueError(f"cannot parse linear form {text!r}")
            coeff = int(digits) if digits else 1
            if var is None:
                b += sign * coeff
            else:
                a += sign * coeff
            pos = m.end()
        return cls(a, b)

    def __call__(self, n):
        return self.a * n + self.b

    def __neg__(self):
        return LinearForm(-self.a, -self.b)

    def __str__(self):
        return f"{self.a}*n{self.b:+d}"


def region_value(param, n):
    if isinstance(param, int):
        return param
    return LinearForm.parse(param)(n)


@dataclass(frozen=True)
class TwistFamily:
    """A template diagram whose twist regions hold ``rule * param(n)`` full
    twists at parameter ``n``."""
    template: HandleDiagram
    parameter: str = "n"
    rule: int = 1
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rule not in (1, 2):
            raise DiagramError("a family places n or 2n full twists per unit of parameter")
        require_valid(self.template)
        for r in self.template.twist_regions:
            if len(r.arcs) != 2:
                raise DiagramError(f"twist region {r.id} needs exactly two arcs")
            if not isinstance(r.parameter, int):
                LinearForm.parse(r.parameter)

    def to_dict(self):
        return {"template": self.template.to_dict(), "parameter": self.parameter,
                "rule": self.rule, "meta": self.meta}

    @classmethod
    def from_dict(cls, data):
        return cls(HandleDiagram.from_dict(data["template"]), data.get("parameter", "n"),
                   int(data.get("rule", 1)), data.get("meta", {}))


def region_side(faces, a, b):
    """+1 if arc ``b`` lies on the left of arc ``a`` across a shared face."""
    la, ra = faces.sides(a)
    lb, rb = faces.sides(b)
    if la is None or lb is None or faces.piece[a] != faces.piece[b]:
        return 1
    if la in (lb, rb):
        return 1
    if ra in (lb, rb):
        return -1
    raise DiagramError(f"arcs {a} and {b} share no face; they cannot bound a twist box")


def instantiate_family(fam, n):
    """Expand every twist region into ``rule * |param(n)|`` full twists.

    Crossings inherit the sign of ``param(n)``; the regions stay recorded
    so that the crossings can be recognised later.
    """
    d = fam.template
    faces = Faces(d)
    sk = Sketch.from_diagram(d)
    owner = d.arc_owner()
    plan = []
    for r in sorted(d.twist_regions, key=lambda r: r.id):
        k = fam.rule * region_value(r.parameter, n)
        if k == 0:
            continue
        a, b = r.arcs
        side = r.side if r.side is not None else region_side(faces, a, b)
        ua = _end_visit(d, sk, a)
        ub = _end_visit(d, sk, b)
        plan.append((owner[a], ua, owner[b], ub, k, side, r.orientation == "parallel", r.id))
    for ca, ua, cb, ub, k, side, parallel, rid in plan:
        sk.add_twists(ca, ua, cb, ub, k, side, parallel, rid)
    out = require_valid(sk.to_diagram())
    if not Faces(out).is_planar():
        raise DiagramError(f"twist regions of the family are not planar at n = {n}")
    return out


def _end_visit(d, sk, arc):
    owner = d.arc_owner()
    cid = owner[arc]
    vs = sk.visits[cid]
    if not vs:
        return None
    return vs[d.component(cid).arcs.index(arc)].uid
