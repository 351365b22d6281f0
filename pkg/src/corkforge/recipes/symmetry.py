"""Diagram symmetries: rotation about an in-page axis and mirroring.

On planar diagram data a rotation by 180 degrees about a vertical line in
the page reflects the layout and exchanges over and under strands; crossing
signs are unchanged.  Mirroring exchanges over and under only, which
negates every sign.
"""

from dataclasses import dataclass, field, replace
from math import gcd

from ..kirby.diagram import Crossing, DiagramError, HandleDiagram, Passage, require_valid
from .family import LinearForm

ROTATION = "rotation_about_vertical_axis"
MIRROR = "mirror"
KINDS = (ROTATION, MIRROR)


@dataclass(frozen=True)
class DiagramSymmetry:
    """A map of diagram data: component, arc and twist-region relabelling
    plus the crossing change of the given kind.  ``crossings[i]`` is the
    index in the target of the image of crossing ``i``."""
    kind: str
    components: dict
    arcs: dict
    crossings: tuple = ()
    regions: dict = field(default_factory=dict)
    order: int = 1

    def apply(self, d):
        return apply_symmetry(self, d)

    def to_dict(self):
        return {"kind": self.kind, "order": self.order,
                "components": dict(sorted(self.components.items())),
                "arcs": {str(k): v for k, v in sorted(self.arcs.items())},
                "crossings": list(self.crossings),
                "regions": dict(sorted(self.regions.items()))}


def _perm_order(mapping):
    order, seen = 1, set()
    for start in mapping:
        if start in seen:
            continue
        n, x = 0, start
        while True:
            seen.add(x)
            x = mapping[x]
            n += 1
            if x == start:
                break
            if n > len(mapping):
                raise DiagramError("map is not a permutation")
        order = order * n // gcd(order, n)
    return order


def _negate(param):
    if isinstance(param, int):
        return -param
    return str(-LinearForm.parse(param))


def apply_symmetry(sym, d):
    """Image of ``d`` under ``sym``; roles and framings travel with their
    components."""
    comp_map, arc_map = sym.components, sym.arcs
    sign_factor = -1 if sym.kind == MIRROR else 1
    comps = []
    for c in d.components:
        comps.append(replace(c, id=comp_map.get(c.id, c.id),
                             arcs=tuple(arc_map.get(a, a) for a in c.arcs)))
    crossings = []
    for x in d.crossings:
        crossings.append(Crossing(arc_map.get(x.under_in, x.under_in),
                                  arc_map.get(x.under_out, x.under_out),
                                  arc_map.get(x.over_in, x.over_in),
                                  arc_map.get(x.over_out, x.over_out),
                                  sign_factor * x.sign,
                                  sym.regions.get(x.region, x.region)))
    passages = {}
    for did, plist in d.passages.items():
        passages[comp_map.get(did, did)] = tuple(
            Passage(comp_map.get(p.component, p.component), sign_factor * p.sign,
                    None if p.arc is None else arc_map.get(p.arc, p.arc))
            for p in plist)
    regions = []
    for r in d.twist_regions:
        param = r.parameter if sym.kind == ROTATION else _negate(r.parameter)
        arcs = tuple(arc_map.get(a, a) for a in r.arcs)
        if sym.regions.get(r.id, r.id) == r.id and arcs == r.arcs[::-1]:
            # a box exchanged with itself keeps its recorded arc order
            arcs = r.arcs
        # a reflected layout puts the second arc on the other side
        side = None if r.side is None else (-r.side if sym.kind == ROTATION else r.side)
        if arcs != tuple(arc_map.get(a, a) for a in r.arcs) and side is not None:
            side = -side
        regions.append(replace(r, id=sym.regions.get(r.id, r.id), arcs=arcs,
                               parameter=param, side=side))
    return HandleDiagram(tuple(comps), tuple(crossings), passages, tuple(regions), d.name)


def crossing_permutation(sym, source, target):
    """Index map from crossings of ``source`` to crossings of ``target``."""
    image = apply_symmetry(sym, source)
    where = {(x.over_in, x.under_in): i for i, x in enumerate(target.crossings)}
    try:
        return tuple(where[(x.over_in, x.under_in)] for x in image.crossings)
    except KeyError as exc:
        raise DiagramError("symmetry does not map crossings onto crossings") from exc


def is_automorphism(sym, d):
    return apply_symmetry(sym, d) == d


def rotate_mirror(d, kind):
    """Rotate ``d`` about a vertical in-page axis or mirror it.

    Returns the image diagram and the symmetry carrying ``d`` to it.  Ids
    of components, arcs and regions are kept, so the relabelling parts of
    the symmetry are identities.
    """
    require_valid(d)
    if kind not in KINDS:
        raise DiagramError(f"unknown symmetry kind {kind!r}")
    comp_map = {c.id: c.id for c in d.components}
    arc_map = {a: a for c in d.components for a in c.arcs}
    sym = DiagramSymmetry(kind, comp_map, arc_map,
                          regions={r.id: r.id for r in d.twist_regions})
    out = apply_symmetry(sym, d)
    sym = replace(sym, crossings=crossing_permutation(sym, d, out),
                  order=_perm_order(arc_map) if arc_map else 1)
    return out, sym


def symmetry_between(kind, comp_map, source, target):
    """Symmetry of the given kind sending ``source`` to ``target`` that maps
    component ``c`` to ``comp_map[c]`` arc by arc in traversal order."""
    arc_map = {}
    for c in source.components:
        img = target.component(comp_map.get(c.id, c.id))
        if len(img.arcs) != len(c.arcs):
            raise DiagramError(f"{c.id} and {img.id} have different arc counts")
        arc_map.update(zip(c.arcs, img.arcs))
    regions = {}
    tregions = {r.arcs: r.id for r in target.twist_regions}
    for r in source.twist_regions:
        key = tuple(arc_map[a] for a in r.arcs)
        rid = tregions.get(key) or tregions.get(key[::-1])
        if rid is None:
            raise DiagramError(f"twist region {r.id} has no image")
        regions[r.id] = rid
    sym = DiagramSymmetry(kind, dict(comp_map), arc_map, regions=regions)
    sym = replace(sym, crossings=crossing_permutation(sym, source, target))
    full = dict(arc_map)
    return replace(sym, order=_perm_order(full) if full else 1)


def relabel(d, offset, suffix):
    """Rename components and regions with ``suffix`` and shift arc ids."""
    comps = tuple(replace(c, id=c.id + suffix, arcs=tuple(a + offset for a in c.arcs))
                  for c in d.components)
    crossings = tuple(replace(x, over_in=x.over_in + offset, over_out=x.over_out + offset,
                              under_in=x.under_in + offset, under_out=x.under_out + offset,
                              region=None if x.region is None else x.region + suffix)
                      for x in d.crossings)
    passages = {k + suffix: tuple(replace(p, component=p.component + suffix,
                                          arc=None if p.arc is None else p.arc + offset)
                                  for p in v)
                for k, v in d.passages.items()}
    regions = tuple(replace(r, id=r.id + suffix, arcs=tuple(a + offset for a in r.arcs))
                    for r in d.twist_regions)
    return HandleDiagram(comps, crossings, passages, regions, d.name)


def disjoint_union(a, b, name):
    passages = dict(a.passages)
    passages.update(b.passages)
    return HandleDiagram(a.components + b.components, a.crossings + b.crossings,
                         passages, a.twist_regions + b.twist_regions, name)
