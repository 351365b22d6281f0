"""Random valid handle diagrams, drawn as closed braids.

Used by property tests and the invariant cross-checks.  A component made of
a single braid strand has no self-crossings, so it may be dotted (when it
meets no other dotted strand); its disk passages are read off the diagram.
"""

import random as _random
from dataclasses import replace

from .diagram import DOTTED, MARKED, TWO_HANDLE, require_valid
from .planar import disk_passages
from .sketch import build_diagram


def random_braid(rng, strands, length):
    word = []
    for _ in range(length):
        i = rng.randrange(strands - 1)
        word.append((i, rng.choice((1, -1))))
    return word


def braid_closure_visits(strands, word):
    """Visit sequences of the components of a braid closure.

    Returns ``(components, signs)`` where components is a list of
    ``(strand_list, visits)``; strand ``s`` starts at position ``s``.
    """
    pos = list(range(strands))  # pos[p] = strand at position p
    per_strand = {s: [] for s in range(strands)}
    signs = {}
    for label, (i, e) in enumerate(word):
        a, b = pos[i], pos[i + 1]
        # strands run downwards; a positive crossing has the strand moving
        # right passing under
        over_a = e < 0
        per_strand[a].append((label, "o" if over_a else "u"))
        per_strand[b].append((label, "u" if over_a else "o"))
        signs[label] = e
        pos[i], pos[i + 1] = b, a
    end = {s: p for p, s in enumerate(pos)}
    seen, comps = set(), []
    for s in range(strands):
        if s in seen:
            continue
        cycle, t = [], s
        while t not in seen:
            seen.add(t)
            cycle.append(t)
            t = end[t]
        visits = [v for t in cycle for v in per_strand[t]]
        comps.append((cycle, visits))
    return comps, signs


def random_diagram(seed=None, max_components=6, max_crossings=20, swappable=False,
                   dotted_prob=0.5, marked_prob=0.1):
    """A random valid diagram.

    With ``swappable`` the result has a 0-framed single-strand 2-handle
    (named ``"s"``) that satisfies the role-swap preconditions against some
    dotted circle (named ``"d"``).
    """
    rng = seed if isinstance(seed, _random.Random) else _random.Random(seed)
    strands = rng.randint(2 if swappable else 1, max_components)
    length = rng.randint(0, max_crossings) if strands > 1 else 0
    word = random_braid(rng, strands, length) if strands > 1 else []
    comps, signs = braid_closure_visits(strands, word)
    labels_of = [{lab for lab, _ in visits} for _, visits in comps]
    single = [k for k, (cycle, _) in enumerate(comps) if len(cycle) == 1]

    def touches(k, others):
        return any(labels_of[k] & labels_of[m] for m in others)

    roles = {}
    dotted = []
    if swappable:
        if len(single) < 2:
            return random_diagram(rng, max_components, max_crossings, swappable,
                                  dotted_prob, marked_prob)
        d0, s0 = rng.sample(single, 2)
        roles[d0] = DOTTED
        roles[s0] = TWO_HANDLE
        dotted.append(d0)
    for k in single:
        if k in roles:
            continue
        blocked = dotted + ([s0] if swappable else [])
        if rng.random() < dotted_prob and not touches(k, blocked):
            roles[k] = DOTTED
            dotted.append(k)
    for k in range(len(comps)):
        if k not in roles:
            roles[k] = MARKED if rng.random() < marked_prob else TWO_HANDLE

    names = {}
    for k in range(len(comps)):
        if swappable and k == d0:
            names[k] = "d"
        elif swappable and k == s0:
            names[k] = "s"
        else:
            names[k] = f"c{k}"
    framing = {}
    for k in range(len(comps)):
        if roles[k] == TWO_HANDLE:
            framing[k] = 0 if (swappable and k == s0) else rng.randint(-3, 3)
        else:
            framing[k] = None

    components = [(names[k], roles[k], framing[k], visits) for k, (_, visits) in enumerate(comps)]
    d = build_diagram(components, signs)
    circles = [names[k] for k in dotted] + ([names[s0]] if swappable else [])
    side = rng.choice(("left", "right"))
    d = replace(d, passages={c: tuple(disk_passages(d, c, side)) for c in circles})
    require_valid(d)
    return d


def random_slide(d, rng):
    """Slide a random 2-handle over another along a random band.

    Bands join arcs sharing a face where possible, otherwise they follow the
    shortest face path.  Returns ``(diagram, (slider, over, band))`` or
    ``None`` when the diagram has fewer than two 2-handles.
    """
    from .diagram import DiagramError
    from .moves import BandSpec, _disk_band, handle_slide
    from .planar import Faces

    twos = [c for c in d.components if c.role == TWO_HANDLE]
    if len(twos) < 2:
        return None
    faces = Faces(d)
    pairs = [(a, b) for a in twos for b in twos if a.id != b.id]
    rng.shuffle(pairs)
    tries = [(a, b, x, y) for a, b in pairs for x in a.arcs for y in b.arcs]
    rng.shuffle(tries)
    for a, b, x, y in tries[:64]:
        shared = set(faces.sides(x)) & set(faces.sides(y)) - {None}
        sign = rng.choice((1, -1))
        try:
            path = () if shared or faces.sides(x)[0] is None else \
                _disk_band(d, a.id, a.id, b.id, x, y)
            band = BandSpec(x, y, sign, crossings=path)
            return handle_slide(d, a.id, b.id, band), (a.id, b.id, band)
        except DiagramError:
            continue
    return None
