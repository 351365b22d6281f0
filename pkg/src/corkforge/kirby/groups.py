"""Group presentations: Wirtinger-style pi_1 of handle diagrams and a
greedy Tietze simplifier.

Words are tuples of non-zero integers; ``k`` stands for generator ``k - 1``
and ``-k`` for its inverse.
"""

from dataclasses import dataclass, field

from .diagram import DOTTED, DiagramError, require_valid
from .linking import AbelianGroupInvariants, cokernel

DEFAULT_BUDGET = 100_000


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def inverse(word):
    return tuple(-x for x in reversed(word))


def _canonical_cyclic(word):
    """Lexicographically least cyclic rotation of a word or its inverse."""
    if not word:
        return word
    cands = []
    for w in (word, inverse(word)):
        cands.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(cands, key=lambda w: (len(w), w))


@dataclass(frozen=True)
class GroupPresentation:
    num_generators: int
    relators: tuple = ()

    def __post_init__(self):
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.num_generators:
                    raise DiagramError(f"relator letter {x} out of range")

    def reduced(self):
        return GroupPresentation(self.num_generators,
                                 tuple(r for r in (free_reduce(r) for r in self.relators) if r))

    def abelianization(self):
        rows = []
        for r in self.relators:
            row = [0] * self.num_generators
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return cokernel(rows, self.num_generators)

    def to_dict(self):
        return {"generators": self.num_generators,
                "relators": [list(r) for r in self.relators]}

    def __str__(self):
        letters = "abcdefghijklmnopqrstuvwxyz"

        def name(x):
            g = abs(x) - 1
            s = letters[g] if g < 26 else f"x{g}"
            return s if x > 0 else s.upper() if g < 26 else s + "^-1"
        gens = ", ".join(name(k + 1) for k in range(self.num_generators))
        rels = ", ".join("".join(name(x) for x in r) or "1" for r in self.relators)
        return f"<{gens} | {rels}>"


@dataclass
class TietzeResult:
    presentation: GroupPresentation
    trivial: bool
    status: str  # 'trivial', 'simplified' or 'inconclusive'
    steps: int
    abelianization: AbelianGroupInvariants
    history: list = field(default_factory=list)

    @property
    def obstruction(self):
        """Non-trivial abelianization proves the group non-trivial."""
        return None if self.abelianization.trivial else self.abelianization

    def to_dict(self):
        return {"trivial": self.trivial, "status": self.status, "steps": self.steps,
                "presentation": self.presentation.to_dict(),
                "abelianization": self.abelianization.to_dict()}


def wirtinger_generators(d):
    """Map arc id -> over-arc (Wirtinger generator) index.

    Arcs joined by passing over a crossing belong to the same over-arc.
    """
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in d.components:
        for a in c.arcs:
            parent[a] = a
    for x in d.crossings:
        ra, rb = find(x.over_in), find(x.over_out)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(a) for a in parent})
    index = {r: k for k, r in enumerate(roots)}
    return {a: index[find(a)] for a in parent}


def pi1_presentation(d):
    """Presentation of pi_1 of the 4-manifold described by a handle diagram.

    Generators are the over-arcs of the whole link.  Relators are one
    Wirtinger relation per crossing, one meridian of every non-dotted
    component (filling it back in) and one longitude word per 2-handle.
    """
    require_valid(d)
    gen = wirtinger_generators(d)
    n = max(gen.values()) + 1 if gen else 0
    at_end = {}
    for x in d.crossings:
        at_end[x.under_in] = x
    rels = []
    for x in d.crossings:
        o, a, b = gen[x.over_in] + 1, gen[x.under_in] + 1, gen[x.under_out] + 1
        # x_out = o^s x_in o^-s
        s = x.sign
        rels.append(free_reduce((b, o * s, -a, -o * s)))
    for c in d.components:
        if c.role == DOTTED:
            continue
        rels.append((gen[c.arcs[0]] + 1,))
        if c.role != "twohandle":
            continue
        word = []
        for a in c.arcs:
            x = at_end.get(a)
            if x is not None:
                word.insert(0, (gen[x.over_in] + 1) * x.sign)
        rels.append(free_reduce(word))
    return GroupPresentation(n, tuple(r for r in rels if r))


def tietze_simplify(p, budget=DEFAULT_BUDGET, record=False):
    """Simplify a presentation by Tietze moves.

    Moves used: free and cyclic reduction, deletion of empty and duplicate
    relators, elimination of a generator occurring exactly once in some
    relator (shortest such relator first, ties broken lexicographically), and
    shortening a relator by substituting more than half of another relator.
    A non-trivial result is never a proof of non-triviality.  With
    ``record`` the history lists ``(move, argument, presentation)`` after
    every step.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    ngens = p.num_generators
    rels = [cyclic_reduce(r) for r in p.relators]
    alive = list(range(1, ngens + 1))
    steps = 0
    history = []
    ab0 = p.abelianization()

    def tidy(rels):
        seen, out = set(), []
        for r in rels:
            r = cyclic_reduce(r)
            if not r:
                continue
            key = _canonical_cyclic(r)
            if key not in seen:
                seen.add(key)
                out.append(r)
        return out

    def snapshot():
        renum = {g: k + 1 for k, g in enumerate(alive)}
        return GroupPresentation(len(alive), tuple(
            tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r) for r in rels))

    rels = tidy(rels)
    exhausted = False
    while True:
        if steps >= budget:
            exhausted = True
            break
        elim = _find_elimination(rels)
        if elim is not None:
            k, g, solution = elim
            rels = tidy([_substitute(r, g, solution) for i, r in enumerate(rels) if i != k])
            alive.remove(g)
            steps += 1
            if record:
                history.append(("eliminate", g, snapshot()))
            continue
        shorter = _find_shortening(rels)
        if shorter is not None:
            i, new = shorter
            rels[i] = new
            rels = tidy(rels)
            steps += 1
            if record:
                history.append(("substitute", i, snapshot()))
            continue
        break

    renum = {g: k + 1 for k, g in enumerate(alive)}
    out_rels = tuple(tuple((renum[abs(x)]) * (1 if x > 0 else -1) for x in r) for r in rels)
    out = GroupPresentation(len(alive), tuple(sorted(out_rels, key=lambda r: (len(r), r))))
    ab = out.abelianization()
    if ab != ab0:
        raise AssertionError("Tietze simplification changed the abelianization")
    trivial = out.num_generators == 0
    if trivial:
        status = "trivial"
    elif exhausted:
        status = "inconclusive"
    else:
        status = "simplified"
    return TietzeResult(out, trivial, status, steps, ab, history)


def _find_elimination(rels):
    best = None
    for k, r in enumerate(rels):
        counts = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        for g in sorted(g for g, c in counts.items() if c == 1):
            key = (len(r), r, g)
            if best is None or key < best[0]:
                best = (key, k, g)
    if best is None:
        return None
    _, k, g = best
    r = rels[k]
    i = next(i for i, x in enumerate(r) if abs(x) == g)
    # r = u g^e v  =>  g^e = u^-1 v^-1  (as r rotated: g^e v u = 1)
    rest = r[i + 1:] + r[:i]
    e = r[i]
    solution = inverse(rest) if e > 0 else rest
    return k, g, solution


def _substitute(word, g, solution):
    out = []
    for x in word:
        if x == g:
            out.extend(solution)
        elif x == -g:
            out.extend(inverse(solution))
        else:
            out.append(x)
    return free_reduce(out)


def _find_shortening(rels, max_len=60):
    """Find relator i containing more than half of a cyclic conjugate of
    relator j (or its inverse); replace that part by the shorter remainder."""
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), rels[i]))
    for j in order:
        s = rels[j]
        n = len(s)
        if n > max_len:
            break
        conj = set()
        for w in (s, inverse(s)):
            conj.update(w[t:] + w[:t] for t in range(n))
        for i in order:
            if i == j or len(rels[i]) < n // 2 + 1:
                continue
            r = rels[i]
            doubled = r + r
            for c in sorted(conj):
                for ln in range(n, n // 2, -1):
                    u = c[:ln]
                    rest = c[ln:]
                    if 2 * ln <= n:
                        break
                    pos = _find_sub(doubled, u, len(r))
                    if pos is None:
                        continue
                    rotated = r[pos:] + r[:pos]
                    new = cyclic_reduce(inverse(rest) + rotated[ln:])
                    if len(new) < len(r):
                        return i, new
    return None


def _find_sub(doubled, u, n):
    k = len(u)
    if k > n:
        return None
    for pos in range(n):
        if doubled[pos:pos + k] == u:
            return pos
    return None
