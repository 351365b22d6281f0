"""Interval certification of hyperbolic structures (Krawczyk test).

Interval arithmetic comes from ``mpmath.iv``, which rounds outward in
software at 53 bits; no process-wide floating point mode is touched, so
certification is safe to run from several threads at once.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import iv

from .equations import evaluate, gluing_system, normalize_slopes

INFLATION = 2 ** 6
RETRY_INFLATION = 2 ** 10
# smallest residual used to size boxes; below this rounding dominates
RESIDUAL_FLOOR = 1e-13


@dataclass(frozen=True)
class Certificate:
    """``boxes[t] = ((re_lo, re_hi), (im_lo, im_hi))`` as exact doubles."""
    verified: bool
    slopes: tuple
    boxes: tuple = ()
    inflation: int = 0
    diagnostics: tuple = ()
    intervals: tuple = field(default=(), compare=False, repr=False)

    def to_dict(self):
        return {"verified": self.verified,
                "slopes": [None if s is None else list(s) for s in self.slopes],
                "boxes": [[list(re), list(im)] for re, im in self.boxes],
                "inflation": self.inflation, "diagnostics": list(self.diagnostics)}


def _ends(x):
    return float(x.a), float(x.b)


def _box_of(z):
    return (_ends(z.real), _ends(z.imag))


def _inside(k, x):
    """Interval ``k`` strictly inside ``x``."""
    return k.a > x.a and k.b < x.b


def _reduced_rows(system):
    """Integer coefficient rows ``(P | Q)`` and constants ``kappa`` with
    ``F_i = P_i Log z + Q_i Log(1-z) + i pi kappa_i``."""
    n = system.num_tetrahedra
    out = []
    for row, target in zip(system.rows, system.targets):
        p = [a - c for a, b, c in row]
        q = [c - b for a, b, c in row]
        kappa = sum(c for _, _, c in row) - 2 * target
        out.append((p + q, kappa))
    assert all(len(r) == 2 * n for r, _ in out)
    return out


def select_square(system):
    """Indices of ``n`` rows whose solutions solve the whole system, or
    ``None`` with a reason.  Every dropped row other than a longitude must
    be a rational combination of the kept rows with a matching constant."""
    n = system.num_tetrahedra
    reduced = _reduced_rows(system)
    # cusp rows first so that completeness or filling is always imposed
    # longitude rows of complete cusps follow from the meridian rows; they
    # are checked on the final boxes instead
    order = sorted((i for i in range(len(reduced)) if system.kinds[i] != "longitude"),
                   key=lambda i: system.kinds[i] == "edge")
    basis = []  # (pivot, vector, kappa, combination)
    kept = []
    dropped = []
    for i in order:
        vec = [Fraction(x) for x in reduced[i][0]]
        kap = Fraction(reduced[i][1])
        comb = {i: Fraction(1)}
        for pivot, bvec, bkap, bcomb in basis:
            if vec[pivot]:
                f = vec[pivot] / bvec[pivot]
                vec = [x - f * y for x, y in zip(vec, bvec)]
                kap -= f * bkap
                for k, v in bcomb.items():
                    comb[k] = comb.get(k, 0) - f * v
        pivot = next((j for j, x in enumerate(vec) if x), None)
        if pivot is None:
            if kap != 0:
                return None, f"row {i} is inconsistent with the others"
            dropped.append(i)
        else:
            basis.append((pivot, vec, kap, comb))
            kept.append(i)
    if len(kept) != n:
        return None, f"system has rank {len(kept)} for {n} tetrahedra"
    return sorted(kept), f"dropped dependent rows {dropped}"


def _interval_system(system, rows):
    red = _reduced_rows(system)
    n = system.num_tetrahedra
    return [(red[i][0][:n], red[i][0][n:], red[i][1]) for i in rows]


def _eval(isys, xs):
    one = iv.mpc(1, 0)
    logs = [iv.log(x) for x in xs]
    logs1 = [iv.log(one - x) for x in xs]
    out = []
    for p, q, kappa in isys:
        acc = iv.mpc(0, iv.pi * kappa)
        for t in range(len(xs)):
            if p[t]:
                acc += p[t] * logs[t]
            if q[t]:
                acc += q[t] * logs1[t]
        out.append(acc)
    return out


def _jac(isys, xs):
    one = iv.mpc(1, 0)
    inv = [one / x for x in xs]
    inv1 = [one / (one - x) for x in xs]
    return [[p[t] * inv[t] - q[t] * inv1[t] for t in range(len(xs))] for p, q, _ in isys]


def _krawczyk(isys, center, radius, y):
    """One Krawczyk test on boxes of ``radius`` about ``center``.  Returns
    (contained, boxes, images)."""
    n = len(center)
    spread = iv.mpf([-radius, radius])
    xs = [iv.mpc(iv.mpf(c.real) + spread, iv.mpf(c.imag) + spread) for c in center]
    mid = [iv.mpc(c.real, c.imag) for c in center]
    fmid = _eval(isys, mid)
    jx = _jac(isys, xs)
    yi = [[iv.mpc(y[i, k].real, y[i, k].imag) for k in range(n)] for i in range(n)]
    dx = [x - m for x, m in zip(xs, mid)]
    images = []
    for i in range(n):
        acc = mid[i]
        for k in range(n):
            acc -= yi[i][k] * fmid[k]
        for k in range(n):
            m_ik = iv.mpc(1 if i == k else 0, 0)
            for j in range(n):
                m_ik -= yi[i][j] * jx[j][k]
            acc += m_ik * dx[k]
        images.append(acc)
    ok = all(_inside(k.real, x.real) and _inside(k.imag, x.imag) for k, x in zip(images, xs))
    return ok, xs, images


def _longitudes_off(system, images):
    """Longitude rows of complete cusps must be enclosed in (-2 pi, 2 pi)
    around 0.  The meridian holonomy is then parabolic and the commuting
    longitude holonomy has log in 2 pi i Z, hence 0."""
    idx = [i for i, k in enumerate(system.kinds) if k == "longitude"]
    if not idx:
        return []
    vals = _eval(_interval_system(system, idx), images)
    bound = 2 * math.pi
    bad = []
    for i, v in zip(idx, vals):
        parts = (v.real, v.imag)
        if not all(x.a <= 0 <= x.b and x.a > -bound and x.b < bound for x in parts):
            bad.append(i)
    return bad


def certify_geometric(tri, slopes, shapes, inflations=(INFLATION, RETRY_INFLATION)):
    """Krawczyk test around ``shapes``.  Verified iff the test proves a
    unique solution in the boxes and every box lies in the upper half
    plane; anything else returns an unverified certificate."""
    slopes = normalize_slopes(tri, slopes)
    system = gluing_system(tri, slopes)
    center = [complex(z) for z in shapes]
    diag = []
    if len(center) != tri.num_tetrahedra:
        return Certificate(False, slopes, diagnostics=("wrong number of shapes",))
    if any(not math.isfinite(z.real) or not math.isfinite(z.imag) for z in center):
        return Certificate(False, slopes, diagnostics=("shapes are not finite",))
    rows, why = select_square(system)
    if rows is None:
        return Certificate(False, slopes, diagnostics=(why,))
    isys = _interval_system(system, rows)
    residual = float(np.abs(evaluate(system, center)).max())
    diag.append(f"residual {residual:.3e}")
    jac = np.array([[complex(v.real.mid, v.imag.mid) for v in row]
                    for row in _jac(isys, [iv.mpc(z.real, z.imag) for z in center])])
    try:
        y = np.linalg.inv(jac)
    except np.linalg.LinAlgError:
        return Certificate(False, slopes, diagnostics=tuple(diag + ["singular Jacobian"]))
    for k, factor in enumerate(inflations):
        radius = factor * max(residual, RESIDUAL_FLOOR)
        ok, xs, images = _krawczyk(isys, center, radius, y)
        boxes = tuple(_box_of(x) for x in xs)
        if not ok:
            diag.append(f"Krawczyk image not inside the boxes at inflation {factor}")
            continue
        if not all(x.imag.a > 0 for x in xs):
            diag.append("a box meets or lies below the real axis")
            return Certificate(False, slopes, boxes, factor, tuple(diag))
        bad = _longitudes_off(system, images)
        if bad:
            diag.append(f"longitude rows {bad} are not enclosed near 0")
            return Certificate(False, slopes, boxes, factor, tuple(diag))
        return Certificate(True, slopes, boxes, factor, tuple(diag), tuple(images))
    return Certificate(False, slopes, boxes, inflations[-1], tuple(diag))


def certified_shapes(cert):
    """Interval shapes proven to contain the solution."""
    if not cert.verified:
        raise ValueError("certificate is not verified")
    return list(cert.intervals)
