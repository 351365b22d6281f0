"""Gluing and completeness equations, Newton solving and volumes.

Every equation is a row of integer exponents ``(a, b, c)`` per tetrahedron
for ``log z``, ``log z' = log(1/(1-z))`` and ``log z'' = log((z-1)/z)``,
with target ``k * 2 pi i``.  For shapes in the upper half plane
``log z' = -Log(1-z)`` and ``log z'' = Log(1-z) - Log z + i pi``, so a row
evaluates as ``sum (a-c) Log z + (c-b) Log(1-z) + i pi c``; the same
analytic expression is used everywhere, which keeps Newton's method and
the interval test consistent.
"""

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .triangulation import EDGE_SHAPE, TriangulationError, perm_sign

COMPLETE = None

DEFAULT_TOL = 1e-12
MAX_ITER = 100
MAX_HALVINGS = 30


class ConvergenceError(RuntimeError):
    """Newton's method failed to converge."""


class SingularJacobianError(ConvergenceError):
    """The Jacobian is numerically singular."""


def default_start(n):
    return [cmath.exp(1j * math.pi / 3)] * n


# -- peripheral holonomy -------------------------------------------------------

def _flow(a, b):
    """Number of strands crossing the corner from side ``a`` to side ``b``."""
    if a > 0 and b < 0:
        return min(a, -b)
    if a < 0 and b > 0:
        return -min(-a, b)
    return 0


def holonomy_row(tri, curve):
    """Exponent row of the log-holonomy of a peripheral curve."""
    n = tri.num_tetrahedra
    row = [[0, 0, 0] for _ in range(n)]
    for t in range(n):
        for v in range(4):
            w = curve[t][v]
            if not any(w):
                continue
            sides = [f for f in range(4) if f != v]
            for i, f in enumerate(sides):
                for g in sides[i + 1:]:
                    x = _flow(w[f], w[g])
                    if not x:
                        continue
                    corner = next(u for u in range(4) if u not in (v, f, g))
                    # turning left around the corner adds the corner angle
                    sign = -perm_sign((v, f, g, corner))
                    row[t][EDGE_SHAPE[tuple(sorted((v, corner)))]] += sign * x
    return [tuple(r) for r in row]


def edge_rows(tri):
    out = []
    for members in tri.edge_classes():
        row = [[0, 0, 0] for _ in range(tri.num_tetrahedra)]
        for t, e in members:
            row[t][EDGE_SHAPE[e]] += 1
        out.append([tuple(r) for r in row])
    return out


# -- the system ----------------------------------------------------------------

def normalize_slopes(tri, slopes):
    """One entry per cusp: ``None`` for complete or a coprime pair."""
    if slopes is None:
        slopes = [COMPLETE] * tri.num_cusps
    slopes = list(slopes)
    if len(slopes) != tri.num_cusps:
        raise ValueError(f"{tri.num_cusps} cusps but {len(slopes)} slopes")
    out = []
    for s in slopes:
        if s is None:
            out.append(None)
            continue
        p, q = (int(x) for x in s)
        if math.gcd(p, q) != 1:
            raise ValueError(f"slope ({p}, {q}) is not primitive")
        out.append((p, q))
    return tuple(out)


@dataclass(frozen=True)
class GluingSystem:
    """Rows of exponent triples with targets ``k * 2 pi i``.  ``kinds``
    labels each row: ``edge``, ``meridian``, ``longitude`` or ``filling``."""
    num_tetrahedra: int
    rows: tuple
    targets: tuple
    kinds: tuple
    slopes: tuple = field(default=())

    def matrices(self):
        """``(A, B, C)`` integer arrays with the rows' ``a``, ``b`` and ``c``
        columns, and ``const`` the complex constant ``i pi sum c - target``."""
        arr = np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.num_tetrahedra, 3)
        a, b, c = arr[:, :, 0], arr[:, :, 1], arr[:, :, 2]
        const = 1j * math.pi * c.sum(axis=1) - 2j * math.pi * np.array(self.targets)
        return a - c, c - b, const

    def residual(self, shapes):
        return np.abs(evaluate(self, shapes)).max()


def gluing_system(tri, slopes=None):
    """Edge equations, then per cusp the two completeness rows or the single
    filling row ``p M + q L = 2 pi i``."""
    slopes = normalize_slopes(tri, slopes)
    rows, targets, kinds = [], [], []
    for r in edge_rows(tri):
        rows.append(tuple(r))
        targets.append(1)
        kinds.append("edge")
    for (mer, lon), s in zip(tri.cusps, slopes):
        m, lo = holonomy_row(tri, mer), holonomy_row(tri, lon)
        if s is None:
            rows += [tuple(m), tuple(lo)]
            targets += [0, 0]
            kinds += ["meridian", "longitude"]
        else:
            p, q = s
            rows.append(tuple(tuple(p * x + q * y for x, y in zip(mt, lt))
                              for mt, lt in zip(m, lo)))
            targets.append(1)
            kinds.append("filling")
    return GluingSystem(tri.num_tetrahedra, tuple(rows), tuple(targets), tuple(kinds), slopes)


def log_terms(shapes):
    z = np.asarray(shapes, dtype=complex)
    return np.log(z), np.log(1 - z)


def evaluate(system, shapes):
    """Row values minus targets (complex vector)."""
    p, q, const = system.matrices()
    lz, l1 = log_terms(shapes)
    return p @ lz + q @ l1 + const


def jacobian(system, shapes):
    p, q, _ = system.matrices()
    z = np.asarray(shapes, dtype=complex)
    return p * (1 / z) - q * (1 / (1 - z))


def solve_shapes(system, start=None, tol=DEFAULT_TOL, max_iter=MAX_ITER):
    """Damped Gauss-Newton on the log equations.  Returns
    ``(shapes, info)`` with ``info`` holding the iteration count and the
    final residual max-norm."""
    n = system.num_tetrahedra
    z = np.array(default_start(n) if start is None else start, dtype=complex)
    if z.shape != (n,):
        raise ValueError(f"start needs {n} shapes")
    if np.any(z == 0) or np.any(z == 1):
        raise ValueError("start shapes must avoid 0 and 1")
    res = system.residual(z)
    for it in range(max_iter + 1):
        if res < tol:
            return [complex(x) for x in z], {"iterations": it, "residual": float(res)}
        if it == max_iter:
            break
        jac = jacobian(system, z)
        sv = np.linalg.svd(jac, compute_uv=False)
        if sv[-1] <= sv[0] * 1e-13:
            raise SingularJacobianError(f"singular Jacobian at iteration {it}")
        step = np.linalg.lstsq(jac, -evaluate(system, z), rcond=None)[0]
        t = 1.0
        for _ in range(MAX_HALVINGS):
            cand = z + t * step
            if not (np.any(cand == 0) or np.any(cand == 1)):
                new = system.residual(cand)
                if np.isfinite(new) and new < res:
                    break
            t /= 2
        else:
            raise ConvergenceError(f"damping failed at iteration {it}, residual {res:.3g}")
        z, res = cand, new
    raise ConvergenceError(f"no convergence in {max_iter} iterations, residual {res:.3g}")


# -- volume and holonomy -------------------------------------------------------

def bloch_wigner(z):
    """``D(z) = Im Li2(z) + arg(1 - z) log|z|``."""
    z = complex(z)
    if z == 0 or z == 1:
        raise ValueError("Bloch-Wigner function needs z outside {0, 1}")
    li2 = complex(mpmath.polylog(2, z))
    return li2.imag + cmath.phase(1 - z) * math.log(abs(z))


def volume(shapes):
    return float(sum(bloch_wigner(z) for z in shapes))


def curve_holonomy(tri, curve, shapes):
    """Complex log-holonomy of a peripheral curve."""
    sys = GluingSystem(tri.num_tetrahedra, (tuple(holonomy_row(tri, curve)),), (0,), ("curve",))
    return complex(evaluate(sys, shapes)[0])


def _complement(p, q):
    """``(r, s)`` with ``p s - q r = 1``."""
    def egcd(a, b):
        if b == 0:
            return a, 1, 0
        g, x, y = egcd(b, a % b)
        return g, y, x - (a // b) * y
    g, x, y = egcd(p, q)
    # p x + q y = g = +-1
    s, r = x * g, -y * g
    return r, s


@dataclass(frozen=True)
class CoreGeodesic:
    cusp: int
    complex_length: complex
    complement: tuple

    @property
    def real_length(self):
        return self.complex_length.real

    def to_dict(self):
        return {"cusp": self.cusp, "real_length": self.real_length,
                "torsion": self.complex_length.imag, "complement": list(self.complement)}


def core_length(tri, slopes, shapes, cusp, complement=None):
    """Complex length of the core of the filled solid torus at ``cusp``."""
    slopes = normalize_slopes(tri, slopes)
    if slopes[cusp] is None:
        raise ValueError(f"cusp {cusp} is not filled")
    p, q = slopes[cusp]
    r, s = complement if complement is not None else _complement(p, q)
    if abs(p * s - q * r) != 1:
        raise ValueError(f"({r}, {s}) is not a complement of ({p}, {q})")
    mer, lon = tri.cusps[cusp]
    hm, hl = curve_holonomy(tri, mer, shapes), curve_holonomy(tri, lon, shapes)
    length = r * hm + s * hl
    if length.real < 0:
        length = -length
    torsion = math.remainder(length.imag, 2 * math.pi)
    if torsion == -math.pi:
        torsion = math.pi
    return CoreGeodesic(cusp, complex(length.real, torsion), (r, s))


def check_triangulation_shapes(tri, shapes):
    if len(shapes) != tri.num_tetrahedra:
        raise TriangulationError(f"{tri.num_tetrahedra} tetrahedra but {len(shapes)} shapes")
