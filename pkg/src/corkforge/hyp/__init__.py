"""Hyperbolic geometry of ideal triangulations: shapes, certification,
volumes, core geodesics and combinatorial symmetries."""

from .canonical import CANONICAL, INDETERMINATE, NOT_CANONICAL, canonical_verify, face_tilt_sums
from .certify import Certificate, certify_geometric
from .equations import (COMPLETE, ConvergenceError, CoreGeodesic, GluingSystem,
                        SingularJacobianError, bloch_wigner, core_length, curve_holonomy,
                        gluing_system, solve_shapes, volume)
from .report import (certify_report, mcg_bound_report, solve_report, sweep_fillings,
                     symmetries_report)
from .symmetries import IsometryGroup, Isomorphism, automorphisms, isomorphisms
from .triangulation import (IdealTriangulation, TriangulationError, from_snappea,
                            parse_triangulation, serialize)


def load_triangulation(path):
    with open(path) as fh:
        return parse_triangulation(fh.read())


def builtin_triangulation(name):
    from ..resources import read_data
    return parse_triangulation(read_data(name))


__all__ = [
    "CANONICAL", "COMPLETE", "Certificate", "ConvergenceError", "CoreGeodesic", "GluingSystem",
    "INDETERMINATE", "IdealTriangulation", "IsometryGroup", "Isomorphism", "NOT_CANONICAL",
    "SingularJacobianError", "TriangulationError", "automorphisms", "bloch_wigner",
    "builtin_triangulation", "canonical_verify", "certify_geometric", "certify_report",
    "core_length", "curve_holonomy", "face_tilt_sums", "from_snappea", "gluing_system",
    "isomorphisms", "load_triangulation", "mcg_bound_report", "parse_triangulation",
    "serialize", "solve_report", "solve_shapes", "sweep_fillings", "symmetries_report",
    "volume",
]
