"""Symmetric doubles, twist families and non-extension proof traces."""

from .double import (Clasp, PairedTwist, ReasonablyNiceCertificate, TangleModification,
                     check_contractible, derive_partner, symmetric_double)
from .family import LinearForm, TwistFamily, instantiate_family
from .library import akbulut_cork, meridian_of
from .proof import ProofTrace, proof_trace_chiral, proof_trace_nonstrong
from .symmetry import MIRROR, ROTATION, DiagramSymmetry, apply_symmetry, rotate_mirror
