"""Dotted/framed handle diagrams, their invariants and Kirby moves."""

from .diagram import (DOTTED, MARKED, TWO_HANDLE, Component, Crossing, DiagramError,
                      HandleDiagram, Passage, SurgeryDiagram, TwistRegion, ValidationReport,
                      load_diagram, validate_diagram)
from .groups import GroupPresentation, TietzeResult, pi1_presentation, tietze_simplify
from .linking import (AbelianGroupInvariants, boundary_surgery, determinant, first_homology,
                      handle_homology, linking_matrix, linking_number)
from .moves import (BandSpec, CancellationResult, detect_cancel_and_reduce, erase_component,
                    handle_slide, role_swap)
from .sketch import build_diagram

__all__ = [
    "AbelianGroupInvariants", "BandSpec", "CancellationResult", "Component", "Crossing",
    "DOTTED", "DiagramError", "GroupPresentation", "HandleDiagram", "MARKED", "Passage",
    "SurgeryDiagram", "TWO_HANDLE", "TietzeResult", "TwistRegion", "ValidationReport",
    "boundary_surgery", "build_diagram", "detect_cancel_and_reduce", "determinant",
    "erase_component", "first_homology", "handle_homology", "handle_slide", "linking_matrix",
    "linking_number", "load_diagram", "pi1_presentation", "role_swap", "tietze_simplify",
    "validate_diagram",
]
