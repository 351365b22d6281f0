"""Cork constructions on handle diagrams and a hyperbolic verification kernel."""

__version__ = "0.1.0"
