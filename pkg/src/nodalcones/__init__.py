"""Exact lattice computations for hyperkaehler fourfolds of K3^[2] type.

Nodal classes, predicted ample cones, Weyl chambers and the scroll
arithmetic of special cubic fourfolds, all in integer and rational arithmetic.
"""

__version__ = "0.1.0"
