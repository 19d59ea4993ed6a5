"""Numerical toolkit for the photon bundle over momentum space.

Global polarisation frames, helicity projectors, Chern numbers, the
Poincare action on fibers and the angular-momentum operator algebra.
"""

from .berry import chern, chern_analytic, chern_lattice, spin_chern
from .frames import equator_mismatch, frame_arrays, global_frame
from .geometry import (
    FiberVector,
    PhotonBundleError,
    SphereMesh,
    SphericalPoint,
    WaveVector,
    maxwell_matrix,
    maxwell_spectrum,
)
from .helicity import MINUS, PLUS, decompose_section, project_helicity, zero_constraint_scan
from .lorentz import LorentzTransform, boost_fiber, little_group_element, tensor_action, weinberg_L

__version__ = "0.1.0"

__all__ = [
    "FiberVector", "LorentzTransform", "MINUS", "PLUS", "PhotonBundleError", "SphereMesh", "SphericalPoint",
    "WaveVector", "boost_fiber", "chern", "chern_analytic", "chern_lattice", "decompose_section",
    "equator_mismatch", "frame_arrays", "global_frame", "little_group_element", "maxwell_matrix",
    "maxwell_spectrum", "project_helicity", "spin_chern", "tensor_action", "weinberg_L", "zero_constraint_scan",
]
