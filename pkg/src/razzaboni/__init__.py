"""Surfaces swept by Bertrand geodesics in Euclidean and Minkowski 3-space.

Modules: :mod:`lorentz` (metric algebra), :mod:`frenet` (curves and frames),
:mod:`gmc` (compatibility equations and their solver), :mod:`surface`
(synthesis and measurement), :mod:`transform` (normal-offset duality) and
:mod:`cli` (file-based front end).
"""
__version__ = "0.1.0"

from .errors import RazzaboniError
from .frenet import BertrandParams, Frame
from .gmc import BoundarySpec, GmcFields, GridSpec, Mode, solve
from .lorentz import SignatureCase, mcross, mdot
from .surface import SurfaceMesh, synthesize
from .transform import RazzaboniPair, certificate, razzaboni_transform

__all__ = [
    "BertrandParams", "BoundarySpec", "Frame", "GmcFields", "GridSpec", "Mode",
    "RazzaboniError", "RazzaboniPair", "SignatureCase", "SurfaceMesh",
    "certificate", "mcross", "mdot", "razzaboni_transform", "solve", "synthesize",
]
