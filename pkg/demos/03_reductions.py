"""The Euclidean system and its single-equation reductions.

With B = 0 the geodesics have constant curvature and the torsion obeys a
third-order dispersive flow; with A = 0 the torsion is constant and the
potential theta (kappa = theta_u, lambda = -theta_v/2) obeys a second
reduced equation.  Both residuals are evaluated with fourth-order stencils on
solver output, so they expose the solver's second-order error.
"""
import numpy as np

from razzaboni.frenet import BertrandParams
from razzaboni.gmc import (
    BoundarySpec,
    GridSpec,
    Mode,
    reduction_residual_dym,
    reduction_residual_theta,
    residual_norm,
    solve,
    theta_from_fields,
)
from razzaboni.lorentz import SignatureCase

E = SignatureCase.EUCLIDEAN

print("constant curvature (B = 0), tau(u, 0) = 1 + 0.1 sin u on a periodic grid")
prev = None
for Nu, Nv in [(64, 16), (128, 32), (256, 64)]:
    g = GridSpec(0, 2 * np.pi, Nu, 0, 1e-3, Nv, periodic_u=True)
    f = solve(1 + 0.1 * np.sin(g.u), g, E, BertrandParams(1, 0), BoundarySpec(Mode.B0))
    r = np.nanmax(np.abs(reduction_residual_dym(f.tau, g)))
    tail = f"  ratio {prev / r:.2f}" if prev else ""
    print(f"  {Nu:3d} x {Nv:2d}: Dym residual {r:.2e}, GMC residual {residual_norm(f):.2e}{tail}")
    prev = r

print("\nconstant torsion (A = 0), kappa(u, 0) = 1 + 0.1 sin 2 pi u, lambda(0) = 1")
prev = None
for Nu, Nv in [(64, 16), (128, 32), (256, 64)]:
    g = GridSpec(0, 1, Nu, 0, 0.05, Nv)
    f = solve(1 + 0.1 * np.sin(2 * np.pi * g.u), g, E, BertrandParams(0, 1),
              BoundarySpec(Mode.A0, 1.0, 0.0, 0.0))
    r = np.nanmax(np.abs(reduction_residual_theta(theta_from_fields(f), g)))
    tail = f"  ratio {prev / r:.2f}" if prev else ""
    print(f"  {Nu:3d} x {Nv:2d}: theta residual {r:.2e}, lambda in "
          f"[{f.lam.min():.4f}, {f.lam.max():.4f}]{tail}")
    prev = r
