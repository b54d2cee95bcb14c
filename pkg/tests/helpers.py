"""Shared constructions for the test modules (cached: synthesis is the slow part)."""
from functools import lru_cache

import numpy as np

from razzaboni.frenet import BertrandParams, Frame
from razzaboni.gmc import GmcFields, GridSpec, constant_fields, constant_fields_b0
from razzaboni.lorentz import SignatureCase
from razzaboni.lorentz import canonical_frame
from razzaboni.surface import synthesize

S = SignatureCase
MINKOWSKI = (S.CASE1, S.CASE2, S.CASE3)

# constant-invariant test surfaces: kappa = 1.5, lambda = 1, generic torsion
CONSTANT_PARAMS = {
    S.EUCLIDEAN: BertrandParams(0.5, 0.5),
    S.CASE1: BertrandParams(0.5, 0.5),
    S.CASE2: BertrandParams(0.2, 0.8),
    S.CASE3: BertrandParams(0.3, 0.6),
}


def start_frame(sig):
    return Frame(*canonical_frame(sig), sig)


def unit_grid(N, v1=1.0):
    return GridSpec(0.0, 1.0, N, 0.0, v1, N)


@lru_cache(maxsize=None)
def constant_mesh(sig, N, A=None, B=None, kappa=1.5, lam=1.0):
    params = CONSTANT_PARAMS[sig] if A is None else BertrandParams(A, B)
    fields = constant_fields(unit_grid(N), sig, params, kappa, lam)
    return synthesize(fields, start_frame(sig))


@lru_cache(maxsize=None)
def b0_mesh(sig, N, A=1.0, tau=1.0):
    fields = constant_fields_b0(unit_grid(N), sig, BertrandParams(A, 0.0), tau)
    return synthesize(fields, start_frame(sig))


def cosh_fields(sig, N):
    """Diagnostic fields with lambda = cosh u (cos u where cosh is not admissible).

    kappa = 1 and tau = 0, gamma chosen so the third compatibility equation
    holds exactly; the Gaussian curvature is -eps1 lambda_uu/lambda = -+1.
    """
    grid = GridSpec(0.0, 1.0, N, 0.0, 0.5, N)
    U, _ = grid.mesh()
    if sig in (S.CASE1, S.CASE3):
        lam = np.cosh(U)
        gamma = -lam if sig is S.CASE1 else lam
    else:
        lam = np.cos(U)
        gamma = -lam
    return GmcFields(grid, sig, BertrandParams(1.0, 0.0), np.ones_like(U),
                     np.zeros_like(U), lam, gamma)


@lru_cache(maxsize=None)
def cosh_mesh(sig, N):
    return synthesize(cosh_fields(sig, N), start_frame(sig), residual_threshold=None)


def plane_fields(N, sig=S.CASE1):
    grid = unit_grid(N)
    z = np.zeros(grid.shape)
    return GmcFields(grid, sig, BertrandParams(1.0, 1.0), z, z, np.ones(grid.shape), z.copy())


def ratios(values):
    v = np.asarray(values, dtype=float)
    return v[:-1] / v[1:]
