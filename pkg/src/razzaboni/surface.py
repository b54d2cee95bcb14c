"""Surfaces swept by binormal motion, and what can be measured on them.

A surface is synthesized from solved GMC fields by integrating the v-frame
system up the left edge ``u = u0`` and then the Serret-Frenet system along
every u-line, with ``sigma_v = lambda b`` and ``sigma_u = t``.  The
measurement functions only look at the resulting positions and frames.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import _fd
from .errors import (
    DegenerateFrame,
    DegenerateTangentPlane,
    KappaNearZero,
    NonpositiveLambda,
    ResidualTooLarge,
)
from .frenet import Frame, integrate_frames, u_matrix
from .gmc import GmcFields, GridSpec, du, residual_norm
from .lorentz import SignatureCase, mcross, mdot, orthonormality_defect

RESIDUAL_THRESHOLD = 1e-2


@dataclass
class SurfaceMesh:
    grid: GridSpec
    sig: SignatureCase
    positions: np.ndarray   # (Nu+1, Nv+1, 3)
    frames: np.ndarray      # (Nu+1, Nv+1, 3, 3), rows t, n, b
    fields: GmcFields

    @property
    def t(self):
        return self.frames[..., 0, :]

    @property
    def n(self):
        return self.frames[..., 1, :]

    @property
    def b(self):
        return self.frames[..., 2, :]

    def frame_at(self, i: int, j: int) -> Frame:
        return Frame.from_matrix(self.frames[i, j], self.sig)

    def defect(self) -> float:
        return float(np.max(orthonormality_defect(self.t, self.n, self.b, self.sig)))


@dataclass
class FundamentalForms:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray


@dataclass
class SecondForm:
    """Analytic (closed-form) and measured second fundamental form coefficients.

    ``measured`` uses ``-<sigma_ab, n>``; ``measured_eps2`` the alternative
    ``eps2 <sigma_ab, n>``.  ``discrepancy`` holds the max-norm of
    ``measured - analytic`` per coefficient.
    """

    analytic: tuple[np.ndarray, np.ndarray, np.ndarray]
    measured: tuple[np.ndarray, np.ndarray, np.ndarray]
    measured_eps2: tuple[np.ndarray, np.ndarray, np.ndarray]
    discrepancy: dict[str, float]


def v_matrix(lam, lam_u, tau, gamma, sig: SignatureCase) -> np.ndarray:
    """Coefficient matrix of ``[t, n, b]_v`` for the case."""
    lam, lam_u, tau, gamma = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (lam, lam_u, tau, gamma)))
    m = np.zeros(lam.shape + (3, 3))
    lt = lam * tau
    if sig is SignatureCase.CASE1:
        rows = ((0, -lt, lam_u), (-lt, 0, gamma), (-lam_u, gamma, 0))
    elif sig is SignatureCase.CASE2:
        rows = ((0, lt, lam_u), (-lt, 0, gamma), (lam_u, gamma, 0))
    elif sig is SignatureCase.CASE3:
        rows = ((0, lt, lam_u), (lt, 0, gamma), (lam_u, -gamma, 0))
    else:
        rows = ((0, -lt, lam_u), (lt, 0, gamma), (-lam_u, -gamma, 0))
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            m[..., i, j] = x
    return m


def frame_rhs_v(frame: Frame, lam, lam_u, tau, gamma):
    d = v_matrix(lam, lam_u, tau, gamma, frame.sig) @ frame.as_matrix()
    return d[0], d[1], d[2]


def _spline(x, y, periodic):
    return CubicSpline(x, y, axis=0, bc_type="periodic" if periodic else "not-a-knot")


def synthesize(fields: GmcFields, initial_frame: Frame, origin=(0.0, 0.0, 0.0),
               residual_threshold: float | None = RESIDUAL_THRESHOLD,
               renorm_every: int = 1, order: str = "v_first") -> SurfaceMesh:
    """Build the surface through ``origin`` with frame ``initial_frame`` at ``(u0, v0)``.

    ``order="v_first"`` integrates up the edge ``u = u0`` and then along each
    u-line; ``"u_first"`` integrates the bottom edge ``v = v0`` first and then
    every v-line (a cross-check; the two agree only for compatible fields).
    Set ``residual_threshold=None`` for diagnostic fields.
    """
    grid, sig = fields.grid, fields.sig
    if fields.lam is None or fields.gamma is None:
        raise ValueError("synthesis needs lambda and gamma")
    if np.any(fields.lam <= 0):
        raise NonpositiveLambda("lambda must be positive")
    if residual_threshold is not None:
        r = residual_norm(fields)
        if not r <= residual_threshold:
            raise ResidualTooLarge(f"GMC residual {r:.3g} exceeds {residual_threshold}")
    if initial_frame.sig is not sig:
        raise ValueError("initial frame belongs to another case")
    if initial_frame.defect > 1e-8:
        raise DegenerateFrame(f"initial frame defect {initial_frame.defect:.3g}")

    u, v = grid.u, grid.v
    lam_u = du(fields.lam, grid)
    F0 = initial_frame.as_matrix()
    x0 = np.asarray(origin, dtype=float)
    per = grid.periodic_u

    def v_coeffs(spl):
        return lambda s: v_matrix(*np.moveaxis(spl(s), -1, 0), sig)

    def v_speed(spl):
        def w(s):
            lam = spl(s)[..., 0]
            return np.stack([np.zeros_like(lam), np.zeros_like(lam), lam], axis=-1)
        return w

    ones = np.array([1.0, 0.0, 0.0])
    if order == "v_first":
        edge = _spline(v, np.stack([fields.lam[0], lam_u[0], fields.tau[0], fields.gamma[0]], -1),
                       False)
        _, pos_e, F_e = integrate_frames(v_coeffs(edge), v_speed(edge), x0, F0,
                                         grid.v0, grid.v1, grid.hv, sig, renorm_every)
        inv = _spline(u, np.stack([fields.kappa, fields.tau], -1), per)

        def u_coeffs(s):
            kt = inv(s)
            return u_matrix(kt[..., 0], kt[..., 1], sig)

        _, pos, F = integrate_frames(u_coeffs, lambda s: ones, pos_e, F_e,
                                     grid.u0, grid.u1, grid.hu, sig, renorm_every)
    elif order == "u_first":
        inv = _spline(u, np.stack([fields.kappa[:, 0], fields.tau[:, 0]], -1), per)

        def u_coeffs0(s):
            kt = inv(s)
            return u_matrix(kt[..., 0], kt[..., 1], sig)

        _, pos_e, F_e = integrate_frames(u_coeffs0, lambda s: ones, x0, F0,
                                         grid.u0, grid.u1, grid.hu, sig, renorm_every)
        vals = np.stack([fields.lam, lam_u, fields.tau, fields.gamma], -1)  # (Nu+1, Nv+1, 4)
        spl = _spline(v, np.moveaxis(vals, 1, 0), False)
        _, pos_v, F_v = integrate_frames(v_coeffs(spl), v_speed(spl), pos_e, F_e,
                                         grid.v0, grid.v1, grid.hv, sig, renorm_every)
        pos = np.moveaxis(pos_v, 0, 1)
        F = np.moveaxis(F_v, 0, 1)
    else:
        raise ValueError("order must be 'v_first' or 'u_first'")
    return SurfaceMesh(grid, sig, pos, F, fields)


# -- measurements -------------------------------------------------------------

def _norm(x):
    return np.linalg.norm(x, axis=-1)


def compatibility_residual(mesh: SurfaceMesh) -> np.ndarray:
    """Mismatch between the mixed position derivative and the frame data.

    Per interior node, the larger of ``|D_v D_u sigma - D_u(lambda b)|`` and
    ``|D_u D_v sigma - D_v t|`` (Euclidean length of the coordinate vector).
    NaN on the boundary ring.
    """
    g = mesh.grid
    pos = mesh.positions
    s_uv = _fd.d1_interior(_fd.d1_interior(pos, g.hu, 0), g.hv, 1)
    lb = mesh.fields.lam[..., None] * mesh.b
    r1 = _norm(s_uv - _fd.d1_interior(lb, g.hu, 0))
    r2 = _norm(s_uv - _fd.d1_interior(mesh.t, g.hv, 1))
    return np.maximum(r1, r2)


def _tangents(mesh):
    g = mesh.grid
    return _fd.d1(mesh.positions, g.hu, 0), _fd.d1(mesh.positions, g.hv, 1)


def geodesic_residual(mesh: SurfaceMesh) -> np.ndarray:
    """Size of the part of ``n`` tangent to the measured surface.

    The surface normal is ``N = sigma_u x sigma_v`` from position
    differences; ``n - (<n,N>/<N,N>) N`` vanishes when the u-lines are
    geodesics with principal normal ``n``.
    """
    sig = mesh.sig
    s_u, s_v = _tangents(mesh)
    N = mcross(s_u, s_v, sig)
    qN = mdot(N, N, sig)
    if np.any(np.sqrt(np.abs(qN)) < 1e-10):
        raise DegenerateTangentPlane("sigma_u x sigma_v vanishes")
    n = mesh.n
    perp = n - (mdot(n, N, sig) / qN)[..., None] * N
    return _norm(perp)


def first_form(mesh: SurfaceMesh) -> FundamentalForms:
    s_u, s_v = _tangents(mesh)
    sig = mesh.sig
    return FundamentalForms(mdot(s_u, s_u, sig), mdot(s_u, s_v, sig), mdot(s_v, s_v, sig))


def first_form_target(fields: GmcFields):
    """``(E, F, G) = (eps1, 0, eps3 lambda^2)`` in geodesic coordinates."""
    sig = fields.sig
    lam = fields.lam
    return (np.full_like(lam, sig.eps1), np.zeros_like(lam), sig.eps3 * lam**2)


def second_form_analytic(fields: GmcFields):
    """Closed-form ``(e, f, g)`` of the Minkowski cases from the fields."""
    sig = fields.sig
    if not sig.is_minkowski:
        raise ValueError("closed-form second fundamental form only for the Minkowski cases")
    k, t, lam = fields.kappa, fields.tau, fields.lam
    if np.min(np.abs(k)) < 1e-8:
        raise KappaNearZero("second fundamental form divides by kappa")
    lam_uu = du(lam, fields.grid, 2)
    sign = 1.0 if sig is SignatureCase.CASE3 else -1.0
    return -k, -lam * t, lam / k * (-lam_uu + sign * lam * t**2)


def second_form(mesh: SurfaceMesh) -> SecondForm:
    g = mesh.grid
    analytic = second_form_analytic(mesh.fields)
    pos = mesh.positions
    s_uu = _fd.d2(pos, g.hu, 0)
    s_uv = _fd.d1(_fd.d1(pos, g.hu, 0), g.hv, 1)
    s_vv = _fd.d2(pos, g.hv, 1) if g.Nv >= 3 else _fd.d1(_fd.d1(pos, g.hv, 1), g.hv, 1)
    raw = tuple(mdot(x, mesh.n, mesh.sig) for x in (s_uu, s_uv, s_vv))
    measured = tuple(-r for r in raw)
    measured_eps2 = tuple(mesh.sig.eps2 * r for r in raw)
    disc = {name: float(np.max(np.abs(m - a)))
            for name, m, a in zip("efg", measured, analytic)}
    return SecondForm(analytic, measured, measured_eps2, disc)


def gauss_curvature_intrinsic(fields: GmcFields) -> np.ndarray:
    """``K = -eps1 lambda_uu / lambda``."""
    if np.any(fields.lam <= 0):
        raise NonpositiveLambda("lambda must be positive")
    return -fields.sig.eps1 * du(fields.lam, fields.grid, 2) / fields.lam


def brioschi(E, F, G, hu, hv) -> np.ndarray:
    """Gaussian curvature of ``E du^2 + 2F du dv + G dv^2`` (Brioschi formula).

    Centered differences only; NaN where a stencil reaches past the data.
    """
    d1u = lambda f: _fd.d1_interior(f, hu, 0)
    d1v = lambda f: _fd.d1_interior(f, hv, 1)
    E_u, E_v, F_u, F_v, G_u, G_v = d1u(E), d1v(E), d1u(F), d1v(F), d1u(G), d1v(G)
    E_vv = _fd.d2_interior(E, hv, 1)
    G_uu = _fd.d2_interior(G, hu, 0)
    F_uv = d1v(d1u(F))
    m1 = np.stack([
        np.stack([-0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v], -1),
        np.stack([F_v - 0.5 * G_u, E, F], -1),
        np.stack([0.5 * G_v, F, G], -1),
    ], -2)
    zero = np.zeros_like(E)
    m2 = np.stack([
        np.stack([zero, 0.5 * E_v, 0.5 * G_u], -1),
        np.stack([0.5 * E_v, E, F], -1),
        np.stack([0.5 * G_u, F, G], -1),
    ], -2)
    with np.errstate(invalid="ignore"):  # the NaN ring propagates quietly
        return (np.linalg.det(m1) - np.linalg.det(m2)) / (E * G - F**2) ** 2


def gauss_curvature_measured(mesh: SurfaceMesh) -> np.ndarray:
    """Brioschi curvature of the first form measured from positions."""
    g = mesh.grid
    s_u = _fd.d1_interior(mesh.positions, g.hu, 0)
    s_v = _fd.d1_interior(mesh.positions, g.hv, 1)
    sig = mesh.sig
    return brioschi(mdot(s_u, s_u, sig), mdot(s_u, s_v, sig), mdot(s_v, s_v, sig),
                    g.hu, g.hv)


def gauss_curvature(obj) -> np.ndarray:
    """Intrinsic curvature of fields, or Brioschi curvature of a mesh."""
    if isinstance(obj, SurfaceMesh):
        return gauss_curvature_measured(obj)
    return gauss_curvature_intrinsic(obj)
