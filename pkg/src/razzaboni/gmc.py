"""Gauss-Mainardi-Codazzi systems of surfaces swept by Bertrand geodesics.

For a surface in geodesic coordinates with ``sigma_u = t`` and
``sigma_v = lambda b`` the four signatures share the structure

    kappa_v   = s_e (lambda tau_u + 2 lambda_u tau)
    tau_v     = s_a kappa lambda_u + s_b gamma_u
    lambda_uu = s_c tau^2 lambda + s_d kappa gamma

with the case signs of ``_SIGNS``.  Under the Bertrand constraint
``A kappa + B tau = 1`` one of kappa/tau is evolved in v and lambda, gamma
are recovered slice by slice:

* ``B == 0`` (constant curvature): ``lambda = c(v) / sqrt(tau)`` and gamma
  from the third equation;
* otherwise: gamma is eliminated into a linear third-order ODE for lambda
  along u, integrated from a user-supplied boundary triple at ``u0``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np

from . import _fd
from .errors import (
    DivisionByZeroConstant,
    NonpositiveLambda,
    NonpositiveTau,
    ShapeMismatch,
    SingularElimination,
    SingularTheta,
    StepTooLarge,
)
from .frenet import BertrandParams
from .lorentz import SignatureCase

# (s_a, s_b, s_c, s_d, s_e) per case, see module docstring
_SIGNS = {
    SignatureCase.EUCLIDEAN: (1, 1, 1, 1, -1),
    SignatureCase.CASE1: (-1, -1, -1, -1, 1),
    SignatureCase.CASE2: (1, 1, -1, 1, 1),
    SignatureCase.CASE3: (1, -1, 1, 1, 1),
}

#: default CFL-style guard hv <= C hu
STEP_GUARD = 0.25
#: guard on hv * (largest third-derivative eigenvalue) for the B = 0 flow;
#: classical RK4 is stable on the imaginary axis up to 2*sqrt(2)
DISPERSIVE_GUARD = 2.0

CONSTRAINT_TOL = 1e-10
KAPPA_TOL = 1e-10


def signs(sig: SignatureCase):
    return _SIGNS[sig]


@dataclass(frozen=True)
class GridSpec:
    u0: float
    u1: float
    Nu: int
    v0: float
    v1: float
    Nv: int
    periodic_u: bool = False

    def __post_init__(self):
        if self.Nu < 8:
            raise ValueError(f"Nu must be >= 8, got {self.Nu}")
        if self.Nv < 2:
            raise ValueError(f"Nv must be >= 2, got {self.Nv}")
        if not self.u1 > self.u0:
            raise ValueError("need u1 > u0")
        if not self.v1 > self.v0:
            raise ValueError("need v1 > v0")

    @property
    def hu(self) -> float:
        return (self.u1 - self.u0) / self.Nu

    @property
    def hv(self) -> float:
        return (self.v1 - self.v0) / self.Nv

    @property
    def u(self) -> np.ndarray:
        return np.linspace(self.u0, self.u1, self.Nu + 1)

    @property
    def v(self) -> np.ndarray:
        return np.linspace(self.v0, self.v1, self.Nv + 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Nu + 1, self.Nv + 1)

    def mesh(self):
        return np.meshgrid(self.u, self.v, indexing="ij")

    def refined(self, factor: int = 2) -> "GridSpec":
        return replace(self, Nu=self.Nu * factor, Nv=self.Nv * factor)


@dataclass
class GmcFields:
    """Sampled kappa, tau, lambda, gamma on a grid, shape ``(Nu+1, Nv+1)``.

    ``lam`` and ``gamma`` may be ``None`` for fields that only carry the curve
    invariants (the dual of a transformed surface).
    """

    grid: GridSpec
    sig: SignatureCase
    params: BertrandParams
    kappa: np.ndarray
    tau: np.ndarray
    lam: np.ndarray | None
    gamma: np.ndarray | None

    def __post_init__(self):
        for name in ("kappa", "tau", "lam", "gamma"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            if arr.shape != self.grid.shape:
                raise ShapeMismatch(
                    f"{name} has shape {arr.shape}, grid needs {self.grid.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
            setattr(self, name, arr)

    def constraint_defect(self) -> float:
        return float(np.max(np.abs(
            self.params.A * self.kappa + self.params.B * self.tau - 1.0)))


class Mode(enum.Enum):
    B0 = "b0"          # closed form lambda = 1/sqrt(tau)
    A0 = "a0"          # constant torsion, lambda from the ODE
    GENERAL = "general"


BoundaryValue = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class BoundarySpec:
    """Values of ``lambda, lambda_u, lambda_uu`` at ``u0`` (floats or functions of v).

    Only the ODE modes use the triple; ``gauge`` is the factor ``c(v)`` in
    ``lambda = c(v)/sqrt(tau)`` for the B = 0 mode.
    """

    mode: Mode
    lambda_left: BoundaryValue | None = None
    dlambda_left: BoundaryValue | None = None
    d2lambda_left: BoundaryValue | None = None
    gauge: BoundaryValue = 1.0

    def __post_init__(self):
        if self.mode is not Mode.B0 and None in (
            self.lambda_left, self.dlambda_left, self.d2lambda_left
        ):
            raise ValueError(f"mode {self.mode.value} needs the full boundary triple")

    def triple(self, v: float):
        return tuple(_at(x, v) for x in
                     (self.lambda_left, self.dlambda_left, self.d2lambda_left))


def _at(x, v):
    return float(x(v)) if callable(x) else float(x)


# -- derivatives honouring the duplicated periodic end node ------------------

def du(f, grid: GridSpec, order: int = 1):
    op = _fd.d1 if order == 1 else _fd.d2
    if grid.periodic_u:
        core = op(np.asarray(f)[:-1], grid.hu, 0, True)
        return np.concatenate([core, core[:1]])
    return op(f, grid.hu, 0, False)


def _du4(f, grid: GridSpec, order: int):
    op = {1: _fd.d1_4, 2: _fd.d2_4, 3: _fd.d3_4}[order]
    if grid.periodic_u:
        core = op(np.asarray(f)[:-1], grid.hu, 0, True)
        return np.concatenate([core, core[:1]])
    return op(f, grid.hu, 0, False)


def _dv4(f, grid: GridSpec):
    if grid.Nv >= 4:
        return _fd.d1_4(f, grid.hv, 1, False)
    return _fd.d1_interior(f, grid.hv, 1)


# -- residuals ----------------------------------------------------------------

def gmc_residual(fields: GmcFields):
    """Residuals ``(R_kappa, R_tau, R_lambda)`` of the case's GMC system."""
    grid, sig = fields.grid, fields.sig
    if fields.lam is None or fields.gamma is None:
        raise ShapeMismatch("fields carry no lambda/gamma")
    s_a, s_b, s_c, s_d, s_e = signs(sig)
    k, t, lam, g = fields.kappa, fields.tau, fields.lam, fields.gamma
    lam_u = du(lam, grid)
    r_k = _fd.d1(k, grid.hv, 1) - s_e * (lam * du(t, grid) + 2 * lam_u * t)
    r_t = _fd.d1(t, grid.hv, 1) - (s_a * k * lam_u + s_b * du(g, grid))
    r_l = du(lam, grid, 2) - (s_c * t**2 * lam + s_d * k * g)
    return r_k, r_t, r_l


def residual_norm(fields: GmcFields) -> float:
    return float(max(np.max(np.abs(r)) for r in gmc_residual(fields)))


def close_constraint(fields: GmcFields, source: str = "kappa") -> GmcFields:
    """Restore ``A kappa + B tau = 1`` exactly from kappa or from tau."""
    p = fields.params
    if source == "kappa":
        if p.B == 0:
            raise DivisionByZeroConstant("B = 0: cannot recover tau from kappa")
        return replace(fields, tau=(1.0 - p.A * fields.kappa) / p.B)
    if source == "tau":
        if p.A == 0:
            raise DivisionByZeroConstant("A = 0: cannot recover kappa from tau")
        return replace(fields, kappa=(1.0 - p.B * fields.tau) / p.A)
    raise ValueError("source must be 'kappa' or 'tau'")


# -- per-slice recovery of lambda and gamma -----------------------------------

def solve_lambda_gamma_B0(tau_slice, sig: SignatureCase, params: BertrandParams,
                          grid: GridSpec, gauge: float = 1.0):
    """Constant-curvature slice: ``lambda = gauge/sqrt(tau)``, gamma from the third equation.

    Returns ``(lambda, gamma)``.
    """
    tau_slice = np.asarray(tau_slice, dtype=float)
    if np.any(tau_slice <= 0):
        raise NonpositiveTau("B = 0 slice needs tau > 0")
    if params.A == 0:
        raise DivisionByZeroConstant("B = 0 requires A != 0")
    kappa = 1.0 / params.A
    _, _, s_c, s_d, _ = signs(sig)
    lam = gauge / np.sqrt(tau_slice)
    gamma = (du(lam, grid, 2) - s_c * tau_slice**2 * lam) / (s_d * kappa)
    return lam, gamma


def lambda_ode_matrices(kappa, tau, tau_u, sig: SignatureCase, params: BertrandParams):
    """Coefficients of ``y' = M(u) y`` for ``y = (lambda, lambda_u, gamma)``.

    The gamma row comes from eliminating tau_v between the second GMC
    equation and the differentiated constraint.
    """
    if params.B == 0:
        raise DivisionByZeroConstant("the lambda ODE needs B != 0")
    s_a, s_b, s_c, s_d, s_e = signs(sig)
    r = params.A / params.B
    m = np.zeros(np.shape(kappa) + (3, 3))
    m[..., 0, 1] = 1.0
    m[..., 1, 0] = s_c * tau**2
    m[..., 1, 2] = s_d * kappa
    m[..., 2, 0] = -r * s_e * tau_u / s_b
    m[..., 2, 1] = (-2 * r * s_e * tau - s_a * kappa) / s_b
    return m


def solve_lambda_gamma_ode(kappa_slice, sig: SignatureCase, params: BertrandParams,
                           grid: GridSpec, triple):
    """Integrate the lambda ODE along u with the trapezoidal rule.

    Returns ``(lambda, lambda_u, gamma)`` on the slice.
    """
    kappa = np.asarray(kappa_slice, dtype=float)
    if np.any(np.abs(kappa) < KAPPA_TOL):
        raise SingularElimination("kappa vanishes on the slice")
    tau = (1.0 - params.A * kappa) / params.B
    tau_u = du(tau, grid)
    M = lambda_ode_matrices(kappa, tau, tau_u, sig, params)
    _, _, s_c, s_d, _ = signs(sig)
    l0, p0, q0 = triple
    y = np.empty((kappa.shape[0], 3))
    y[0] = (l0, p0, (q0 - s_c * tau[0]**2 * l0) / (s_d * kappa[0]))
    h = grid.hu
    eye = np.eye(3)
    for i in range(kappa.shape[0] - 1):
        rhs = y[i] + 0.5 * h * (M[i] @ y[i])
        y[i + 1] = np.linalg.solve(eye - 0.5 * h * M[i + 1], rhs)
    return y[:, 0], y[:, 1], y[:, 2]


def solve_lambda_gamma_A0(kappa_slice, sig: SignatureCase, params: BertrandParams,
                          grid: GridSpec, boundary: BoundarySpec, v: float = 0.0):
    """Constant-torsion slice (``A = 0``); see :func:`solve_lambda_gamma_ode`."""
    if params.A != 0:
        raise ValueError("A = 0 mode called with A != 0")
    lam, _, gamma = solve_lambda_gamma_ode(
        kappa_slice, sig, params, grid, boundary.triple(v))
    return lam, gamma


# -- evolution in v -------------------------------------------------------------

def _check_mode(params: BertrandParams, boundary: BoundarySpec, grid: GridSpec):
    mode = boundary.mode
    if mode is Mode.B0 and params.B != 0:
        raise ValueError("mode b0 requires B = 0")
    if mode is Mode.A0 and params.A != 0:
        raise ValueError("mode a0 requires A = 0")
    if mode is not Mode.B0 and params.B == 0:
        raise ValueError("B = 0 requires mode b0")
    if mode is not Mode.B0 and grid.periodic_u:
        raise ValueError("the lambda ODE is integrated from u0; periodic_u only in mode b0")


def _slice_state(q, v, sig, params, grid, boundary):
    """lambda, lambda_u, gamma and the v-rate of the evolved variable."""
    s_a, s_b, _, _, s_e = signs(sig)
    if boundary.mode is Mode.B0:
        tau = q
        lam, gamma = solve_lambda_gamma_B0(tau, sig, params, grid, _at(boundary.gauge, v))
        lam_u = du(lam, grid)
        rate = s_a * (1.0 / params.A) * lam_u + s_b * du(gamma, grid)
    else:
        kappa = q
        lam, lam_u, gamma = solve_lambda_gamma_ode(
            kappa, sig, params, grid, boundary.triple(v))
        tau = (1.0 - params.A * kappa) / params.B
        rate = s_e * (lam * du(tau, grid) + 2 * lam_u * tau)
    if np.any(lam <= 0):
        raise NonpositiveLambda(f"lambda reached {float(np.min(lam)):.3g} at v={v:.6g}")
    if grid.periodic_u:
        rate = rate.copy()
        rate[-1] = rate[0]
    return lam, gamma, rate


def check_step(grid: GridSpec, params: BertrandParams, mode: Mode, q=None,
               guard: float = STEP_GUARD):
    if grid.hv > guard * grid.hu:
        raise StepTooLarge(
            f"hv={grid.hv:.3g} exceeds {guard} * hu = {guard * grid.hu:.3g}")
    if mode is Mode.B0 and q is not None:
        tau_min = float(np.min(q))
        if tau_min <= 0:
            raise NonpositiveTau("tau must be positive")
        # centered third difference has spectral radius ~2.6/h^3, times |A|/(2 tau^1.5)
        rho = 1.3 * abs(params.A) * tau_min**-1.5 / grid.hu**3
        if grid.hv * rho > DISPERSIVE_GUARD:
            raise StepTooLarge(
                f"hv={grid.hv:.3g} too large for the third-order flow; "
                f"need hv <= {DISPERSIVE_GUARD / rho:.3g}")


def step_v(q, v, sig, params, grid, boundary, hv=None):
    """One classical RK4 step in v of the evolved slice (kappa, or tau if B = 0).

    The constraint is re-closed and lambda, gamma re-solved at every stage.
    Returns the new slice.
    """
    hv = grid.hv if hv is None else hv
    _, _, k1 = _slice_state(q, v, sig, params, grid, boundary)
    _, _, k2 = _slice_state(q + hv / 2 * k1, v + hv / 2, sig, params, grid, boundary)
    _, _, k3 = _slice_state(q + hv / 2 * k2, v + hv / 2, sig, params, grid, boundary)
    _, _, k4 = _slice_state(q + hv * k3, v + hv, sig, params, grid, boundary)
    return q + hv / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def solve(initial_slice, grid: GridSpec, sig: SignatureCase, params: BertrandParams,
          boundary: BoundarySpec, guard: float = STEP_GUARD) -> GmcFields:
    """March the constrained system from ``v0`` to ``v1`` (method of lines).

    ``initial_slice`` holds kappa(u, v0), or tau(u, v0) when ``B = 0``.
    """
    _check_mode(params, boundary, grid)
    q = np.array(initial_slice, dtype=float)
    if q.shape != (grid.Nu + 1,):
        raise ShapeMismatch(f"initial slice must have {grid.Nu + 1} nodes")
    if grid.periodic_u:
        q[-1] = q[0]
    check_step(grid, params, boundary.mode, q, guard)

    shape = grid.shape
    Q = np.empty(shape)
    lam = np.empty(shape)
    gamma = np.empty(shape)
    v = grid.v
    for j in range(grid.Nv + 1):
        Q[:, j] = q
        lam[:, j], gamma[:, j], _ = _slice_state(q, v[j], sig, params, grid, boundary)
        if j < grid.Nv:
            q = step_v(q, v[j], sig, params, grid, boundary)
    if boundary.mode is Mode.B0:
        tau = Q
        kappa = np.full(shape, 1.0 / params.A)
    else:
        kappa = Q
        tau = (1.0 - params.A * Q) / params.B
    return GmcFields(grid, sig, params, kappa, tau, lam, gamma)


def constant_fields(grid: GridSpec, sig: SignatureCase, params: BertrandParams,
                    kappa: float, lam: float = 1.0) -> GmcFields:
    """The stationary family: constant invariants, gamma from ``lambda_uu = 0``."""
    tau = (1.0 - params.A * kappa) / params.B if params.B != 0 else None
    if tau is None:
        if abs(params.A * kappa - 1.0) > CONSTRAINT_TOL:
            raise ValueError("B = 0 forces kappa = 1/A")
        raise ValueError("B = 0: pass the torsion through constant_fields_b0")
    return _constant(grid, sig, params, kappa, tau, lam)


def constant_fields_b0(grid, sig, params, tau: float, gauge: float = 1.0) -> GmcFields:
    if params.B != 0:
        raise ValueError("constant_fields_b0 needs B = 0")
    return _constant(grid, sig, params, 1.0 / params.A, tau, gauge / np.sqrt(tau))


def _constant(grid, sig, params, kappa, tau, lam):
    _, _, s_c, s_d, _ = signs(sig)
    gamma = -s_c * tau**2 * lam / (s_d * kappa)
    full = lambda x: np.full(grid.shape, float(x))
    return GmcFields(grid, sig, params, full(kappa), full(tau), full(lam), full(gamma))


# -- Euclidean single-equation reductions --------------------------------------

def theta_from_fields(fields: GmcFields) -> np.ndarray:
    """Potential theta with ``theta_u = kappa`` and ``theta_v = -2 lambda``.

    Integrates lambda along the left edge and kappa along every u-line
    (trapezoidal rule), with ``theta(u0, v0) = 0``.
    """
    grid = fields.grid
    edge = -2.0 * _cumtrapz(fields.lam[0], grid.hv, 0)
    return edge[None, :] + _cumtrapz(fields.kappa, grid.hu, 0)


def _cumtrapz(f, h, axis):
    # extended precision: the theta residual takes four derivatives of the
    # result, which turns float64 rounding of the running sum into noise
    # comparable to the truncation error on fine grids
    f = np.moveaxis(np.asarray(f, dtype=np.longdouble), axis, 0)
    out = np.zeros_like(f)
    out[1:] = np.cumsum((f[1:] + f[:-1]) * (np.longdouble(h) / 2), axis=0)
    return np.moveaxis(out, 0, axis)


def reduction_residual_theta(theta, grid: GridSpec) -> np.ndarray:
    """Residual of ``((theta_vuu - theta_v)/theta_u)_u + theta_u theta_vu``.

    Fourth-order centered stencils, so on a second-order solver's output the
    residual measures that solver's truncation error.  NaN where a stencil
    does not fit.
    """
    theta = np.asarray(theta)
    th_u = _du4(theta, grid, 1)
    if np.nanmin(np.abs(th_u)) < KAPPA_TOL:
        raise SingularTheta("theta_u vanishes")
    th_v = _dv4(theta, grid)
    ratio = (_du4(th_v, grid, 2) - th_v) / th_u
    return _du4(ratio, grid, 1) + th_u * _du4(th_v, grid, 1)


def reduction_residual_dym(tau, grid: GridSpec, A: float = 1.0,
                           gauge: float = 1.0) -> np.ndarray:
    """Residual of the constant-curvature flow for ``lambda = c/sqrt(tau)``.

    ``tau_v - [A lambda_uu - A tau^2 lambda + lambda/A]_u``, which for
    ``A = c = 1`` is ``tau_v - [(tau^-1/2)_uu - tau^3/2 + tau^-1/2]_u``.
    NaN where a stencil does not fit.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise NonpositiveTau("Dym residual needs tau > 0")
    if A == 0:
        raise DivisionByZeroConstant("the B = 0 flow needs A != 0")
    lam = gauge * tau**-0.5
    rhs = A * _du4(lam, grid, 3) + _du4(lam / A - A * tau**2 * lam, grid, 1)
    return _dv4(tau, grid) - rhs
