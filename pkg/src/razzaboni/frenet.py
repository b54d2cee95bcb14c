"""Signed Serret-Frenet frames: integration, measurement and Bertrand mates.

In the three Minkowski cases the frame obeys

    t' =  eps2 k n
    n' = -eps1 k t - eps3 tau b
    b' =  eps2 tau n

and the Euclidean reference case uses the classical right-handed system
``t' = k n, n' = -k t + tau b, b' = -tau n``.  Curvature is signed
throughout; nothing here assumes ``k >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _fd
from .errors import DivisionByZeroConstant
from .lorentz import SignatureCase, mdot, orthonormality_defect, reorthonormalize

RENORM_EVERY = 16


@dataclass(frozen=True)
class Frame:
    t: np.ndarray
    n: np.ndarray
    b: np.ndarray
    sig: SignatureCase

    @property
    def defect(self) -> float:
        return float(orthonormality_defect(self.t, self.n, self.b, self.sig))

    def as_matrix(self) -> np.ndarray:
        """Rows ``t, n, b``."""
        return np.stack([self.t, self.n, self.b])

    @classmethod
    def from_matrix(cls, m, sig: SignatureCase) -> "Frame":
        m = np.asarray(m, dtype=float)
        return cls(m[0].copy(), m[1].copy(), m[2].copy(), sig)


@dataclass(frozen=True)
class BertrandParams:
    """Constants of the Bertrand relation ``A k + B tau = 1``."""

    A: float
    B: float

    def __post_init__(self):
        if not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise ValueError("Bertrand constants must be finite")
        if self.A == 0 and self.B == 0:
            raise ValueError("Bertrand constants (A, B) must not both vanish")


@dataclass(frozen=True)
class CurveSample:
    s: float
    position: np.ndarray
    frame: Frame
    kappa: float
    tau: float


def u_matrix(kappa, tau, sig: SignatureCase) -> np.ndarray:
    """Coefficient matrix ``M`` with ``[t, n, b]_u = M [t, n, b]``.

    Broadcasts: array inputs give a stack of matrices with shape ``(..., 3, 3)``.
    """
    kappa, tau = np.broadcast_arrays(np.asarray(kappa, float), np.asarray(tau, float))
    m = np.zeros(kappa.shape + (3, 3))
    if sig.is_minkowski:
        e1, e2, e3 = sig.eps
        m[..., 0, 1] = e2 * kappa
        m[..., 1, 0] = -e1 * kappa
        m[..., 1, 2] = -e3 * tau
        m[..., 2, 1] = e2 * tau
    else:
        m[..., 0, 1] = kappa
        m[..., 1, 0] = -kappa
        m[..., 1, 2] = tau
        m[..., 2, 1] = -tau
    return m


def frenet_rhs_u(frame: Frame, kappa: float, tau: float):
    """u-derivatives ``(t_u, n_u, b_u)`` of a frame with the given invariants."""
    d = u_matrix(kappa, tau, frame.sig) @ frame.as_matrix()
    return d[0], d[1], d[2]


def integrate_frames(coeffs, velocity, pos0, frames0, s0, s1, h, sig,
                     renorm_every=RENORM_EVERY):
    """Classical RK4 for ``F' = M(s) F`` together with ``x' = w(s) . F``.

    ``coeffs(s)`` returns the coefficient matrices ``(..., 3, 3)`` and
    ``velocity(s)`` the weights ``(..., 3)`` of ``(t, n, b)`` in the position
    derivative; leading axes are independent lines integrated in lockstep.
    The step is shrunk so that it divides ``s1 - s0`` exactly.

    Returns ``(s, positions, frames)`` with shapes ``(N+1,)``,
    ``(N+1, ..., 3)`` and ``(N+1, ..., 3, 3)``.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    span = s1 - s0
    nsteps = max(1, math.ceil(abs(span) / h - 1e-9))
    hs = span / nsteps

    pos = np.array(pos0, dtype=float)
    F = np.array(frames0, dtype=float)
    pos_out = np.empty((nsteps + 1,) + pos.shape)
    F_out = np.empty((nsteps + 1,) + F.shape)
    pos_out[0] = pos
    F_out[0] = F

    def rhs(s, F):
        return coeffs(s) @ F, np.einsum("...i,...ij->...j", velocity(s), F)

    for k in range(nsteps):
        s = s0 + k * hs
        kF1, kx1 = rhs(s, F)
        kF2, kx2 = rhs(s + hs / 2, F + hs / 2 * kF1)
        kF3, kx3 = rhs(s + hs / 2, F + hs / 2 * kF2)
        kF4, kx4 = rhs(s + hs, F + hs * kF3)
        F = F + hs / 6 * (kF1 + 2 * kF2 + 2 * kF3 + kF4)
        pos = pos + hs / 6 * (kx1 + 2 * kx2 + 2 * kx3 + kx4)
        if renorm_every and (k + 1) % renorm_every == 0:
            t, n, b = reorthonormalize(F[..., 0, :], F[..., 1, :], F[..., 2, :], sig)
            F = np.stack([t, n, b], axis=-2)
        pos_out[k + 1] = pos
        F_out[k + 1] = F
    return s0 + hs * np.arange(nsteps + 1), pos_out, F_out


def integrate_curve(kappa, tau, sig: SignatureCase, initial: CurveSample,
                    u_end: float, h: float, renorm_every: int = RENORM_EVERY):
    """Reconstruct a unit-speed curve from its curvature and torsion.

    ``kappa`` and ``tau`` are callables of the arclength ``u`` (constants are
    accepted too).  Integrates the frame equations together with
    ``position_u = t`` from ``initial.s`` to ``u_end``.
    """
    kf = kappa if callable(kappa) else (lambda s, c=float(kappa): c)
    tf = tau if callable(tau) else (lambda s, c=float(tau): c)

    def coeffs(s):
        return u_matrix(kf(s), tf(s), sig)

    tangent = np.array([1.0, 0.0, 0.0])
    s, pos, F = integrate_frames(
        coeffs, lambda s: tangent, initial.position, initial.frame.as_matrix(),
        initial.s, u_end, h, sig, renorm_every,
    )
    return [
        CurveSample(float(si), pos[i], Frame.from_matrix(F[i], sig),
                    float(kf(si)), float(tf(si)))
        for i, si in enumerate(s)
    ]


def curve_arrays(curve):
    """Stack a list of samples into ``(s, positions, t, n, b)`` arrays."""
    s = np.array([c.s for c in curve])
    pos = np.array([c.position for c in curve])
    t = np.array([c.frame.t for c in curve])
    n = np.array([c.frame.n for c in curve])
    b = np.array([c.frame.b for c in curve])
    return s, pos, t, n, b


def measure_kappa(t_u, n, sig: SignatureCase):
    """Signed curvature from the tangent derivative: ``<t_u, n>``.

    With ``t_u = eps2 k n`` and ``<n, n> = eps2`` this is exactly ``k``.
    """
    return mdot(t_u, n, sig)


def measure_tau(b_u, n, sig: SignatureCase):
    """Signed torsion from the binormal derivative.

    ``<b_u, n>`` in the Minkowski cases; the Euclidean convention
    ``b_u = -tau n`` flips the sign.
    """
    val = mdot(b_u, n, sig)
    return val if sig.is_minkowski else -val


def measure_curve(curve, sig: SignatureCase | None = None):
    """Curvature and torsion of an integrated curve by centered differences.

    The samples must be equally spaced in ``s``.  Returns two arrays.
    """
    s, _, t, n, b = curve_arrays(curve)
    sig = sig or curve[0].frame.sig
    h = s[1] - s[0]
    return (measure_kappa(_fd.d1(t, h), n, sig),
            measure_tau(_fd.d1(b, h), n, sig))


def bertrand_residual(kappa, tau, params: BertrandParams):
    return params.A * np.asarray(kappa) + params.B * np.asarray(tau) - 1.0


def close_tau(kappa, params: BertrandParams):
    if params.B == 0:
        raise DivisionByZeroConstant("B = 0: torsion is not determined by curvature")
    return (1.0 - params.A * np.asarray(kappa, float)) / params.B


def close_kappa(tau, params: BertrandParams):
    if params.A == 0:
        raise DivisionByZeroConstant("A = 0: curvature is not determined by torsion")
    return (1.0 - params.B * np.asarray(tau, float)) / params.A


def bertrand_mate(curve, A: float) -> np.ndarray:
    """Points ``alpha + A n`` of the mate sharing the principal normal."""
    if not curve:
        raise ValueError("empty curve")
    _, pos, _, n, _ = curve_arrays(curve)
    return pos + A * n


def principal_normal_from_positions(pos, h, sig: SignatureCase):
    """Re-derive the unit tangent and principal normal of a sampled curve.

    Uses only the positions: the tangent is the normalized first difference
    and the normal the normalized component of its derivative orthogonal to
    the tangent.  The sign of the normal is whatever the data gives.
    """
    d = _fd.d1(pos, h)
    qd = mdot(d, d, sig)
    t = d / np.sqrt(np.abs(qd))[:, None]
    dt = _fd.d1(t, h)
    et = np.sign(qd)[:, None]
    nvec = dt - et * mdot(dt, t, sig)[:, None] * t
    qn = mdot(nvec, nvec, sig)
    return t, nvec / np.sqrt(np.abs(qn))[:, None]
