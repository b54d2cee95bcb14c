"""Linear algebra of Minkowski 3-space.

Vectors are plain numpy arrays whose last axis has length 3, ordered
``(x0, x1, x2)`` with ``x0`` the timelike coordinate.  Every function
broadcasts over leading axes, so a whole mesh of frames can be processed in
one call.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import DegenerateFrame

#: absolute tolerance on <a, a> below which a nonzero vector counts as null
LIGHTLIKE_TOL = 1e-12

_MINKOWSKI = np.array([-1.0, 1.0, 1.0])
_EUCLIDEAN = np.array([1.0, 1.0, 1.0])


class SignatureCase(enum.Enum):
    """Causal characters ``(eps1, eps2, eps3)`` of the frame ``(t, n, b)``.

    ``EUCLIDEAN`` is the reference case in ordinary 3-space; the other three
    live in Minkowski space and differ in which frame vector is timelike.
    """

    EUCLIDEAN = (1, 1, 1)
    CASE1 = (1, -1, 1)  # timelike principal normal
    CASE2 = (1, 1, -1)  # timelike binormal
    CASE3 = (-1, 1, 1)  # timelike tangent

    @property
    def eps(self) -> tuple[int, int, int]:
        return self.value

    @property
    def eps1(self) -> int:
        return self.value[0]

    @property
    def eps2(self) -> int:
        return self.value[1]

    @property
    def eps3(self) -> int:
        return self.value[2]

    @property
    def is_minkowski(self) -> bool:
        return self is not SignatureCase.EUCLIDEAN

    @property
    def metric(self) -> np.ndarray:
        """Diagonal of the ambient metric."""
        return _MINKOWSKI if self.is_minkowski else _EUCLIDEAN

    @property
    def tag(self) -> str:
        return self.name.lower()

    @classmethod
    def from_tag(cls, tag: str) -> "SignatureCase":
        try:
            return cls[tag.strip().upper()]
        except KeyError:
            raise ValueError(
                f"unknown case {tag!r}; expected one of "
                + ", ".join(c.tag for c in cls)
            ) from None


class CausalCharacter(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def vec(x0, x1, x2) -> np.ndarray:
    """Build a single vector, rejecting non-finite components."""
    a = np.array([x0, x1, x2], dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"non-finite vector component in {a}")
    return a


def mdot(a, b, sig: SignatureCase = SignatureCase.CASE1) -> np.ndarray:
    """Inner product ``-a0 b0 + a1 b1 + a2 b2`` (or the dot product for EUCLIDEAN).

    Any Minkowski case gives the same Lorentzian product; ``sig`` only
    matters for choosing the Euclidean reference metric.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.sum(sig.metric * a * b, axis=-1)


def causal_character(a, tol: float = LIGHTLIKE_TOL) -> CausalCharacter:
    a = np.asarray(a, dtype=float)
    if not np.any(a):
        return CausalCharacter.SPACELIKE
    q = float(mdot(a, a))
    if abs(q) <= tol:
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def mcross(a, b, sig: SignatureCase = SignatureCase.CASE1) -> np.ndarray:
    """Lorentzian vector product: the determinant with first row ``(-e1, e2, e3)``.

    This is the Euclidean cross product with its first component negated, so
    ``<a x b, a> = <a x b, b> = 0`` in the Lorentzian metric.  For the
    EUCLIDEAN case the ordinary cross product is returned.
    """
    c = np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    if sig.is_minkowski:
        c[..., 0] = -c[..., 0]
    return c


def binormal_of(t, n, sig: SignatureCase) -> np.ndarray:
    """Binormal fixed by the orientation convention ``b = -t x_L n``.

    The Euclidean reference frame is right handed, ``b = t x n``.
    """
    if sig.is_minkowski:
        return -mcross(t, n, sig)
    return np.cross(t, n)


def orthonormality_defect(t, n, b, sig: SignatureCase) -> np.ndarray:
    """Largest deviation of the frame Gram matrix from ``diag(eps1, eps2, eps3)``."""
    vecs = (t, n, b)
    out = None
    for i in range(3):
        for j in range(i, 3):
            expected = sig.eps[i] if i == j else 0.0
            d = np.abs(mdot(vecs[i], vecs[j], sig) - expected)
            out = d if out is None else np.maximum(out, d)
    return out


def _normalize(x, eps_target: int, sig: SignatureCase, what: str) -> np.ndarray:
    q = mdot(x, x, sig)
    if np.any(np.abs(q) < LIGHTLIKE_TOL):
        raise DegenerateFrame(f"{what} is (numerically) null; cannot normalize")
    if np.any(np.sign(q) != eps_target):
        raise DegenerateFrame(f"{what} changed causal character")
    return x / np.sqrt(np.abs(q))[..., None]


def reorthonormalize(t, n, b, sig: SignatureCase, max_defect: float = 0.5):
    """Project a slightly drifted frame back onto the orthonormal frames.

    Gram-Schmidt in the indefinite metric: ``n`` is normalized first, ``t``
    is made orthogonal to it and normalized, and ``b`` is rebuilt from
    ``-t x_L n`` (``t x n`` in the Euclidean case).  The orientation of the
    incoming ``b`` is kept, so a frame of the opposite handedness is not
    flipped.  Works on single frames and on stacks of frames.
    """
    t = np.asarray(t, dtype=float)
    n = np.asarray(n, dtype=float)
    b = np.asarray(b, dtype=float)
    defect = orthonormality_defect(t, n, b, sig)
    if np.any(defect >= max_defect):
        raise DegenerateFrame(
            f"frame defect {float(np.max(defect)):.3g} exceeds {max_defect}"
        )
    e1, e2, e3 = sig.eps
    n_new = _normalize(n, e2, sig, "normal")
    t_new = t - (e2 * mdot(t, n_new, sig))[..., None] * n_new
    t_new = _normalize(t_new, e1, sig, "tangent")
    b_new = binormal_of(t_new, n_new, sig)
    b_new = _normalize(b_new, e3, sig, "binormal")
    flip = np.sign(mdot(b_new, b, sig) * e3)
    flip = np.where(flip == 0, 1.0, flip)
    return t_new, n_new, b_new * np.asarray(flip)[..., None]


def canonical_frame(sig: SignatureCase):
    """A constant orthonormal frame with the case's causal characters.

    The binormal satisfies the orientation convention of :func:`binormal_of`.
    """
    e = np.eye(3)
    if sig is SignatureCase.EUCLIDEAN:
        t, n = e[0], e[1]
    elif sig is SignatureCase.CASE1:
        t, n = e[1], e[0]
    elif sig is SignatureCase.CASE2:
        t, n = e[1], e[2]
    else:
        t, n = e[0], e[2]
    return t.copy(), n.copy(), binormal_of(t, n, sig)
