"""Minkowski 3-space in a few lines.

The inner product is -x0 y0 + x1 y1 + x2 y2.  A vector's causal character is
the sign of its square; the Lorentzian cross product is the Euclidean one
with the first component negated, and it is orthogonal to both factors.
"""
import numpy as np

from razzaboni.lorentz import (
    SignatureCase,
    canonical_frame,
    causal_character,
    mcross,
    mdot,
    orthonormality_defect,
    reorthonormalize,
    vec,
)

print("causal characters")
for v in [vec(1, 0, 0), vec(0, 1, 0), vec(1, 1, 0), vec(0, 0, 0)]:
    print(f"  {v} -> <v,v> = {mdot(v, v):+.0f}, {causal_character(v).name.lower()}")

a, b = vec(0.3, 1.2, -0.7), vec(2.0, 0.5, 0.1)
c = mcross(a, b)
print(f"\na x b = {c}, <a x b, a> = {mdot(c, a):.1e}, <a x b, b> = {mdot(c, b):.1e}")

# Each signature fixes which frame vector is timelike.
print("\ncanonical frames (t, n, b) and their squares")
for sig in SignatureCase:
    t, n, b_ = canonical_frame(sig)
    squares = [int(mdot(x, x, sig)) for x in (t, n, b_)]
    print(f"  {sig.tag:9s} eps = {sig.eps}, squares = {squares}")

# A frame that drifted slightly is pulled back onto the orthonormal set.
sig = SignatureCase.CASE2
t, n, b_ = canonical_frame(sig)
rng = np.random.default_rng(0)
noisy = [x + 1e-4 * rng.standard_normal(3) for x in (t, n, b_)]
print(f"\nCase 2 frame defect before repair: {orthonormality_defect(*noisy, sig):.2e}")
print(f"after reorthonormalize:            "
      f"{orthonormality_defect(*reorthonormalize(*noisy, sig), sig):.2e}")
