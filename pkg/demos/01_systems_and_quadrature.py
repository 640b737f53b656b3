"""Orthonormal systems on [0, 1] and the quadrature underneath them.

Run: python demos/01_systems_and_quadrature.py
"""
# %% Built-in systems are indexed from k = 1 and carry exact primitives.
import numpy as np

from cesarolab.ons import compress_reflect, gram_schmidt_random, parse_system, validate
from cesarolab.quad import integrate_product, prefix_integral

cosine, haar, walsh = (parse_system(s) for s in ("cosine", "haar", "walsh"))
print("phi_1(0) for cosine:", cosine.element(1)(0.0))
print("Haar X_5 on a few points:", haar.element(5)(np.array([0.05, 0.2, 0.6])))
print("Walsh w_4 on cell midpoints:", walsh.element(4)((np.arange(4) + 0.5) / 4))

# %% Composite Gauss-Legendre: panels split at breakpoints, refined for oscillation.
print("int phi_7^2 =", integrate_product(cosine.element(7), cosine.element(7)))
print("int X_3 X_9 =", integrate_product(haar.element(3), haar.element(9)))

# %% g_k(u) = int_0^u phi_k; for Haar the primitive is a tent of height 2^{-s/2}/2.
u = np.linspace(0, 1, 1025)
for m in (2, 5, 17):
    print(f"max |g_{m}| =", np.max(np.abs(prefix_integral(haar.element(m))(u))))

# %% Validation: Gram matrix, means and first moments against the declared guarantees.
for S in (cosine, haar, walsh, compress_reflect(haar), gram_schmidt_random(7, 32, 64)):
    rep = validate(S, 32)
    print(f"{S.name:>14}: gram err {rep.worst_orthonormality_error:.1e}, passed {rep.passed}")

# %% The compress-reflect transform always has zero mean; its first moments are -1/4 * int phi_k.
cr = compress_reflect(haar)
print("first moments of cr:haar, k = 1..4:", [round(r[2], 12) for r in validate(cr, 4).rows])
