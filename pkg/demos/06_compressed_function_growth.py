"""Coefficient halving under compress-reflect and the growth curve of the compressed function.

Run: python demos/06_compressed_function_growth.py
"""
# %% gamma(u) = f(2u) on [0, 1/2), 0 after, with f(u) = 1 - cos(4 pi (u - 1/2)).
import numpy as np

from cesarolab.cesaro import coefficient_vector, mean_curves
from cesarolab.func import compress, lip_profile, make_named
from cesarolab.ons import compress_reflect, parse_system

g = make_named("gamma_compressed")
print("gamma at 0.25, 0.5, 0.75:", g(np.array([0.25, 0.5, 0.75])))
print("Lip seminorm of gamma':", lip_profile(g.derivative, 10_000).lip_seminorm, "(64 pi^2 =", 64 * np.pi**2, ")")

# %% Coefficients of the compressed function in the compress-reflected system are halved.
base = parse_system("rand:7:32:64")
cr = compress_reflect(base)
f = make_named("cos4pi_shifted")
halves = coefficient_vector(compress(f), cr, 32).values / coefficient_vector(f, base, 32).values
print("C_k(gamma, cr) / C_k(f, base), k = 1..6:", np.round(halves[:6], 12))

# %% The finite-n growth curve of sup_x |sigma_n^1(x, gamma)|; no divergence claim is made.
c = coefficient_vector(g, cr, 32).values
ns = list(range(1, 33))
curve = np.abs(mean_curves(c, cr, ns, 1.0, np.linspace(0, 1, 41))).max(axis=1)
print("running sup over n:", np.round(np.maximum.accumulate(curve)[::4], 4))
