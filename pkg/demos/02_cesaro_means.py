"""Cesaro (C, alpha) numbers, weights and means.

Run: python demos/02_cesaro_means.py
"""
# %% A_n^alpha and the weights w_{n,k} = A_{n-k}^alpha / A_n^alpha (decreasing in k, inside (0, 1)).
import numpy as np

from cesarolab.cesaro import cesaro_a, cesaro_weights, coefficient_vector, mean_curves, partial_sum
from cesarolab.func import make_named
from cesarolab.ons import parse_system

print("A_2^0.5 =", cesaro_a(2, 0.5), "  A_10^1 =", cesaro_a(10, 1.0))
print("w_{5,k} for alpha = 1:", cesaro_weights(5, 1.0).weights)
for a in (0.5, 1.0, 2.0):
    n = [10, 100, 1000, 10000]
    print(f"A_n^{a}/n^{a}:", [round(cesaro_a(int(k), a) / k**a, 5) for k in n])

# %% Fourier coefficients and partial sums of u^2/2 in the cosine system.
S = parse_system("cosine")
f = make_named("half_square")
c = coefficient_vector(f, S, 8).values
print("C_1..C_8:", np.round(c, 6))
print("S_8(0.3) =", partial_sum(f, S, 8, 0.3), " target:", (0.045 + 0.245) / 2 - 1 / 6)

# %% Means for many n at once.  cos(2 pi k u) without a constant term converges to
#    (f(x) + f(1 - x)) / 2 - int f; at x = 0.3 that is 0.145 - 1/6 = -0.0217.
ns = [4, 16, 64, 256]
curves = mean_curves(coefficient_vector(f, S, 256).values, S, ns, 1.0, [0.1, 0.3, 0.5])
for n, row in zip(ns, curves):
    print(f"sigma_{n}^1 at x = 0.1, 0.3, 0.5:", np.round(row, 5))
