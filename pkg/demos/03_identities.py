"""Summation-by-parts identities evaluated on both sides.

Run: python demos/03_identities.py
"""
# %% The discrete identity with its middle sum over i = 1..n closes exactly.
from cesarolab.func import make_named, polynomial
from cesarolab.identities import identity_2_8, identity_2_9, identity_2_10, identity_star
from cesarolab.ons import parse_system

p, one = make_named("identity"), make_named("one")
led = identity_2_10(p, p, 2)
print("int g F with g = F = u, n = 2:", led.lhs, "terms", led.rhs_terms, "gap", led.abs_gap)

# %% Stopping the middle sum at n - 1 leaves a measurable gap (1/96 here).
print("printed range gap:", identity_2_10(p, p, 2, as_printed=True).abs_gap)
print("second identity, f = G = u, n = 2:", identity_star(p, p, 2).rhs_terms)

# %% Integration by parts for coefficients and for the means themselves.
S = parse_system("haar")
sq = polynomial([0, 0, 1], name="u^2")
print("coefficient identity, k = 5:", identity_2_9(sq, S, 5).to_dict())
print("mean identity, n = 8, alpha = 1, x = 0.3: gap", identity_2_8(sq, S, 8, 1.0, 0.3).abs_gap)
