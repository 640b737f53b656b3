"""The extremal function r_n = int sign(prefix) and the lower-bound ledger.

Run: python demos/05_extremal_functions.py
"""
# %% r_n has slopes +-1, so its Lip_1 norm never exceeds 2.
from cesarolab.kernel import extremal_function, extremal_ledger, kernel_slice, sign_change_set
from cesarolab.ons import parse_system

S = parse_system("cosine")
sl = kernel_slice(S, 24, 1.0, 0.3)
r = extremal_function(sl)
print("sign changes of the prefix:", r.breakpoints.round(6))
print("slopes:", r.slopes)
print("E_n =", sorted(sign_change_set(sl, r)))

# %% |U_n(r_n)| tracks H_n(x0) up to a bounded defect c_n.
for name in ("cosine", "haar", "rand:11:256:256"):
    S = parse_system(name)
    for n in (8, 32, 128):
        row = extremal_ledger(S, n, 1.0, 0.3)
        print(f"{name:>15} n={n:>3}: H={row.h_value:.4f} |U|={row.u_abs:.4f} c_n={row.c_n:.4f} "
              f"Lip1={row.lip1_norm:.6f} |E_n|={row.e_count}")
