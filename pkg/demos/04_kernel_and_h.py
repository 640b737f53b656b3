"""The kernel Q_n(u, x), its prefix integral, and the H_n(x) diagnostic.

Run: python demos/04_kernel_and_h.py
"""
# %% Q_n(., x) is a handle in u; its prefix integral is exact (second primitives).
import numpy as np

from cesarolab import defaults
from cesarolab.kernel import diagnostic_rows, h_diagnostic, kernel_slice, lemma2_check
from cesarolab.ons import parse_system

S = parse_system("haar")
sl = kernel_slice(S, 16, 1.0, 0.3)
u = np.linspace(0, 1, 9)
print("Q_16(u, 0.3):", np.round(sl.q_handle(u), 4))
print("prefix:      ", np.round(sl.prefix_at(u), 4))
print("H_16(0.3) =", h_diagnostic(sl), " worst per-interval slack:", lemma2_check(sl))

# %% H_n stays bounded for cosine and Haar; the committed caps come from a pilot run.
for name in ("cosine", "haar", "walsh", "rand:7:32:64"):
    S = parse_system(name)
    ns = range(2, 33) if S.max_index else range(2, 257)
    rows = diagnostic_rows(S, ns, (1.0,), np.linspace(0, 1, 11), lemma2=False)
    cap = defaults.H_CAPS.get(name, "none (exploratory)")
    print(f"{name:>13}: max H_n = {max(r.h_value for r in rows):.4f}, cap {cap}")
