"""Regression thresholds measured in the pilot run.

The O(1) statements being checked fix no constants, so each bound below is a
pilot maximum rounded up with modest headroom.  Pilot grid: n <= 512 (n <= 256
for the extremal ledger), the 11-point x grid 0, 0.1, ..., 1 (x0 in
{0.1, 0.3, 0.7} for the extremal ledger), alpha in {0.5, 1, 2}.
"""

PILOT_VERSION = "2026-10-15.1"

# max H_n(x) over the sweep; pilot maxima 0.0829 (cosine), 0.4955 (haar), 0.4954 (walsh)
C_TRIG = 0.09
C_HAAR = 0.55
C_WALSH = 0.55
H_CAPS = {"cosine": C_TRIG, "haar": C_HAAR, "walsh": C_WALSH}

# max over n in [256, 512] must not exceed TREND_FACTOR * max over n in [32, 64]
TREND_FACTOR = 1.1

# sup_n |sigma_n^alpha(x, f)| for the smooth catalog functions;
# pilot maxima 0.829 (cosine), 2.459 (haar)
SIGMA_CAPS = {"cosine": 1.1, "haar": 2.7}
THEOREM1_FUNCTIONS = ("half_square", "cos4pi_shifted_antiderivative", "poly:1,-2,0.5,3")

# c_n = H_n(x0) - |U_n(r_n)|; pilot maximum 0.0862 (rand:11:256:256)
CN_CAP = 0.1
EXTREMAL_SYSTEMS = ("cosine", "haar", "rand:7:256:256", "rand:11:256:256", "rand:13:256:256")
EXTREMAL_POINTS = (0.1, 0.3, 0.7)

# (1/n^2) sum phi_k(x)^2 <= const * n^{-1/2}; pilot maxima 1.0 for haar and walsh (at n = 1)
LEMMA1_CONST = {"cosine": 2.0, "haar": 1.0, "walsh": 1.0}

# A_n^alpha / n^alpha over 1 <= n <= 10^4; pilot ranges [1.12842, 1.5], [1.0001, 2], [0.50015, 3].
# The ratio decreases towards 1 / Gamma(1 + alpha), so the lower ends are that limit rounded down.
A_RATIO_BOUNDS = {0.5: (1.1283, 1.5), 1.0: (1.0, 2.0), 2.0: (0.5, 3.0)}

# largest adjacent difference quotient of gamma' on a 10^4-cell grid; pilot 631.654
GAMMA_DERIV_LIP_CAP = 632.0

# tolerance applied to every inequality check
SLACK_TOL = 1e-9


def manifest_thresholds() -> dict:
    return {
        "pilot_version": PILOT_VERSION,
        "C_trig": C_TRIG,
        "C_haar": C_HAAR,
        "C_walsh": C_WALSH,
        "trend_factor": TREND_FACTOR,
        "sigma_caps": dict(SIGMA_CAPS),
        "c_n_cap": CN_CAP,
        "lemma1_const": dict(LEMMA1_CONST),
        "gamma_deriv_lip_cap": GAMMA_DERIV_LIP_CAP,
        "slack_tol": SLACK_TOL,
    }
