"""
Monte Carlo secrecy rates
=========================

Simulate each cooperation model and set the empirical CCDF beside its
closed form or bounds.
"""

import numpy as np

from secrecy_sg import analytic as an
from secrecy_sg.montecarlo import ScenarioSpec, coupled_trial_suite, estimate_ccdf

p = an.NetworkParams(1.0, 1.0, 4.0)
grid = np.arange(0.0, 6.5, 1.0)
n = 5000

est = estimate_ccdf(p, ScenarioSpec.full_info_nearest(), grid, n, master_seed=1)
print("nearest BS:  simulated", np.round(est.survival, 3))
print("             exact    ", np.round(an.ccdf_s1(p, grid), 3))
print(f"             mean {est.mean_rate:.3f} +- {est.mean_stderr:.3f} (exact 2)")

###############################################################################
# The optimal BS sits between two bounds.

est = estimate_ccdf(p, ScenarioSpec.full_info_optimal(), grid, n, master_seed=1)
print("optimal BS:  lower    ", np.round(an.ccdf_s2_lower(p, grid), 3))
print("             simulated", np.round(est.survival, 3))
print("             upper    ", np.round(an.ccdf_s2_upper_pgfl(p, grid), 3))

###############################################################################
# On a shared realization the models are ordered, and finite SNR never beats
# the high-SNR approximation.

for i in range(3):
    hi = coupled_trial_suite(p, 1.0, i, master_seed=1)
    fin = coupled_trial_suite(p.replace(snr=100.0), 1.0, i, master_seed=1)
    print(f"trial {i}: high-SNR {np.round(hi, 3)}  20 dB {np.round(fin, 3)}")
