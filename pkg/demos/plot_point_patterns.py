"""
Point patterns and nearest-neighbour laws
=========================================

Sample Poisson patterns on a disk and compare nearest-neighbour distances
with their closed-form laws.
"""

import math

import numpy as np
from scipy import stats

from secrecy_sg import analytic as an
from secrecy_sg.pointprocess import DiskWindow, nearest_distance, sample_ppp, window_radius_for
from secrecy_sg.validation import sample_dmin

rng = np.random.default_rng(0)

# A window that holds at least one point except with probability 1e-6.
radius = window_radius_for(1e-6, 1.0)
window = DiskWindow(2 * radius)
print(f"window radius for eps=1e-6: {radius:.4f}")

bs = sample_ppp(1.0, window, rng)
print(f"{len(bs)} points, expected {window.area:.1f}")

###############################################################################
# Distance from the origin to the nearest point: P(r_u > r) = exp(-pi r^2).

r_u = np.array([nearest_distance((0.0, 0.0), sample_ppp(1.0, window, rng)) for _ in range(4000)])
print("KS vs exp(-pi r^2):", stats.kstest(r_u, lambda r: 1 - np.exp(-math.pi * np.asarray(r) ** 2)).statistic)

###############################################################################
# D_min, half the nearest co-BS distance, has four times the density.

d = sample_dmin(1.0, 4000, seed=1)
p = an.NetworkParams()
print("KS vs D_min law:   ", stats.kstest(d, lambda r: 1 - an.dmin_survival(p, np.maximum(r, 0))).statistic)
