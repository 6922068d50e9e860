"""
Closed-form secrecy-rate curves
===============================

Evaluate the secure-coverage CCDFs and mean secrecy rates for the four
cooperation models at unit densities, then sweep the eavesdropper density.
"""

import numpy as np

from secrecy_sg import analytic as an

# Unit BS and eavesdropper densities, path-loss exponent 4, high SNR.
p = an.NetworkParams(lambda_bs=1.0, lambda_e=1.0, alpha=4.0)
r0 = np.arange(0.0, 6.5, 1.0)

print("r0   nearest   optimal<=   cell>=   radius(d0=1)")
for r, a, b, c, d in zip(r0, an.ccdf_s1(p, r0), an.ccdf_s2_upper_pgfl(p, r0),
                         an.ccdf_s3_cell_lower(p, r0), an.ccdf_s3_radius(p, r0, 1.0)):
    print(f"{r:3.0f}  {a:8.4f}  {b:9.4f}  {c:7.4f}  {d:12.4f}")

###############################################################################
# Means: the nearest-BS mean is exactly 2 bits at equal densities.

print("mean, nearest BS:          ", an.mean_s1(p))
print("mean, optimal BS, bounds:  ", an.mean_s2_lower(p), an.mean_s2_upper(p))
print("mean, cell info, lower:    ", an.mean_s3_cell_lower(p))
print("mean, detection radius 1:  ", an.mean_s3_radius(p, 1.0))

###############################################################################
# More eavesdroppers means less secrecy for every model.

for lam_e in np.logspace(-1, 1, 5):
    q = p.replace(lambda_e=lam_e)
    print(f"lambda_e={lam_e:6.3f}  nearest={an.mean_s1(q):6.3f}  cell>={an.mean_s3_cell_lower(q):6.3f}")
