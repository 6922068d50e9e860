"""
Typical Voronoi cell area
=========================

Estimate the area of the cell of a point added at the origin, by hit-or-miss
probing and exactly, and compare with the gamma fit used by the Voronoi
bound.
"""

import numpy as np

from secrecy_sg.specfun import CellAreaLaw, cell_area_laplace
from secrecy_sg.validation import sample_cell_areas

law = CellAreaLaw()
probe = sample_cell_areas(1.0, 300, seed=0, n_probes=20_000)
exact = sample_cell_areas(1.0, 5000, seed=0, method="exact")

# The first 300 exact areas come from the same patterns as the probe estimates.
print("max probe error on shared patterns:", np.max(np.abs(probe - exact[:300])))
print("mean exact area:", exact.mean(), "(fit mean", law.mean, ")")

###############################################################################
# The fit is good near s=1 and drifts in the far tail.

for s in (0.1, 1.0, 10.0):
    emp = np.mean(np.exp(-s * exact))
    print(f"s={s:5.1f}  empirical {emp:.5f}  gamma fit {cell_area_laplace(law, s):.5f}")
