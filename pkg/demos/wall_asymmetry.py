"""Relative spectral asymmetry of a codimension-one wall.

The wall correction to the index is assembled from characteristic forms of
the one-sided connections.  Two weighting orders of the mixed terms give
the same number, and on the flat two-torus the assembled value matches the
spectral asymmetry difference across the wall up to the even integer that
spectral flow is allowed to contribute.
"""

import numpy as np

from wallindex import (Grid, WallData, generalized_rsa, flat_wall_report)
from wallindex.presets import constant_jump, random_gauge, random_frame

print("Two-torus, rank 1, constant tangential jump of height 0.3:")
g = Grid.torus((16, 16))
w = WallData(g, rank=1, gauge_jump=constant_jump(g.wall_grid(), 0.3, 1))
rep = flat_wall_report(w)
print(f"  assembled value          {rep.value:+.10f}")
print(f"  weighting variants       {rep.variants['ahat_plus']:+.10f}  "
      f"{rep.variants['ahat_minus']:+.10f}")
print(f"  frame channel            {rep.frame_term:+.1e}  "
      f"(no frame jump, so it vanishes)")
print(f"  one-sided asymmetries    {rep.spectral_plus.value:+.6f}  "
      f"{rep.spectral_minus.value:+.6f}")
print(f"  spectral difference      {rep.spectral_difference:+.10f}")
print(f"  even-integer flow offset {2 * rep.flow_offset:+d}")
print(f"  matched residual         {rep.matched_residual:.2e}")

print("\nFour-torus with seeded band-limited jumps in both channels:")
g4 = Grid.torus((12,) * 4)
sigma = g4.wall_grid()
rng = np.random.default_rng(42)
w4 = WallData(g4, rank=2,
              gauge_background=random_gauge(g4, rng, 2, scale=0.25),
              gauge_jump=random_gauge(sigma, rng, 2, scale=0.35),
              frame_background=random_frame(g4, rng, 4, scale=0.2),
              frame_jump=random_frame(sigma, rng, 4, scale=0.3))
plus = generalized_rsa(w4, variant="ahat_plus")
minus = generalized_rsa(w4, variant="ahat_minus")
print(f"  value, frame weighted on the plus side   {plus:+.10f}")
print(f"  value, frame weighted on the minus side  {minus:+.10f}")
print(f"  gap {abs(plus - minus):.2e}")
print("\nOn a three-dimensional wall the degree bookkeeping makes the two")
print("orders agree identically, which is what the gap above shows.")
