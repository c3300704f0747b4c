"""Flat index theorem on the two-torus: prediction against eigensolve.

The predicted index is a bulk flux integral plus wall corrections; the
spectral index counts chiral zero modes of the dense discretized operator.
For pure flux the count is the flux quantum; a constant wall jump with a
compensating seam winding leaves the integer unchanged while moving weight
between the bulk and wall terms.
"""

from wallindex import Grid, WallData, index_report
from wallindex.presets import constant_jump


def case(points, flux, jump=0.0):
    g = Grid.torus((points, points))
    kw = dict(rank=1, twist_flux=flux)
    if jump:
        kw["gauge_jump"] = constant_jump(g.wall_grid(), jump, 1)
    return index_report(WallData(g, **kw))


print("Pure flux sweep at 16 x 16:")
print("  flux   predicted      bulk      wall    spectral  kernel  purity")
for m in (-2, -1, 0, 1, 2):
    r = case(16, m)
    purity = "-" if r.min_purity is None else f"{r.min_purity:.3f}"
    print(f"  {m:+d}    {r.predicted:+.6f}  {r.bulk_term:+.4f}  "
          f"{r.wall_term:+.4f}    {r.spectral:+d}       {r.kernel_dim}"
          f"      {purity}")

print("\nWinding-compensated wall configurations at 16 x 16:")
print("  (flux, jump)   predicted      bulk      wall    spectral")
for flux, jump in ((1, 0.3), (-1, 0.7), (2, 0.4)):
    r = case(16, flux, jump)
    print(f"  ({flux:+d}, {jump})    {r.predicted:+.6f}  {r.bulk_term:+.4f}"
          f"  {r.wall_term:+.4f}    {r.spectral:+d}")

print("\nZero modes sit in a single chirality (purity near 1) and the")
print("paired nonzero spectrum is symmetric about zero.  The same sweep")
print("at 24 x 24 and 32 x 32 backs the acceptance gate.")
