"""Refutation witnesses and disjoint unions.

When F (possibly together with a compact K) has holes, puncturing the region
at one point per hole produces an open U containing F for which *no* valid V
exists: the builder either refuses outright or fails its own certificate.
Conversely, on simply connected regions two disjoint verified sets combine:
split the region along their distance bisector and build each half.
"""

from arakgrid import (CellSet, NotSimplyConnectedError, Primitive,
                      disjoint_union_v, make_grid, plane_region,
                      rasterize_closed, refutation_blocks_build, refute_witness)
from arakgrid.scene import parse_scene

grid = make_grid(-2, -2, 2, 2, 1 / 32)
region = plane_region(grid)

rings = rasterize_closed(
    [Primitive.polyline([(-1, -1), (1, -1), (1, 1), (-1, 1), (-1, -1)]),
     Primitive.polyline([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5),
                         (-0.5, -0.5)])], grid)
wit = refute_witness(rings, region, CellSet.empty(grid))
print("witness points, one per hole:", wit.points)
print("no V exists for the punctured U:",
      refutation_blocks_build(rings, wit.u, region))

# Disjoint union on a simply connected region.
F1 = rasterize_closed([Primitive.segment((-1.5, -0.5), (-0.3, -0.5))], grid)
F2 = rasterize_closed([Primitive.segment((0.3, 0.5), (1.5, 0.5))], grid)
combined = disjoint_union_v(F1, F2, region.omega, region)
print("combined certificate:", combined.certificate.to_dict())

# The same combination is refused on a punctured disk, where the two pieces
# can trap an annulus between them.
pair = parse_scene(
    "grid -1.25 -1.25 1.25 1.25 0.0078125\nfixture ex_2_10 0.3 0.6\n")
pregion = pair.region()
try:
    disjoint_union_v(pair.raster("F1"), pair.raster("F2"),
                     pregion.omega, pregion)
except NotSimplyConnectedError as exc:
    print("refused on the punctured disk:", exc)
