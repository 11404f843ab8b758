"""Holes and the ideal point alpha.

A hole of F in a region is a component of the complement that is trapped:
it neither touches the region's boundary inside the window nor any edge the
scene declared unbounded.  The punctured disk shows why the region matters:
the same circle has a hole in the full disk but none in the punctured one,
because the puncture is a piece of boundary the inner component can reach.
"""

from arakgrid import (Primitive, compactified_complement_connected, holes,
                      make_grid, open_disk_region, rasterize_closed)

grid = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 64)
circle = rasterize_closed([Primitive.circle((0, 0), 0.5)], grid)

full = open_disk_region(grid, 0, 0, 1)
punctured = open_disk_region(grid, 0, 0, 1, punctured=True)

print("holes of the circle in the full disk:   ",
      holes(circle, full).count)
print("holes of the circle in the punctured disk:",
      holes(circle, punctured).count)

# The compactified complement tells the same story as a tri-state verdict.
for name, region in (("full", full), ("punctured", punctured)):
    rep = compactified_complement_connected(circle, region)
    print(f"(region+alpha) minus circle connected in {name} disk:",
          rep.connected)

# Two concentric circles in the punctured disk: each escapes alone, but the
# annulus between them is trapped by the pair.
pair = rasterize_closed([Primitive.circle((0, 0), 0.3),
                         Primitive.circle((0, 0), 0.6)], grid)
hs = holes(pair, punctured)
print("holes of the concentric pair in the punctured disk:", hs.count)
print("a witness cell inside the trapped annulus:",
      grid.cell_center(*hs.witness_cells()[0]))
