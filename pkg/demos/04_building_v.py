"""Constructing the neighborhood V.

Given F inside an open U, the builder covers the obstacle set (the region
minus U) with disks whose radii come from the distance rule
min(dist(x,F)/2, dist(x, boundary), 1), joins every disk center to the ideal
point alpha by a staged shortest cell path avoiding F, and removes disks and
curves from U.  What remains is V, and the builder re-verifies from scratch
that F lies in V, V lies in U, and the compactified complement is one piece.
"""

import pathlib

from arakgrid import build_v, make_grid, plane_region, rasterize_closed, Primitive
from arakgrid.render import render_svg

grid = make_grid(-2, -2, 2, 2, 1 / 32)
region = plane_region(grid)
F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], grid)
obstacles = rasterize_closed([Primitive.point((0, 1)),
                              Primitive.point((0, -1))], grid)

result = build_v(F, region.omega - obstacles, region)
print("certificate:", result.certificate.to_dict())
print("disks:", [(d.center_xy, round(d.radius, 3)) for d in result.cover.disks])
print("escape-path lengths:", [len(c.path) for c in result.plan.curves])

out = pathlib.Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
svg = render_svg(grid, region.omega.bits, [
    ("U", (region.omega - obstacles).bits),
    ("V", result.v.bits),
    ("F", F.bits),
    ("disks", [(d.center, d.radius) for d in result.cover.disks]),
    ("curves", [c.path for c in result.plan.curves]),
])
(out / "neighborhood.svg").write_bytes(svg)
print("wrote", out / "neighborhood.svg")

# The complement of V decomposes exactly into obstacles, disks and curves.
lhs = region.omega - result.v
rhs = (region.omega - (region.omega - obstacles)) \
    | (result.cover.covered & region.omega) | result.plan.union
print("complement decomposition exact:", lhs.same_cells(rhs))
