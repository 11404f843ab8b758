"""Lifting a continuous logarithm.

A nonvanishing continuous function on a verified carrier lifts to a
logarithm: extend it off the carrier by nearest values, carve away the zero
set (empty by construction), build the neighborhood V, and unwrap the phase
along a spanning tree of V's cell graph.  The result satisfies exp(g) = f on
the carrier up to machine rounding, and is unique up to 2*pi*i*k.
"""

import cmath
import math

from arakgrid import (Primitive, SampledFunction, log_lift, make_grid,
                      plane_region, rasterize_closed)

delta = 1 / 64
# offset the window half a cell so one row of centers lies exactly on y = 0
grid = make_grid(0.0, -0.5 + delta / 2, 2.5, 0.5 + delta / 2, delta)
region = plane_region(grid)
F = rasterize_closed([Primitive.segment((1, 0), (2, 0))], grid)

f = SampledFunction.from_callable(F, lambda z: z)
res = log_lift(F, f, region)
print(f"f(z) = z on [1,2]: residual {res.residual_max:.2e}")
i, j = F.min_cell()
x = grid.cell_center(i, j)[0]
print(f"g at x = {x:.4f}: {res.g.at(i, j):.6f}   (ln x = {math.log(x):.6f})")

# A C-shaped carrier: the lift of exp is the identity plus one branch
# constant, the same 2*pi*i*k on the whole carrier.
grid2 = make_grid(-1, -1, 2, 2, 1 / 64)
region2 = plane_region(grid2)
C = rasterize_closed([Primitive.polyline(
    [(1.2, 1.5), (0.2, 1.5), (0.2, -0.9), (1.2, -0.9)])], grid2)
res2 = log_lift(C, SampledFunction.from_callable(C, cmath.exp), region2)
i0, j0 = C.min_cell()
z0 = complex(*grid2.cell_center(i0, j0))
k = round((res2.g.at(i0, j0).imag - z0.imag) / (2 * math.pi))
print(f"exp on a C-shaped carrier: residual {res2.residual_max:.2e}, "
      f"branch constant 2*pi*i*{k}")
