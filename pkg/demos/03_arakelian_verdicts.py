"""Staged Arakelian verdicts.

The criterion: a hole-free closed set is Arakelian exactly when, for every
compact K, the holes of F together with K stay inside a compact part of the
region.  The checker samples that quantifier with an exhaustion sequence and
a schedule of growing windows, and stamps its verdicts accordingly:
VERIFIED_UP_TO a level, REFUTED with a re-checkable witness, or
EVIDENCE_DIVERGENT when a fixed compact keeps trapping farther holes as the
window grows.
"""

from arakgrid import build_exhaustion, check_arakelian
from arakgrid.scene import parse_scene

# A segment in the plane: verified at every level, all hole unions empty.
segment = parse_scene(
    "grid -2 -2 2 2 0.03125\nomega plane\nset F segment -1 0 1 0\n")
region = segment.region()
verdict = check_arakelian(segment.raster("F"), region,
                          build_exhaustion(region, 3))
print("segment:", verdict.status, "level", verdict.level)

# The step curve: hole-free alone, but its corridors trap against any large
# disk, and the trapped union climbs with the window.
stairs = parse_scene(
    "grid -3 -3 3 8 0.03125\nomega plane\nfixture intro_staircase\n")
region = stairs.region()
exh = build_exhaustion(region, 3)
schedule = [stairs.grid.with_ymax(h) for h in (8, 16, 32)]
verdict = check_arakelian(
    stairs.raster("F"), region, exh, schedule,
    scene_builder=lambda g: (stairs.raster("F", g), stairs.region(g)))
print("step curve:", verdict.status)
for row in verdict.growth:
    print(f"  level {row['level']}: hole-union outer radius per window "
          f"{[round(m, 2) for m in row['max_abs']]}")

# Two concentric circles in the punctured disk: refuted outright.
pair = parse_scene(
    "grid -1.25 -1.25 1.25 1.25 0.0078125\nfixture ex_2_10 0.3 0.6\n")
region = pair.region()
verdict = check_arakelian(pair.raster("F"), region,
                          build_exhaustion(region, 3))
print("concentric pair:", verdict.status, "witness at",
      [round(v, 3) for v in verdict.witness["point"]])
