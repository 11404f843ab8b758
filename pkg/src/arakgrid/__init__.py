"""arakgrid: grid-scale verification, refutation and constructive witnesses
for the Arakelian property of closed sets in planar regions."""

from .arakelian import (ArakelianVerdict, Exhaustion, ExtentRecord,
                        alpha_neighborhood, build_exhaustion, check_arakelian,
                        hole_union_extent)
from .builder import (Certificate, DiskCover, EscapePlan, NeighborhoodResult,
                      build_v, disjoint_union_v, disk_cover, escape_curves,
                      refutation_blocks_build, refute_witness)
from .errors import (AmbiguousRegionError, ArakGridError, BuildRefusalError,
                     CertificateError, InputError, LiftVerificationError,
                     NotSimplyConnectedError, PreconditionError,
                     ResolutionError, SceneParseError)
from .grid import (CellSet, DistanceField, GridSpec, Primitive, distance_field,
                   make_grid, rasterize_closed, rasterize_open_disk,
                   rasterize_open_rect)
from .loglift import LogLiftResult, SampledFunction, log_lift, tietze_extend
from .scene import Scene, parse_scene, print_scene, scenes_equivalent
from .topology import (ComponentLabeling, HoleSet, RegionModel,
                       compactified_complement_connected, holes,
                       label_components, open_disk_region, open_rect_region,
                       plane_region, sphere_complement_connected)

__version__ = "0.1.0"
