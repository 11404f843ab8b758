import math

import numpy as np
import pytest

from arakgrid import (BuildRefusalError, CellSet,
                      NotSimplyConnectedError, PreconditionError, Primitive,
                      build_exhaustion, build_v, disjoint_union_v, disk_cover,
                      escape_curves, holes, make_grid, open_disk_region,
                      plane_region, rasterize_closed, refutation_blocks_build,
                      refute_witness)
from arakgrid.scene import parse_scene

from oracles import bfs_path_ok

rng = np.random.default_rng(31337)


def _plane(delta=1 / 32, span=2.0):
    g = make_grid(-span, -span, span, span, delta)
    return g, plane_region(g)


def _points(g, pts):
    return rasterize_closed([Primitive.point(p) for p in pts], g)


class TestDiskCover:
    def test_no_obstacles_empty_cover(self):
        g, region = _plane()
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        cover = disk_cover(F, region.omega, region)
        assert cover.disks == [] and cover.covered.is_empty()

    def test_far_point_radius_capped_at_one(self):
        g, region = _plane(1 / 16, 8.0)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        obstacle = _points(g, [(0, 4)])          # distance 4 from F, plane scene
        cover = disk_cover(F, region.omega - obstacle, region)
        assert len(cover.disks) == 1
        assert cover.disks[0].radius == pytest.approx(1.0, abs=1e-9)

    def test_two_obstacles_covered(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        obstacles = _points(g, [(0, 1), (0, -1)])
        cover = disk_cover(F, region.omega - obstacles, region)
        assert len(cover.disks) <= 2
        assert obstacles.issubset(cover.covered)
        for d in cover.disks:
            df = math.hypot(d.center_xy[0] - max(0, min(1, d.center_xy[0])),
                            d.center_xy[1])
            assert d.radius <= df / 2 + 1e-6 and d.radius <= 1.0

    def test_refuses_when_carrier_touches_obstacles(self):
        g, region = _plane()
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        with pytest.raises(PreconditionError):
            disk_cover(F, region.omega - F, region)

    def test_annulus_accounting(self):
        g, region = _plane(1 / 16)
        F = rasterize_closed([Primitive.segment((0, 0), (0.5, 0))], g)
        obstacles = _points(g, [(0, 1), (1.2, 1.2), (-1.5, -1.5)])
        exh = build_exhaustion(region, 3)
        cover = disk_cover(F, region.omega - obstacles, region, exhaustion=exh)
        assert sum(cover.per_annulus.values()) == len(cover.disks)


class TestEscapeCurves:
    def test_empty_cover_empty_plan(self):
        g, region = _plane()
        exh = build_exhaustion(region, 3)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        plan = escape_curves(disk_cover(F, region.omega, region,
                                        exhaustion=exh), F, region, exh)
        assert plan.curves == [] and plan.union.is_empty()

    def test_single_disk_escapes_past_vertical_wall(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, -1.5), (0, 1.5))], g)
        obstacle = _points(g, [(-1, 0)])
        exh = build_exhaustion(region, 3)
        cover = disk_cover(F, region.omega - obstacle, region, exhaustion=exh)
        plan = escape_curves(cover, F, region, exh)
        assert len(plan.curves) == 1
        path = plan.curves[0].path
        assert bfs_path_ok(path, F.bits, region.alpha_adjacent)
        assert path[0] == cover.disks[0].center
        assert all(i < g.point_cell(0, 0)[0] for i, _ in path)  # stays west of F

    def test_randomized_scenes_all_paths_valid(self):
        for _ in range(100):
            g, region = _plane(1 / 16)
            x0 = rng.uniform(-1.5, 0.5)
            F = rasterize_closed(
                [Primitive.segment((x0, rng.uniform(-1, 1)),
                                   (x0 + rng.uniform(0.5, 1.5),
                                    rng.uniform(-1, 1)))], g)
            pts = []
            df = None
            from arakgrid import distance_field
            df = distance_field(F).values
            while len(pts) < int(rng.integers(1, 4)):
                p = rng.uniform(-1.8, 1.8, size=2)
                i, j = g.point_cell(*p)
                if df[j, i] > 3 * g.delta:
                    pts.append(tuple(p))
            obstacles = _points(g, pts)
            exh = build_exhaustion(region, 3)
            cover = disk_cover(F, region.omega - obstacles, region,
                               exhaustion=exh)
            plan = escape_curves(cover, F, region, exh)
            assert len(plan.curves) == len(cover.disks)
            for c in plan.curves:
                assert bfs_path_ok(c.path, F.bits, region.alpha_adjacent)

    def test_enclosed_center_is_refused(self):
        g, region = _plane(1 / 16)
        ring = Primitive.polyline([(-1, -1), (1, -1), (1, 1), (-1, 1), (-1, -1)])
        F = rasterize_closed([ring], g)
        obstacle = _points(g, [(0, 0)])
        exh = build_exhaustion(region, 3)
        cover = disk_cover(F, region.omega - obstacle, region, exhaustion=exh)
        with pytest.raises(BuildRefusalError):
            escape_curves(cover, F, region, exh)

    def test_stage_segments_stay_in_recorded_components(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        obstacles = _points(g, [(0, 1), (0, -1)])
        exh = build_exhaustion(region, 3)
        cover = disk_cover(F, region.omega - obstacles, region, exhaustion=exh)
        plan = escape_curves(cover, F, region, exh)
        for curve in plan.curves:
            full = curve.path
            assert full[0] == curve.center
            rebuilt = [full[0]]
            for st in curve.stages:
                seg = st.path
                assert seg[0] == rebuilt[-1]
                rebuilt.extend(seg[1:])
            assert rebuilt == full


class TestBuildV:
    def test_everything_empty(self):
        g, region = _plane()
        res = build_v(CellSet.empty(g), CellSet.empty(g), region)
        assert res.v.is_empty()
        assert res.certificate.ok()

    def test_compact_carrier_full_u(self):
        g, region = _plane()
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        res = build_v(F, region.omega, region)
        assert res.v.same_cells(region.omega)
        assert res.certificate.ok()

    def test_segment_with_two_obstacles(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        obstacles = _points(g, [(0, 1), (0, -1)])
        res = build_v(F, region.omega - obstacles, region)
        c = res.certificate
        assert c.f_in_v and c.v_in_u and c.complement_connected
        assert c.sphere_connected is True
        assert len(res.cover.disks) == 2 and len(res.plan.curves) == 2

    def test_complement_decomposition_identity(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        obstacles = _points(g, [(0.3, 1.1), (-0.7, -0.9)])
        U = region.omega - obstacles
        res = build_v(F, U, region)
        lhs = region.omega - res.v
        rhs = (region.omega - U) | (res.cover.covered & region.omega) \
            | res.plan.union
        assert lhs.same_cells(rhs)

    def test_certificate_idempotence(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        U = region.omega - _points(g, [(0, 1)])
        res = build_v(F, U, region)
        again = res.reverify(F, U, region)
        assert again == res.certificate

    def test_shrinking_u_shrinks_v(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        u_big = region.omega - _points(g, [(0, 1)])
        u_small = u_big - _points(g, [(0, -1), (1.2, 1.2)])
        v_small = build_v(F, u_small, region).v
        assert v_small.issubset(u_small)


class TestRefuteWitness:
    def test_staircase_with_disk_many_corridor_witnesses(self):
        sc = parse_scene(
            "grid -3 -3 3 16 0.03125\nomega plane\nfixture intro_staircase\n")
        region = sc.region()
        F = sc.raster("F")
        K = rasterize_closed([Primitive.disk((0, 0), 2)], sc.grid)
        wit = refute_witness(F, region, K)
        assert len(wit.points) >= 3
        hs = holes(F | K, region)
        assert len(wit.points) == hs.count

    def test_twin_circles_single_annulus_witness(self):
        g = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 128)
        region = open_disk_region(g, 0, 0, 1, punctured=True)
        F = rasterize_closed([Primitive.circle((0, 0), 0.3),
                              Primitive.circle((0, 0), 0.6)], g)
        wit = refute_witness(F, region, CellSet.empty(g))
        assert len(wit.points) == 1
        assert 0.3 < math.hypot(*wit.points[0]) < 0.6
        assert refutation_blocks_build(F, wit.u, region)

    def test_nested_rings_block_construction(self):
        g, region = _plane(1 / 32)
        rings = [Primitive.polyline([(-1, -1), (1, -1), (1, 1), (-1, 1), (-1, -1)]),
                 Primitive.polyline([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5),
                                     (-0.5, 0.5), (-0.5, -0.5)])]
        F = rasterize_closed(rings, g)
        wit = refute_witness(F, region, CellSet.empty(g))
        assert len(wit.points) == 2
        assert refutation_blocks_build(F, wit.u, region)

    def test_requires_nonempty_hole_union(self):
        g, region = _plane()
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        with pytest.raises(PreconditionError):
            refute_witness(F, region, CellSet.empty(g))


class TestDisjointUnion:
    def test_two_segments_combined_certificate(self):
        g, region = _plane(1 / 32)
        F1 = rasterize_closed([Primitive.segment((-1.5, -0.5), (-0.3, -0.5))], g)
        F2 = rasterize_closed([Primitive.segment((0.3, 0.5), (1.5, 0.5))], g)
        res = disjoint_union_v(F1, F2, region.omega, region)
        c = res.certificate
        assert c.ok()
        assert c.parts_disjoint is True
        assert c.part_sphere_connected == (True, True)

    def test_empty_first_carrier_degenerates(self):
        g, region = _plane(1 / 32)
        F2 = rasterize_closed([Primitive.segment((0.3, 0.5), (1.5, 0.5))], g)
        res = disjoint_union_v(CellSet.empty(g), F2, region.omega, region)
        direct = build_v(F2, region.omega, region)
        assert res.v.same_cells(direct.v)

    def test_overlap_rejected(self):
        g, region = _plane(1 / 32)
        F = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        with pytest.raises(PreconditionError):
            disjoint_union_v(F, F, region.omega, region)

    def test_punctured_region_refused(self):
        g = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 64)
        region = open_disk_region(g, 0, 0, 1, punctured=True)
        F1 = rasterize_closed([Primitive.circle((0, 0), 0.3)], g)
        F2 = rasterize_closed([Primitive.circle((0, 0), 0.6)], g)
        with pytest.raises(NotSimplyConnectedError):
            disjoint_union_v(F1, F2, region.omega, region)
