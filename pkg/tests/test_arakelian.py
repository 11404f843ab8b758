import json
import math

import numpy as np
import pytest

from arakgrid import (CellSet, PreconditionError, Primitive,
                      alpha_neighborhood, build_exhaustion, check_arakelian,
                      hole_union_extent, holes, make_grid, open_disk_region,
                      open_rect_region, plane_region, rasterize_closed)
from arakgrid.arakelian import (EVIDENCE_DIVERGENT, INCONCLUSIVE, REFUTED,
                                VERIFIED_UP_TO)
from arakgrid.scene import parse_scene
from arakgrid.topology import custom_region

rng = np.random.default_rng(424242)


def _staircase_scene(ymax=8):
    return parse_scene(
        f"grid -3 -3 3 {ymax} 0.03125\nomega plane\nfixture intro_staircase\n")


class TestBuildExhaustion:
    def test_full_window_single_level_margin(self):
        g = make_grid(0, 0, 8, 8, 1)
        region = open_rect_region(g, 0, 0, 8, 8)
        exh = build_exhaustion(region, 1)
        expect = np.zeros((8, 8), bool)
        expect[1:-1, 1:-1] = True
        assert np.array_equal(exh.levels[0].bits, expect)
        assert holes(exh.levels[0], region).count == 0

    def test_punctured_disk_levels_are_annulus_like(self):
        g = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 64)
        region = open_disk_region(g, 0, 0, 1, punctured=True)
        exh = build_exhaustion(region, 3)
        exh.validate(region)
        ci, cj = g.point_cell(0.0, 0.0)
        for K in exh.levels:
            assert not K.bits[cj, ci]                 # puncture avoided
            assert holes(K, region).count == 0

    def test_slit_disk_two_levels(self):
        g = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 64)
        from arakgrid import rasterize_open_disk
        disk = rasterize_open_disk(g, 0, 0, 1)
        slit = rasterize_closed([Primitive.segment((0, 0), (1, 0))], g)
        region = custom_region(g, disk - slit, simply_connected=True)
        exh = build_exhaustion(region, 2)
        exh.validate(region)
        assert (exh.levels[0] & slit).is_empty()
        assert (exh.levels[1] & slit).is_empty()

    def test_invariants_on_randomized_scenes(self):
        # interior nesting and hole-freeness over many random regions
        local = np.random.default_rng(99)
        n_scenes = 1000
        for t in range(n_scenes):
            kind = t % 4
            g = make_grid(0, 0, 3, 3, 1 / 16)
            if kind == 0:
                region = plane_region(g)
            elif kind == 1:
                cx, cy = local.uniform(1.2, 1.8, size=2)
                region = open_disk_region(g, cx, cy, local.uniform(0.7, 1.1),
                                          punctured=bool(local.integers(2)))
            elif kind == 2:
                x1, y1 = local.uniform(0.1, 0.8, size=2)
                region = open_rect_region(g, x1, y1, x1 + local.uniform(1.2, 2.0),
                                          y1 + local.uniform(1.2, 2.0))
            else:
                from arakgrid import rasterize_open_disk
                disk = rasterize_open_disk(g, 1.5, 1.5, 1.1)
                ang = local.uniform(0, 2 * math.pi)
                slit = rasterize_closed(
                    [Primitive.segment((1.5, 1.5),
                                       (1.5 + 1.2 * math.cos(ang),
                                        1.5 + 1.2 * math.sin(ang)))], g)
                region = custom_region(g, disk - slit, simply_connected=True)
            exh = build_exhaustion(region, int(local.integers(1, 4)))
            exh.validate(region)

    def test_rejects_zero_levels(self):
        g = make_grid(0, 0, 4, 4, 1)
        with pytest.raises(PreconditionError):
            build_exhaustion(plane_region(g), 0)


class TestHoleUnionExtent:
    def test_segment_with_empty_k(self):
        g = make_grid(-2, -2, 2, 2, 1 / 16)
        region = plane_region(g)
        F = rasterize_closed([Primitive.segment((-1, 0), (1, 0))], g)
        rec = hole_union_extent(F, CellSet.empty(g), region)
        assert rec.count == 0 and rec.max_abs == 0.0 and rec.area == 0.0

    def test_staircase_with_disk_grows_with_window_top(self):
        K_prim = [Primitive.disk((0, 0), 2)]
        counts, maxes = [], []
        for H in (8, 16, 32):
            sc = _staircase_scene(H)
            region = sc.region()
            F = sc.raster("F")
            K = rasterize_closed(K_prim, sc.grid)
            rec = hole_union_extent(F, K, region)
            counts.append(rec.count)
            maxes.append(rec.max_abs)
        assert counts[0] < counts[1] < counts[2]
        assert maxes[0] < maxes[1] < maxes[2]

    def test_u_carrier_bridged_by_rect_has_one_hole(self):
        # Two parallel arms (a U-shaped polyline) whose mouth is bridged by a
        # solid rectangle: exactly one trapped room, matching the flood-fill
        # oracle.  (Two *disjoint* parallel segments plus one convex rectangle
        # cannot enclose anything; the U supplies the third wall.)
        g = make_grid(-2, -2, 2, 2, 1 / 16)
        region = plane_region(g)
        F = rasterize_closed(
            [Primitive.polyline([(1, 1), (-1, 1), (-1, -1), (1, -1)])], g)
        K = rasterize_closed([Primitive.rect((0.9, -1.2), (1.3, 1.2))], g)
        rec = hole_union_extent(F, K, region)
        assert rec.count == 1

        from oracles import naive_holes
        want = naive_holes(region.omega.bits, (F | K).bits, region.alpha_border)
        hs = holes(F | K, region)
        assert np.array_equal(hs.union.bits, want)
        assert rec.max_abs == pytest.approx(
            float(g.center_abs()[want].max()), abs=0)


class TestCheckArakelian:
    def test_segment_in_plane_verified_all_extents_empty(self):
        g = make_grid(-2, -2, 2, 2, 1 / 32)
        region = plane_region(g)
        F = rasterize_closed([Primitive.segment((-1, 0), (1, 0))], g)
        exh = build_exhaustion(region, 3)
        v = check_arakelian(F, region, exh)
        assert v.status == VERIFIED_UP_TO and v.level == 3
        assert all(rec.count == 0 for rec in v.extents[0])

    def test_twin_circles_refuted_with_annulus_witness(self):
        g = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 128)
        region = open_disk_region(g, 0, 0, 1, punctured=True)
        F = rasterize_closed([Primitive.circle((0, 0), 0.3),
                              Primitive.circle((0, 0), 0.6)], g)
        exh = build_exhaustion(region, 3)
        v = check_arakelian(F, region, exh)
        assert v.status == REFUTED
        x, y = v.witness["point"]
        assert 0.3 < math.hypot(x, y) < 0.6

    def test_staircase_divergent_over_window_schedule(self):
        sc = _staircase_scene()
        region = sc.region()
        F = sc.raster("F")
        exh = build_exhaustion(region, 3)
        sched = [sc.grid.with_ymax(h) for h in (8, 16, 32)]
        v = check_arakelian(F, region, exh, sched,
                            scene_builder=lambda g: (sc.raster("F", g),
                                                     sc.region(g)))
        assert v.status == EVIDENCE_DIVERGENT
        row = next(r for r in v.growth if r["divergent"])
        assert row["max_abs"][0] < row["max_abs"][1] < row["max_abs"][2]

    def test_staircase_single_window_is_inconclusive(self):
        sc = _staircase_scene()
        region = sc.region()
        F = sc.raster("F")
        exh = build_exhaustion(region, 3)
        v = check_arakelian(F, region, exh)
        assert v.status == INCONCLUSIVE

    def test_schedule_requires_scene_builder(self):
        g = make_grid(-2, -2, 2, 2, 1 / 16)
        region = plane_region(g)
        F = rasterize_closed([Primitive.segment((-1, 0), (1, 0))], g)
        exh = build_exhaustion(region, 2)
        with pytest.raises(PreconditionError):
            check_arakelian(F, region, exh, [g.with_ymax(4)])

    def test_refuted_witness_revalidates_on_rebuilt_scene(self):
        text = "grid -1.25 -1.25 1.25 1.25 0.0078125\nfixture ex_2_10 0.3 0.6\n"
        sc = parse_scene(text)
        region = sc.region()
        F = sc.raster("F")
        v = check_arakelian(F, region, build_exhaustion(region, 3))
        assert v.status == REFUTED
        fresh = parse_scene(text)
        fresh_region = fresh.region()
        hs = holes(fresh.raster("F"), fresh_region)
        i, j = v.witness["cell"]
        assert hs.labeling.labels[j, i] in hs.hole_labels

    def test_verdict_is_deterministic(self):
        def run():
            sc = _staircase_scene()
            region = sc.region()
            exh = build_exhaustion(region, 3)
            sched = [sc.grid.with_ymax(h) for h in (8, 16, 32)]
            v = check_arakelian(sc.raster("F"), region, exh, sched,
                                scene_builder=lambda g: (sc.raster("F", g),
                                                         sc.region(g)))
            return json.dumps(v.to_json_dict(), sort_keys=True)
        assert run() == run()


class TestAlphaNeighborhood:
    def test_trivial_no_removal(self):
        g = make_grid(-2, -2, 2, 2, 1 / 16)
        region = plane_region(g)
        F = rasterize_closed([Primitive.segment((-1, 0), (1, 0))], g)
        nbhd = alpha_neighborhood(F, CellSet.empty(g), region)
        assert nbhd.w.same_cells(region.omega)
        assert nbhd.connected is True

    def test_bridged_u_excludes_compact_and_hole(self):
        g = make_grid(-2, -2, 2, 2, 1 / 16)
        region = plane_region(g)
        F = rasterize_closed(
            [Primitive.polyline([(1, 1), (-1, 1), (-1, -1), (1, -1)])], g)
        K = rasterize_closed([Primitive.rect((0.9, -1.2), (1.3, 1.2))], g)
        hs = holes(F | K, region)
        assert hs.count == 1
        nbhd = alpha_neighborhood(F, K, region)
        assert (nbhd.w & K).is_empty()
        assert (nbhd.w & hs.union).is_empty()
        assert nbhd.connected is True

    def test_carrier_with_own_hole_flags_false(self):
        g = make_grid(-1, -1, 1, 1, 1 / 64)
        region = open_disk_region(g, 0, 0, 1)
        F = rasterize_closed([Primitive.circle((0, 0), 0.5)], g)
        nbhd = alpha_neighborhood(F, CellSet.empty(g), region)
        assert nbhd.connected is False
        assert nbhd.carrier_hole_count == 1

    def test_forward_direction_at_every_verified_level(self):
        # wherever the check verifies, the alpha neighborhood of every level
        # is connected
        g = make_grid(-1.25, -1.25, 1.25, 1.25, 1 / 64)
        region = open_disk_region(g, 0, 0, 1, punctured=True)
        exh = build_exhaustion(region, 3)
        for r in (0.3, 0.6):
            F = rasterize_closed([Primitive.circle((0, 0), r)], g)
            v = check_arakelian(F, region, exh)
            assert v.status == VERIFIED_UP_TO
            for K in exh.levels:
                assert alpha_neighborhood(F, K, region).connected is True
