import math

import numpy as np
import pytest

from redraw.corpus import boolean_lattice, chain, crown4, m_lattice, n5, random_order, standard_orders
from redraw.drawing import Drawing
from redraw.engine import LayoutParams, redraw
from redraw.metrics import (
    MetricsReport,
    crossing_count,
    metrics_report,
    rtd,
    validate_drawing,
)
from redraw.order import NotALattice, is_lattice, order_from_covers

from oracles import rtd_naive, segments_cross_naive


def drawing_of(order, coords):
    return Drawing(order.elements, np.array([coords[e] for e in order.elements], float))


def diamond():
    return order_from_covers("wxyz", [("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")])


class TestCrossingCount:
    def test_planar_rhombus_has_none(self):
        order = diamond()
        d = drawing_of(order, {"w": (0, 0), "x": (-1, 1), "y": (1, 1), "z": (0, 2)})
        assert crossing_count(order, d) == 0

    def test_crown_drawn_with_one_crossing(self):
        order = crown4()
        d = drawing_of(order, {"a": (0, 0), "b": (2, 0), "c": (2, 1), "d": (0, 1)})
        assert crossing_count(order, d) == 1

    def test_single_edge_cannot_cross(self):
        order = chain(2)
        a, b = order.elements
        d = drawing_of(order, {a: (0, 0), b: (1, 1)})
        assert crossing_count(order, d) == 0

    def test_shared_endpoints_never_count(self):
        order = order_from_covers("oxy", [("o", "x"), ("o", "y")])
        d = drawing_of(order, {"o": (0, 0), "x": (-1, 1), "y": (1, 1)})
        assert crossing_count(order, d) == 0

    def test_collinear_overlap_is_not_a_crossing_but_flags_node_on_line(self):
        order = order_from_covers("abcd", [("a", "b"), ("c", "d")])
        d = drawing_of(order, {"a": (0, 0), "b": (0, 2), "c": (0, 1), "d": (0, 3)})
        assert crossing_count(order, d) == 0
        kinds = {v.kind for v in validate_drawing(order, d)}
        assert "NodeOnLine" in kinds

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_parametric_oracle_on_random_drawings(self, seed):
        rng = np.random.default_rng(seed)
        order = random_order(10, 0.3, seed)
        pts = rng.normal(size=(order.n, 2))
        # force a valid vertical order so the drawing is a legal input
        ext = sorted(order.elements, key=lambda e: sum(order.is_lt(x, e) for x in order.elements))
        for rank, e in enumerate(ext):
            pts[order.index(e), 1] = rank + rng.uniform(0, 0.4)
        d = Drawing(order.elements, pts)
        edges = [(order.elements[i], order.elements[j]) for i, j in order.cover_index_pairs]
        want = 0
        for i in range(len(edges)):
            for j in range(i + 1, len(edges)):
                if set(edges[i]) & set(edges[j]):
                    continue
                want += segments_cross_naive(
                    d.point(edges[i][0]), d.point(edges[i][1]),
                    d.point(edges[j][0]), d.point(edges[j][1]),
                )
        assert crossing_count(order, d) == want

    def test_invariant_under_similarity_transforms(self):
        order = standard_orders()["b3"]
        d = redraw(order, LayoutParams(max_iterations=80, seed=1))
        base = crossing_count(order, d)
        theta = 0.3
        rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        for transform in (
            lambda p: p + np.array([5.0, -2.0]),
            lambda p: 3.0 * p,
            lambda p: p @ rot.T,
        ):
            moved = Drawing(order.elements, transform(d.positions.copy()))
            assert crossing_count(order, moved) == base


class TestValidateDrawing:
    def test_engine_output_is_clean(self):
        order = standard_orders()["m3"]
        d = redraw(order, LayoutParams(max_iterations=150, seed=0))
        assert [v for v in validate_drawing(order, d) if v.kind == "VerticalOrder"] == []

    def test_vertical_violation_reported(self):
        order = chain(2)
        a, b = order.elements
        d = drawing_of(order, {a: (0, 1), b: (0, 0)})
        kinds = {v.kind for v in validate_drawing(order, d)}
        assert "VerticalOrder" in kinds

    def test_coincident_nodes_reported(self):
        order = order_from_covers(["a", "b", "c"], [("a", "b")])
        d = drawing_of(order, {"a": (0, 0), "b": (0, 1), "c": (0, 1)})
        violations = validate_drawing(order, d)
        assert any(v.kind == "CoincidentNodes" and set(v.members) == {"b", "c"} for v in violations)

    def test_node_on_non_incident_segment_reported(self):
        order = order_from_covers(["a", "b", "z"], [("a", "b")])
        d = drawing_of(order, {"a": (0, 0), "b": (0, 2), "z": (0, 1)})
        violations = validate_drawing(order, d)
        assert any(v.kind == "NodeOnLine" and v.members[0] == "z" for v in violations)


class TestRtd:
    def test_chains_are_distributive(self):
        assert rtd(chain(5)) == 1.0

    def test_b2_is_distributive(self):
        order = boolean_lattice(2)
        assert rtd(order) == 1.0
        assert rtd_naive(order.elements, order.leq_pairs()) == 1.0

    def test_m3_is_five_sixths(self):
        order = m_lattice(3)
        assert rtd(order) == pytest.approx(5.0 / 6.0, abs=1e-15)
        assert rtd_naive(order.elements, order.leq_pairs()) == pytest.approx(5.0 / 6.0)

    def test_n5_matches_oracle_and_is_not_one(self):
        order = n5()
        value = rtd(order)
        assert value == pytest.approx(rtd_naive(order.elements, order.leq_pairs()))
        assert 0.0 <= value < 1.0

    def test_requires_a_lattice(self):
        with pytest.raises(NotALattice):
            rtd(crown4())

    @pytest.mark.parametrize("name", ["b3", "m4", "m5", "grid2x3", "grid3x3"])
    def test_oracle_agreement_on_corpus_lattices(self, name):
        order = standard_orders()[name]
        assert rtd(order) == pytest.approx(rtd_naive(order.elements, order.leq_pairs()), abs=1e-12)

    def test_in_unit_interval_on_random_lattices(self):
        found = 0
        for seed in range(40):
            order = random_order(6, 0.5, seed)
            if is_lattice(order):
                found += 1
                assert 0.0 <= rtd(order) <= 1.0
        assert found > 0


class TestReport:
    def test_fields_and_rtd_presence(self):
        order = standard_orders()["b2"]
        d = redraw(order, LayoutParams(max_iterations=100, seed=3))
        report = metrics_report(order, d)
        assert isinstance(report, MetricsReport)
        assert report.vertical_ok
        assert report.rtd == 1.0
        assert report.crossings >= 0
        assert report.coincident_nodes == 0
        assert report.min_node_line_distance > 0

    def test_rtd_absent_for_non_lattices(self):
        order = crown4()
        d = drawing_of(order, {"a": (0, 0), "b": (2, 0), "c": (2, 1), "d": (0, 1)})
        report = metrics_report(order, d)
        assert report.rtd is None

    def test_text_block_is_flat_key_value(self):
        order = chain(2)
        a, b = order.elements
        d = drawing_of(order, {a: (0, 0), b: (0, 1)})
        text = metrics_report(order, d).to_text()
        lines = text.strip().splitlines()
        assert all(": " in line for line in lines)
        assert lines[0].startswith("crossings:")

    def test_direction_count_buckets(self):
        order = order_from_covers("abcd", [("a", "b"), ("c", "d")])
        parallel = drawing_of(order, {"a": (0, 0), "b": (0, 1), "c": (1, 0), "d": (1, 1)})
        assert metrics_report(order, parallel).distinct_edge_directions == 1
        skew = drawing_of(order, {"a": (0, 0), "b": (0, 1), "c": (1, 0), "d": (2, 1)})
        assert metrics_report(order, skew).distinct_edge_directions == 2
