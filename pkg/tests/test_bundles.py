import json
import math

import pytest

from fibretransport.bundles import (BasePoint, FibreBundle, bundle_from_dict,
                                    bundle_from_json, chart_point,
                                    element_deviation, euclidean_metric,
                                    evaluate_metric, fibre_at, fibre_elements,
                                    graph_point, label_element,
                                    point_deviation, projection, rebase,
                                    same_point, section_through,
                                    sections_of_family, table_section,
                                    vector_element)
from fibretransport.errors import (NoSectionThrough, PointNotInBase)
from fibretransport.sphere import SPACE, sphere_point, tangent_bundle


def three_node_bundle():
    return bundle_from_dict({
        "base": {"kind": "graph", "nodes": ["n0", "n1", "n2"],
                 "edges": [["n0", "n1"], ["n1", "n2"], ["n2", "n0"]]},
        "fibre": {"kind": "finite", "labels": ["a", "b", "c"]},
    }, space_id="g")


def sectioned_bundle():
    return bundle_from_dict({
        "base": {"kind": "graph", "nodes": ["g0", "g1"],
                 "edges": [["g0", "g1"]]},
        "fibre": {"kind": "sections",
                  "values": {"alpha": {"g0": "a0", "g1": "a1"},
                             "beta": {"g0": "b0", "g1": "b1"}}},
    }, space_id="fol")


class TestPoints:
    def test_graph_point_identity(self):
        x = graph_point("g", "n0")
        assert x.node == "n0" and x.coords is None
        assert point_deviation(x, graph_point("g", "n0")) == 0.0
        assert point_deviation(x, graph_point("g", "n1")) == 1.0

    def test_chart_point_deviation(self):
        x = chart_point("c", 0.0, 1.0)
        y = chart_point("c", 0.0, 1.5)
        assert point_deviation(x, y) == pytest.approx(0.5)
        assert same_point(x, chart_point("c", 0.0, 1.0 + 1e-12))

    def test_mismatched_spaces_are_far(self):
        assert point_deviation(graph_point("g", "n0"),
                               graph_point("h", "n0")) == math.inf


class TestElements:
    def test_label_and_vector(self):
        x = graph_point("g", "n0")
        u = label_element(x, "a")
        assert u.label == "a" and u.vector is None
        v = vector_element(chart_point("c", 0.0), (1.0, 2.0))
        assert v.vector == (1.0, 2.0)
        assert projection(v) == chart_point("c", 0.0)

    def test_rebase_moves_footpoint_only(self):
        u = vector_element(chart_point("c", 0.0), (1.0, 2.0))
        w = rebase(u, chart_point("c", 3.0))
        assert w.vector == u.vector
        assert w.over == chart_point("c", 3.0)

    def test_deviation(self):
        x = graph_point("g", "n0")
        assert element_deviation(label_element(x, "a"), label_element(x, "a")) == 0.0
        assert element_deviation(label_element(x, "a"), label_element(x, "b")) == 1.0
        p = chart_point("c", 0.0)
        a = vector_element(p, (1.0, 0.0))
        b = vector_element(p, (1.0, 0.25))
        assert element_deviation(a, b) == pytest.approx(0.25)


class TestBundleQueries:
    def test_membership(self):
        B = three_node_bundle()
        assert B.contains_point(graph_point("g", "n1"))
        assert not B.contains_point(graph_point("g", "zz"))
        with pytest.raises(PointNotInBase):
            B.require_point(graph_point("q", "n1"))

    def test_fibre_description(self):
        B = three_node_bundle()
        d = fibre_at(B, graph_point("g", "n0"))
        assert d.labels == ("a", "b", "c")
        els = fibre_elements(B, graph_point("g", "n0"))
        assert [u.label for u in els] == ["a", "b", "c"]

    def test_sections(self):
        B = sectioned_bundle()
        fam = sections_of_family(B)
        assert [s.name for s in fam] == ["alpha", "beta"]
        # the fibre over a point is carved out of the family's values there
        assert fibre_at(B, graph_point("fol", "g0")).labels == ("a0", "b0")
        u = label_element(graph_point("fol", "g1"), "b1")
        assert section_through(B, u).name == "beta"
        with pytest.raises(NoSectionThrough):
            section_through(B, label_element(graph_point("fol", "g0"), "zz"))

    def test_table_section_eval(self):
        s = table_section("alpha", "fol", {"g0": "a0", "g1": "a1"})
        assert s.at(graph_point("fol", "g1")).label == "a1"


class TestMetric:
    def test_euclidean(self):
        m = euclidean_metric(2)
        x = chart_point("c", 0.0)
        u = vector_element(x, (3.0, 4.0))
        assert evaluate_metric(m, x, u, u) == pytest.approx(25.0)

    def test_round_sphere_metric_weights_phi(self):
        from fibretransport.sphere import round_metric
        m = round_metric()
        x = sphere_point(math.pi / 3, 0.0)
        u = vector_element(x, (0.0, 1.0))
        assert evaluate_metric(m, x, u, u) == pytest.approx(math.sin(math.pi / 3) ** 2)


class TestSphereBase:
    def test_phi_periodicity(self):
        B = tangent_bundle()
        x = sphere_point(1.0, 0.0)
        y = sphere_point(1.0, 2.0 * math.pi)
        # the chart wraps in phi, so these name the same base point
        assert B.point_deviation(x, y) == pytest.approx(0.0, abs=1e-12)
        assert B.same_point(x, y)

    def test_contains_only_chart_band(self):
        B = tangent_bundle()
        assert B.contains_point(sphere_point(1.0, 1.0))
        assert not B.contains_point(chart_point(SPACE, 0.0, 0.0))


class TestSerialization:
    def test_roundtrip_json(self):
        B = three_node_bundle()
        data = {
            "base": {"kind": "graph", "nodes": ["n0", "n1", "n2"],
                     "edges": [["n0", "n1"], ["n1", "n2"], ["n2", "n0"]]},
            "fibre": {"kind": "finite", "labels": ["a", "b", "c"]},
        }
        C = bundle_from_json(json.dumps(data), space_id="g")
        assert C.nodes == B.nodes and C.labels == B.labels
        assert C.fibre_kind == "finite"

    def test_vector_bundle_dim(self):
        B = bundle_from_dict({"base": {"kind": "graph", "nodes": ["w0"]},
                              "fibre": {"kind": "vector", "dim": 2}},
                             space_id="v")
        assert B.dim == 2
