import math

import pytest

from fibretransport.bundles import label_element, vector_element
from fibretransport.errors import (ConfigError, EdgeMissing,
                                   EndpointMismatch, UnknownInstance,
                                   WrongFibreKind)
from fibretransport.instances import (COUNTEREXAMPLE_KINDS, LAW_ORDER,
                                      counterexample_transport,
                                      holonomy_angle, instance_from_dict,
                                      instance_names, linear_ode_transport,
                                      loop_matrix, make_instance,
                                      parallelization_transport,
                                      permutation_transport)
from fibretransport.transport import transport


class TestRegistry:
    def test_names(self):
        names = instance_names()
        assert "perm-c3" in names
        assert "foliation-2sec" in names
        assert "parallelization-flat" in names
        assert "sphere-levi-civita" in names
        assert any(n.startswith("counterexample:") for n in names)

    def test_unknown_rejected(self):
        with pytest.raises(UnknownInstance):
            make_instance("no-such-instance")
        with pytest.raises(UnknownInstance):
            make_instance("counterexample:flies")

    def test_law_order_is_complete(self):
        assert len(LAW_ORDER) == 17
        assert LAW_ORDER[0] == "2.2"
        assert "3.6-roundtrip" in LAW_ORDER


class TestApplicableLaws:
    def test_perm(self, perm):
        assert set(perm.applicable) == set(LAW_ORDER) - {"2.8", "2.9", "4.4"}

    def test_foliation(self, fol):
        assert set(fol.applicable) == set(LAW_ORDER) - {"2.8", "2.9"}

    def test_parallelization(self, par):
        assert set(par.applicable) == set(LAW_ORDER) - {"2.9", "4.7"}

    def test_sphere(self, sphere):
        assert set(sphere.applicable) == set(LAW_ORDER) - {"4.4", "4.7"}
        assert sphere.metric is not None

    def test_order_follows_registry(self, fol):
        order = {law: i for i, law in enumerate(LAW_ORDER)}
        idx = [order[law] for law in fol.applicable]
        assert idx == sorted(idx)


class TestConstructors:
    def test_permutation_requires_bijections(self, perm):
        with pytest.raises(ConfigError):
            permutation_transport(perm.bundle,
                                  {("n0", "n1"): {"a": "b", "b": "b", "c": "a"}})

    def test_permutation_missing_edge(self, perm):
        T = permutation_transport(perm.bundle,
                                  {("n0", "n1"): {"a": "b", "b": "c", "c": "a"}})
        p = perm.path_named("walk")  # walks n0 n1 n2: second hop undefined
        u = label_element(p.at(0.0), "a")
        with pytest.raises(EdgeMissing):
            transport(T, p, 0.0, 1.0, u)

    def test_parallelization_needs_all_frames(self, par):
        with pytest.raises(ConfigError):
            parallelization_transport(par.bundle, {"w0": ((1.0, 0.0), (0.0, 1.0))})

    def test_parallelization_needs_vectors(self, perm):
        with pytest.raises(WrongFibreKind):
            parallelization_transport(perm.bundle, {})

    def test_ode_transport_guards_span(self, sphere):
        from fibretransport.paths import Interval, Path
        too_long = Path(space="sphere", domain=Interval(0.0, 100.0),
                        point_at=lambda s: sphere.path_named("tilted").at(0.5),
                        kind="chart", name="marathon")
        u = vector_element(too_long.at(0.0), (1.0, 0.0))
        with pytest.raises(ConfigError):
            transport(sphere.transport, too_long, 0.0, 100.0, u)


class TestCounterexamples:
    def test_kinds_enumerated(self):
        assert set(COUNTEREXAMPLE_KINDS) == {
            "group_breaking", "nonlocal", "non_reparam_invariant",
            "nonlinear", "metric_breaking"}

    def test_each_declares_its_target(self):
        for kind in COUNTEREXAMPLE_KINDS:
            T = counterexample_transport(kind)
            assert T.violates in LAW_ORDER
            assert T.violates not in T.preserves
            assert T.preserves  # every saboteur leaves something intact

    def test_applicable_covers_violated_law(self):
        for kind in COUNTEREXAMPLE_KINDS:
            spec = make_instance(f"counterexample:{kind}")
            assert spec.transport.violates in spec.applicable
            for law in spec.transport.preserves:
                assert law in spec.applicable


class TestLoops:
    def test_loop_matrix_needs_closure(self, sphere):
        with pytest.raises(EndpointMismatch):
            loop_matrix(sphere.transport, sphere.path_named("tilted"))

    def test_loop_matrix_needs_vectors(self, perm):
        with pytest.raises(WrongFibreKind):
            loop_matrix(perm.transport, perm.path_named("zigzag"))

    def test_flat_loop_angle_is_zero(self, par):
        ang = holonomy_angle(par.transport, par.path_named("figure-eight"))
        assert ang == 0.0


class TestStepOverride:
    def test_coarse_step_changes_accuracy(self):
        coarse = make_instance("sphere-levi-civita", step=0.05)
        fine = make_instance("sphere-levi-civita", step=1e-3)
        loop = coarse.path_named("octant")
        a1 = holonomy_angle(coarse.transport, loop, coarse.metric)
        a2 = holonomy_angle(fine.transport, fine.path_named("octant"),
                            fine.metric)
        assert abs(a2 - math.pi / 2) < abs(a1 - math.pi / 2)
        assert abs(a1 - math.pi / 2) < 1e-3  # even coarse stays close


def test_custom_instance_from_dict():
    spec = instance_from_dict({
        "bundle": {
            "base": {"kind": "graph", "nodes": ["p", "q"],
                     "edges": [["p", "q"]]},
            "fibre": {"kind": "finite", "labels": ["x", "y"]},
        },
        "transport": {"kind": "permutation",
                      "edge_maps": {"p->q": {"x": "y", "y": "x"}}},
        "paths": {"over": {"domain": [0.0, 1.0],
                           "pieces": [{"until": 0.5, "point": "p"},
                                      {"until": 1.0, "point": "q"}]}},
    }, name="swap")
    p = spec.path_named("over")
    u = label_element(p.at(0.0), "x")
    assert transport(spec.transport, p, 0.0, 1.0, u).label == "y"
    assert "2.2" in spec.applicable
