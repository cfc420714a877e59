import random

import pytest

from fibretransport.bundles import label_element, vector_element
from fibretransport.errors import (ConfigError, DifferentTransports,
                                   GridMismatch, UnknownParameter)
from fibretransport.factorization import (Factorization, GaugeMap,
                                          apply_gauge,
                                          canonical_factorization,
                                          check_factorization_roundtrip,
                                          check_gauge_freedom,
                                          factorization_to_dict, gauge_between,
                                          map_apply, map_compose,
                                          map_deviation, map_invert,
                                          random_gauge,
                                          transport_from_factorization)
from fibretransport.transport import transport


class TestFibreMaps:
    def test_dict_maps(self):
        f = {"a": "b", "b": "a"}
        g = {"a": "a", "b": "b"}
        assert map_apply(f, "a") == "b"
        assert map_compose(f, f) == {"a": "a", "b": "b"}
        assert map_invert(f) == f
        assert map_deviation(f, f) == 0.0
        assert map_deviation(f, g) == 1.0

    def test_matrix_maps(self):
        m = ((0.0, -1.0), (1.0, 0.0))
        assert map_apply(m, (1.0, 0.0)) == (0.0, 1.0)
        mm = map_compose(m, m)
        assert mm == ((-1.0, 0.0), (0.0, -1.0))
        assert map_deviation(m, m) == 0.0
        inv = map_invert(m)
        assert map_deviation(map_compose(inv, m), ((1.0, 0.0), (0.0, 1.0))) < 1e-12

    def test_non_bijection_rejected(self):
        with pytest.raises(ConfigError):
            map_invert({"a": "b", "b": "b"})

    def test_mixed_kinds_rejected(self):
        with pytest.raises(ConfigError):
            map_compose({"a": "b"}, ((1.0,),))


class TestCanonicalFamily:
    def test_anchor_is_identity(self, perm):
        p = perm.path_named("walk")
        f = canonical_factorization(perm.transport, p)
        anchor_map = f.map_at(f.anchor)
        assert all(anchor_map[k] == k for k in anchor_map)

    def test_grid_lookup_is_exact(self, perm):
        p = perm.path_named("walk")
        f = canonical_factorization(perm.transport, p, grid=5)
        assert len(f.grid) == 5
        f.map_at(f.grid[2])
        with pytest.raises(UnknownParameter):
            f.map_at(0.123456)

    def test_anchor_inserted_when_absent(self, perm):
        p = perm.path_named("walk")
        f = canonical_factorization(perm.transport, p, s0=0.1,
                                    grid=[0.0, 0.5, 1.0])
        assert 0.1 in f.grid
        assert f.anchor == 0.1

    def test_roundtrip_reproduces_finite_transport(self, perm):
        p = perm.path_named("zigzag")
        f = canonical_factorization(perm.transport, p)
        S = transport_from_factorization(f, p)
        for s, t in [(0.0, 1.0), (0.3, 0.8), (0.9, 0.2)]:
            s_g = min(f.grid, key=lambda g: abs(g - s))
            t_g = min(f.grid, key=lambda g: abs(g - t))
            u = label_element(p.at(s_g), "b")
            assert transport(S, p, s_g, t_g, u) == transport(
                perm.transport, p, s_g, t_g, u)

    def test_roundtrip_reproduces_matrix_transport(self, par):
        p = par.path_named("figure-eight")
        f = canonical_factorization(par.transport, p)
        S = transport_from_factorization(f, p)
        for s_g, t_g in [(f.grid[0], f.grid[-1]), (f.grid[3], f.grid[1])]:
            u = vector_element(p.at(s_g), (0.6, -0.4))
            got = transport(S, p, s_g, t_g, u)
            want = transport(par.transport, p, s_g, t_g, u)
            assert got.vector == pytest.approx(want.vector, abs=1e-12)

    def test_domain_mismatch_rejected(self, perm):
        from fibretransport.paths import Interval, restrict
        f = canonical_factorization(perm.transport, perm.path_named("walk"))
        shorter = restrict(perm.path_named("walk"), Interval(0.0, 0.5))
        with pytest.raises(ConfigError):
            transport_from_factorization(f, shorter)


class TestGauge:
    def test_gauge_roundtrip_exact_labels(self, perm):
        p = perm.path_named("walk")
        f1 = canonical_factorization(perm.transport, p)
        rng = random.Random(123)
        D = random_gauge(rng, perm.bundle, p.at(f1.anchor))
        f2 = apply_gauge(f1, D)
        rec = gauge_between(f2, f1)
        assert isinstance(rec, GaugeMap)
        assert map_deviation(rec.map, D) == 0.0

    def test_gauge_roundtrip_matrices(self, par):
        p = par.path_named("figure-eight")
        f1 = canonical_factorization(par.transport, p)
        D = ((2.0, 1.0), (1.0, 1.0))
        f2 = apply_gauge(f1, D)
        rec = gauge_between(f2, f1)
        assert map_deviation(rec.map, D) < 1e-12

    def test_grid_mismatch(self, perm):
        p = perm.path_named("walk")
        f1 = canonical_factorization(perm.transport, p, grid=5)
        f2 = canonical_factorization(perm.transport, p, grid=7)
        with pytest.raises(GridMismatch):
            gauge_between(f1, f2)

    def test_unrelated_families_rejected(self, perm):
        p = perm.path_named("walk")
        f1 = canonical_factorization(perm.transport, p, grid=3)
        # corrupt one non-anchor entry: no single gauge can relate the pair
        broken = dict(zip(f1.grid, f1.maps))
        broken[f1.grid[2]] = {"a": "b", "b": "a", "c": "c"}
        f2 = Factorization(bundle=f1.bundle, space=f1.space,
                           path_name=f1.path_name, domain=f1.domain,
                           anchor=f1.anchor, grid=f1.grid,
                           maps=tuple(broken[g] for g in f1.grid),
                           tolerance=f1.tolerance)
        with pytest.raises(DifferentTransports):
            gauge_between(f1, f2)


class TestReports:
    def test_roundtrip_law_exact(self, perm):
        r = check_factorization_roundtrip(perm.transport,
                                          perm.path_named("walk"))
        assert r.law == "3.6-roundtrip"
        assert r.passed and r.max_deviation == 0.0

    def test_gauge_law_exact(self, par):
        r = check_gauge_freedom(par.transport, par.path_named("walk"))
        assert r.law == "3.11/3.12"
        assert r.passed and r.max_deviation == 0.0


def test_serialized_shape(perm):
    p = perm.path_named("walk")
    f = canonical_factorization(perm.transport, p, grid=3)
    data = factorization_to_dict(f)
    assert data["path"] == "walk"
    assert len(data["grid"]) == len(data["maps"]) == 3
    assert data["fibre_kind"] == "finite"
