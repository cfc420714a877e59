import math

import pytest

from fibretransport.errors import (DomainNotContained, EndpointMismatch,
                                   NonCanonicalDomain)
from fibretransport.paths import (UNIT, ConcatSchedule, Interval,
                                  affine_remap, canonical_reversal,
                                  canonical_schedule, compose_remaps,
                                  concatenate, constant_path, node_sequence,
                                  path_from_dict, paths_equal, piece_runs,
                                  piecewise_path, reparameterize, restrict,
                                  reverse, schedule_for, square_remap,
                                  trace_nodes)


def zigzag():
    return piecewise_path("g", UNIT,
                          [(0.25, "n0"), (0.5, "n1"), (0.75, "n0"), (1.0, "n1")],
                          name="zigzag")


class TestInterval:
    def test_basic_geometry(self):
        iv = Interval(1.0, 3.0)
        assert iv.width == 2.0
        assert iv.mid == 2.0
        assert iv.contains(1.0) and iv.contains(3.0)
        assert not iv.contains(3.1)

    def test_clamp_snaps_edges_only(self):
        iv = Interval(0.0, 1.0)
        assert iv.clamp(1.0 + 1e-12) == 1.0
        assert iv.clamp(0.5) == 0.5
        with pytest.raises(Exception):
            iv.clamp(1.5)

    def test_reversed_bounds_rejected(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.5)
        # zero width is allowed: restrictions to a single parameter use it
        assert Interval(1.0, 1.0).width == 0.0

    def test_samples_hit_both_ends(self):
        pts = Interval(0.0, 2.0).samples(5)
        assert pts[0] == 0.0 and pts[-1] == 2.0
        assert len(pts) == 5

    def test_containment(self):
        assert UNIT.contains_interval(Interval(0.25, 0.75))
        assert not UNIT.contains_interval(Interval(-0.1, 0.5))
        assert UNIT.same_as(Interval(0.0, 1.0))


class TestRemaps:
    def test_affine_roundtrip(self):
        r = affine_remap(Interval(0.0, 2.0), UNIT)
        for s in (0.0, 0.3, 1.7, 2.0):
            assert abs(r.invert_param(r.apply(s)) - s) < 1e-12
        assert r.sign == 1.0
        assert r.orientation == "preserving"
        assert r.deriv(1.0) == 0.5

    def test_affine_reversing(self):
        r = affine_remap(UNIT, UNIT, reversing=True)
        assert r.apply(0.0) == 1.0
        assert r.apply(1.0) == 0.0
        assert r.sign == -1.0
        assert r.orientation == "reversing"
        assert r.deriv(0.5) == -1.0

    def test_square_remap_derivative(self):
        r = square_remap()
        assert r.apply(0.5) == 0.25
        assert r.deriv(0.5) == 1.0
        assert abs(r.invert_param(0.25) - 0.5) < 1e-15

    def test_canonical_reversal_is_involution(self):
        r = canonical_reversal()
        for s in (0.0, 0.3, 1.0):
            assert r.apply(r.apply(s)) == pytest.approx(s, abs=1e-15)

    def test_composition_chains_derivatives(self):
        sq = square_remap()
        rev = canonical_reversal()
        c = compose_remaps(rev, sq)
        assert c.apply(0.5) == rev.apply(sq.apply(0.5))
        # chain rule: d(rev∘sq)/ds = rev'(sq(s)) * sq'(s)
        assert c.deriv(0.5) == pytest.approx(-1.0)
        assert c.sign == -1.0


class TestPiecewisePaths:
    def test_interior_values_and_breaks(self):
        p = zigzag()
        assert p.at(0.1).node == "n0"
        assert p.at(0.3).node == "n1"
        assert p.at(0.6).node == "n0"
        assert p.at(0.99).node == "n1"
        assert p.breakpoints == (0.25, 0.5, 0.75)
        assert p.kind == "discrete"

    def test_trace_and_node_sequence(self):
        p = zigzag()
        # distinct nodes in first-visit order; node_sequence keeps revisits
        assert trace_nodes(p) == ("n0", "n1")
        assert node_sequence(p, 0.0, 1.0) == ["n0", "n1", "n0", "n1"]
        assert node_sequence(p, 0.3, 0.6) == ["n1", "n0"]
        # reversed traversal sees the pieces backwards
        assert node_sequence(p, 0.6, 0.3) == ["n0", "n1"]
        assert node_sequence(p, 0.1, 0.2) == ["n0"]

    def test_piece_runs_merge_repeats(self):
        p = piecewise_path("g", UNIT, [(0.5, "a"), (0.6, "a"), (1.0, "b")])
        runs = piece_runs(p)
        assert [x.node for _, _, x in runs] == ["a", "b"]
        assert runs[0][0] == 0.0 and runs[0][1] == 0.6

    def test_constant_path(self):
        p = constant_path("g", "n0")
        assert p.at(0.0).node == "n0" and p.at(1.0).node == "n0"
        assert p.breakpoints == ()

    def test_from_dict(self):
        p = path_from_dict("g", {"domain": [0.0, 1.0],
                                 "pieces": [{"until": 0.5, "point": "a"},
                                            {"until": 1.0, "point": "b"}]})
        assert p.at(0.2).node == "a" and p.at(0.9).node == "b"


class TestRestrictReparamReverse:
    def test_restrict_keeps_values(self):
        p = zigzag()
        q = restrict(p, Interval(0.3, 0.8))
        assert q.domain.same_as(Interval(0.3, 0.8))
        for s in (0.3, 0.55, 0.8):
            assert q.at(s) == p.at(s)
        assert q.breakpoints == (0.5, 0.75)

    def test_restrict_outside_domain_fails(self):
        with pytest.raises(DomainNotContained):
            restrict(zigzag(), Interval(0.5, 1.5))

    def test_reparameterize_matches_pullback(self):
        p = zigzag()
        r = affine_remap(Interval(0.0, 2.0), UNIT, name="halve")
        q = reparameterize(p, r)
        assert q.domain.same_as(Interval(0.0, 2.0))
        for s in (0.0, 0.7, 1.4, 2.0):
            assert q.at(s) == p.at(r.apply(s))

    def test_reparameterize_needs_matching_target(self):
        p = zigzag()
        bad = affine_remap(UNIT, Interval(0.0, 2.0))
        with pytest.raises(Exception):
            reparameterize(p, bad)

    def test_reverse_flips_traversal(self):
        p = zigzag()
        q = reverse(p)
        assert q.at(0.0) == p.at(1.0)
        assert q.at(1.0) == p.at(0.0)
        assert trace_nodes(q) == ("n1", "n0")
        assert node_sequence(q, 0.0, 1.0) == ["n1", "n0", "n1", "n0"]


class TestConcatenation:
    def test_schedule_shape(self):
        sch = canonical_schedule()
        assert sch.start == 0.0 and sch.mid == 0.5 and sch.end == 1.0
        assert sch.domain.same_as(UNIT)

    def test_uneven_schedule(self):
        sch = schedule_for(UNIT, UNIT, 0.0, 1.0 / 3.0, 1.0)
        assert sch.mid == pytest.approx(1.0 / 3.0)

    def test_concatenate_walks_both_pieces(self):
        p1 = piecewise_path("g", UNIT, [(1.0, "a")])
        p2 = piecewise_path("g", UNIT, [(0.5, "a"), (1.0, "b")])
        q = concatenate(p1, p2)
        assert q.at(0.2).node == "a"
        assert q.at(0.6).node == "a"
        assert q.at(0.9).node == "b"
        assert 0.5 in q.breakpoints

    def test_concatenate_rejects_gap(self):
        p1 = piecewise_path("g", UNIT, [(1.0, "a")])
        p2 = piecewise_path("g", UNIT, [(1.0, "b")])
        with pytest.raises(EndpointMismatch):
            concatenate(p1, p2)

    def test_bad_schedule_ordering(self):
        with pytest.raises(Exception):
            ConcatSchedule(left=None, right=None)  # type: ignore[arg-type]


def test_paths_equal_discriminates():
    assert paths_equal(zigzag(), zigzag())
    other = piecewise_path("g", UNIT, [(0.25, "n0"), (1.0, "n1")])
    assert not paths_equal(zigzag(), other)
