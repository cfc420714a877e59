import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibretransport.bundles import label_element, vector_element
from fibretransport.instances import make_instance
from fibretransport.linalg import (identity, inverse, matmul, matvec,
                                   rotation, rotation_angle, solve)
from fibretransport.paths import Interval, UNIT, affine_remap
from fibretransport.transport import transport, unit_ball

finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)
params = st.floats(min_value=0.0, max_value=1.0,
                   allow_nan=False, allow_infinity=False)


def well_conditioned(entries):
    # diagonal dominance keeps the solver comfortable
    a, b, c, d = entries
    return ((a + 5.0, b), (c, d + 5.0))


@given(st.tuples(finite, finite, finite, finite),
       st.tuples(finite, finite))
def test_solve_inverts_matvec(entries, rhs):
    m = well_conditioned(entries)
    x = solve(m, rhs)
    back = matvec(m, x)
    assert back == pytest.approx(rhs, abs=1e-9)


@given(st.tuples(finite, finite, finite, finite))
def test_inverse_times_matrix_is_identity(entries):
    m = well_conditioned(entries)
    prod = matmul(inverse(m), m)
    eye = identity(2)
    flat = [abs(prod[i][j] - eye[i][j]) for i in range(2) for j in range(2)]
    assert max(flat) < 1e-10


@given(st.floats(min_value=-math.pi + 1e-9, max_value=math.pi,
                 allow_nan=False))
def test_rotation_angle_roundtrip(angle):
    assert rotation_angle(rotation(angle)) == pytest.approx(angle, abs=1e-12)


@given(finite, finite, finite)
def test_interval_clamp_lands_inside(lo, width, s):
    iv = Interval(lo, lo + abs(width) + 1e-6)
    clamped = iv.clamp(s) if iv.contains(s) else None
    if clamped is not None:
        assert iv.lo <= clamped <= iv.hi


@given(params)
def test_affine_remap_is_invertible(s):
    r = affine_remap(Interval(2.0, 5.0), UNIT)
    inside = 2.0 + 3.0 * s
    assert r.invert_param(r.apply(inside)) == pytest.approx(inside, abs=1e-12)
    assert UNIT.contains(r.apply(inside))


@given(st.integers(min_value=0, max_value=2 ** 32))
def test_unit_ball_is_bounded_and_deterministic(seed):
    rng1, rng2 = random.Random(seed), random.Random(seed)
    v1 = unit_ball(rng1, 2)
    v2 = unit_ball(rng2, 2)
    assert v1 == v2
    assert math.sqrt(sum(c * c for c in v1)) <= 1.0 + 1e-12


@given(params, params, params)
def test_permutation_group_law_everywhere(s, t, r):
    spec = make_instance("perm-c3")
    p = spec.path_named("zigzag")
    u = label_element(p.at(s), "b")
    two_step = transport(spec.transport, p, t, r,
                         transport(spec.transport, p, s, t, u))
    direct = transport(spec.transport, p, s, r, u)
    assert two_step == direct


@given(params, params)
def test_parallelization_transports_are_isometries(s, t):
    spec = make_instance("parallelization-flat")
    p = spec.path_named("figure-eight")
    u = vector_element(p.at(s), (0.6, -0.8))
    w = transport(spec.transport, p, s, t, u)
    # quarter-turn frames: moving a vector never changes its length
    assert sum(c * c for c in w.vector) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95, allow_nan=False),
       st.floats(min_value=0.05, max_value=0.95, allow_nan=False))
def test_integrated_transport_inverts(s, t):
    spec = make_instance("sphere-levi-civita", step=5e-3)
    p = spec.path_named("tilted")
    u = vector_element(p.at(s), (0.3, 0.7))
    w = transport(spec.transport, p, s, t, u)
    back = transport(spec.transport, p, t, s, w)
    assert back.vector == pytest.approx(u.vector, abs=1e-9)
