import pytest

from isodelaunay.rational import QQ, ZERO
from isodelaunay.errors import IncompatibleReference
from isodelaunay.surface import square_torus, torus_t1
from isodelaunay.geometry import Ray, Tracer, saddle_connections_up_to


def test_trace_edge_itself():
    t1 = torus_t1()
    tracer = Tracer(t1)
    # edge 1 has period (2,1); trace from its tail along it
    res = tracer.straight_arc(Ray(1, (QQ(2), QQ(1))), (QQ(2), QQ(1)))
    assert res.end_kind == "vertex"
    assert res.crossings == []


def test_trace_crosses_edges():
    t1 = torus_t1()
    tracer = Tracer(t1)
    # the horizontal saddle (3,0) = a - c crosses the triangulation
    fan = tracer.fan(0)
    ray = fan.locate_from(1, (QQ(1), ZERO))
    res = tracer.trace_ray(ray, target=(QQ(3), ZERO))
    assert res.end_kind == "vertex"
    assert res.end_point == (QQ(3), ZERO)
    assert len(res.crossings) >= 1


def test_trace_interior_end():
    t1 = torus_t1()
    tracer = Tracer(t1)
    res = tracer.trace_ray(Ray(1, (QQ(2), QQ(1))), target=(QQ(1), QQ(1, 2)))
    assert res.end_kind == "interior"


def test_straight_arc_rejects_nonlanding():
    t1 = torus_t1()
    tracer = Tracer(t1)
    with pytest.raises(IncompatibleReference):
        tracer.straight_arc(Ray(1, (QQ(2), QQ(1))), (QQ(1), QQ(1, 2)))


def test_saddle_search_t1():
    t1 = torus_t1()
    saddles = saddle_connections_up_to(t1, QQ(1))
    # the lattice <(2,1), (-1,1)> has exactly the vectors +-(-1,1) at
    # L-infinity length 1 (the systole), nothing shorter
    disps = sorted(r.end_point for _, r in saddles)
    assert disps == [(QQ(-1), QQ(1)), (QQ(1), QQ(-1))]


def test_saddle_search_square_torus():
    sq = square_torus()
    saddles = saddle_connections_up_to(sq, QQ(1))
    disps = sorted(r.end_point for _, r in saddles)
    # (±1,0), (0,±1), ±(1,1), ±(1,-1): all of L-infinity length 1
    assert len(disps) == 8
    assert (QQ(1), QQ(0)) in disps and (QQ(0), QQ(-1)) in disps
    assert (QQ(1), QQ(1)) in disps and (QQ(-1), QQ(1)) in disps


def test_saddle_search_cap_2_t1():
    t1 = torus_t1()
    saddles = saddle_connections_up_to(t1, QQ(2))
    disps = {r.end_point for _, r in saddles}
    # vectors p(2,1)+q(-1,1) with L-infinity norm <= 2:
    # ±(-1,1) [1], ±(2,1), ±(1,2) [2]
    assert disps == {
        (QQ(-1), QQ(1)), (QQ(1), QQ(-1)),
        (QQ(2), QQ(1)), (QQ(-2), QQ(-1)),
        (QQ(1), QQ(2)), (QQ(-1), QQ(-2)),
    }


def test_trace_hits_midway_vertex():
    # on the square torus, tracing (2,0) from a vertex passes the vertex at
    # (1,0): the trace must stop there
    sq = square_torus()
    tracer = Tracer(sq)
    fan = tracer.fan(0)
    ray = fan.locate_from(1, (QQ(1), ZERO))
    res = tracer.trace_ray(ray, target=(QQ(2), ZERO))
    assert res.end_kind == "vertex"
    assert res.end_point == (QQ(1), ZERO)
