import random

import pytest

from isodelaunay.rational import QQ, ZERO, ONE
from isodelaunay.errors import Infeasible, NotVeering
from isodelaunay.surface import Surface, torus_t1, validate_surface
from isodelaunay.delaunay import DelaunayData, all_certificates
from isodelaunay.chart import Chart, LinearForm, Transport, idx
from isodelaunay.regions import (
    LinearSystem,
    RegionIntersection,
    contains_region,
    maximize_form,
    nonempty_region_intersection,
    region_system,
    relative_interior_point,
    strict_feasible,
)


def t1_region():
    t1 = torus_t1()
    chart = Chart(t1.triangulation)
    data = DelaunayData.of_surface(t1)
    transport = Transport.identity(3)
    return t1, chart, data, transport, region_system(data, chart, transport)


def ambient_form(chart, entries, const=ZERO):
    coeffs = [ZERO] * chart.ambient_dim
    for (edge, part), c in entries.items():
        coeffs[idx(edge, part)] = QQ(c)
    return LinearForm(coeffs, const)


def test_chart_dimensions():
    t1 = torus_t1()
    chart = Chart(t1.triangulation)
    assert chart.dim == 4
    x = chart.point_of_surface(t1)
    t = chart.reduce_point(x)
    assert chart.lift(t) == x


def test_region_feasible_with_t1_witness():
    t1, chart, data, transport, rs = t1_region()
    x = chart.point_of_surface(t1)
    assert rs.contains_point_strict(x)
    cert = rs.strict_feasible()
    assert cert.feasible
    assert rs.contains_point_strict(cert.witness)


def test_all_positive_re_signs_infeasible():
    # veering data forcing Re > 0 on all three edges contradicts closure
    t1, chart, _, transport, _ = t1_region()
    data = DelaunayData(t1.triangulation, ((1, 1), (1, -1), (1, -1)))
    rs = region_system(data, chart, transport)
    cert = rs.strict_feasible()
    assert not cert.feasible


def test_not_veering_rejected():
    t1, chart, _, transport, _ = t1_region()
    data = DelaunayData(t1.triangulation, ((1, 1), (1, 1), (1, 1)))
    with pytest.raises(NotVeering):
        region_system(data, chart, transport)


def test_region_dimension_is_four():
    _, _, _, _, rs = t1_region()
    assert rs.region_dimension() == 4


def test_relative_interior_implicit_equality():
    # x >= 0 and -x >= 0 force the implicit equality x = 0
    _, chart, _, _, _ = t1_region()
    f = ambient_form(chart, {(1, 0): 1})
    sys = LinearSystem(chart, (), (), (f, f.scaled(QQ(-1))))
    point, dim = relative_interior_point(sys)
    assert f.evaluate(point) == 0
    assert dim == chart.dim - 1


def test_wall_slice_feasible_dimension_three():
    # slice the closed region by the hyperplane Im(z_c) = 2 Re(z_c), which
    # passes through Phi(T1); a scaled copy of T1 witnesses feasibility
    t1, chart, data, transport, rs = t1_region()
    wall = ambient_form(chart, {(3, 1): 1, (3, 0): -2})
    assert wall.evaluate(chart.point_of_surface(t1)) == 0
    for case in rs.closed_cases():
        sliced = case.with_equalities((wall,))
        point, dim = relative_interior_point(sliced)
        assert dim == 3
        break


def test_quad_wall_has_dimension_three():
    # the flip wall where the shared edge ties the other diagonal
    _, chart, data, transport, rs = t1_region()
    sel = rs.feasible_selections()[0]
    case = rs.case_system(sel, closed=True)
    quad_branches = rs.branch_table[0]
    st, _ = quad_branches[sel[0]]
    comp_minus_l1 = st[1]
    sliced = case.with_equalities((comp_minus_l1,))
    point, dim = relative_interior_point(sliced)
    assert dim == 3


def test_intersection_with_self():
    _, chart, data, transport, rs = t1_region()
    cert = nonempty_region_intersection([rs, rs])
    assert cert.feasible
    assert rs.contains_point_closed(cert.witness)


def test_intersection_opposite_sign_is_z0():
    # same triangulation, one edge's sign pair fully negated on the real
    # axis: closed cones meet only where that edge period vanishes
    t1, chart, data, transport, rs = t1_region()
    flipped_signs = list(data.signs)
    sre, sim = flipped_signs[0]
    flipped_signs[0] = (-sre, sim)
    data2 = DelaunayData(t1.triangulation, tuple(flipped_signs))
    try:
        rs2 = region_system(data2, chart, transport)
    except NotVeering:
        pytest.skip("sign flip left the veering class")
    cert = nonempty_region_intersection([rs, rs2])
    assert not cert.feasible


def test_contains_region_wall_in_region():
    _, chart, data, transport, rs = t1_region()
    case = rs.closed_cases()[0]
    wall = case.with_equalities(
        (ambient_form(chart, {(3, 1): 1, (3, 0): -2}),)
    )
    assert contains_region(case, wall)
    assert contains_region(case, case)


def test_oracle_equivalence_t1():
    # disjunctive-case membership == direct L-infinity comparisons ==
    # circumsquare certificates, exactly, on random veering points
    t1, chart, data, transport, rs = t1_region()
    base = chart.reduce_point(chart.point_of_surface(t1))
    rng = random.Random(2024)
    tested = 0
    in_region = 0
    while tested < 300:
        t = tuple(
            b + QQ(rng.randint(-40, 40), rng.randint(1, 8)) for b in base
        )
        x = chart.lift(t)
        if not rs.veering_holds(x, strict=True):
            continue
        tested += 1
        by_cases = rs.contains_point_strict(x)
        by_linf = rs.quad_comparisons_hold(x, strict=True)
        assert by_cases == by_linf
        periods = [
            (x[idx(e, 0)], x[idx(e, 1)]) for e in range(1, 4)
        ]
        areas_ok = True
        try:
            surf = Surface(t1.triangulation, periods)
        except Exception:
            surf = None
            areas_ok = False
        if by_linf:
            assert areas_ok, "region point failed to build a surface"
        if surf is not None:
            by_certs = all(c.passes() for c in all_certificates(surf))
            assert by_certs == by_linf
        if by_linf:
            in_region += 1
    assert in_region > 10
    assert tested - in_region > 10


def test_strict_feasible_deterministic():
    _, _, _, _, rs = t1_region()
    w1 = rs.strict_feasible().witness
    _, chart2, data2, transport2, rs2 = t1_region()
    w2 = rs2.strict_feasible().witness
    assert w1 == w2
