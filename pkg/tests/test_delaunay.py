import random

import pytest

from isodelaunay.rational import QQ
from isodelaunay.errors import AxisAlignedEdge, NoCircumsquare, NotGeneric
from isodelaunay.surface import Surface, Triangulation, square_torus, torus_t1
from isodelaunay.delaunay import (
    DelaunayData,
    all_certificates,
    circumsquare,
    delaunay_condition,
    delaunay_triangulate,
    is_generic,
    is_veering,
    linf,
    quad_set,
    slope_signs,
)


def test_slope_signs_t1():
    assert slope_signs(torus_t1()) == ((1, 1), (-1, 1), (-1, -1))


def test_slope_signs_orientation():
    data = DelaunayData.of_surface(torus_t1())
    assert (data.sign_re(-2), data.sign_im(-2)) == (1, -1)


def test_slope_signs_axis_aligned():
    with pytest.raises(AxisAlignedEdge) as err:
        slope_signs(square_torus())
    assert err.value.edge == 1


def test_is_veering_t1():
    assert is_veering(DelaunayData.of_surface(torus_t1()))


def test_is_veering_false_all_positive():
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    surf = Surface(tri, [(3, 1), (1, 2), (-4, -3)], check=True)
    assert not is_veering(DelaunayData.of_surface(surf))


def test_quad_set_t1():
    data = DelaunayData.of_surface(torus_t1())
    quads = quad_set(data)
    assert [q.edge for q in quads] == [1, 3]
    t1 = torus_t1()
    gamma = quads[0].other_diagonal_period(t1)
    assert gamma in ((QQ(0), QQ(3)), (QQ(0), QQ(-3)))


def test_delaunay_condition_t1():
    t1 = torus_t1()
    data = DelaunayData.of_surface(t1)
    for quad in quad_set(data):
        assert delaunay_condition(quad, t1)
    # quad across a: |(2,1)| = 2 < |(0,3)| = 3
    qa = quad_set(data)[0]
    assert linf(qa.gamma_period(t1)) == 2
    assert linf(qa.other_diagonal_period(t1)) == 3


def test_circumsquare_t1():
    t1 = torus_t1()
    cert = circumsquare(t1, 0)
    assert cert.square[2] == 2
    assert cert.empty
    assert cert.boundary_count == 3
    assert cert.passes()


def test_circumsquare_degenerate_triangle():
    # wall-style data: zero-area triangle with collinear horizontal edges
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    surf = Surface(
        tri, [(1, 0), (1, 0), (-2, 0)], check=True, allow_degenerate=True
    )
    cert = circumsquare(surf, 0)
    assert cert.degenerate
    assert cert.axis_aligned_edge is not None
    assert not cert.passes()


def test_circumsquare_interior_point():
    # veering torus violating the quadrilateral condition across edge a:
    # the lattice point (1,-1) of <(4,1),(-1,1)> lies strictly inside the
    # inscribing square [0,4]x[-2,2] of triangle 0
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    surf = Surface(tri, [(4, 1), (-1, 1), (-3, -2)])
    certs = all_certificates(surf)
    assert any(not c.empty for c in certs)
    bad = next(c for c in certs if not c.empty)
    assert bad.interior_witness[0] == (QQ(1), QQ(-1))


def test_heavily_sheared_torus_has_monochromatic_triangle():
    # shearing T1 by [[1,3],[0,1]] makes every slope positive; such a
    # triangle cannot be inscribed in any axis-aligned square
    t1 = torus_t1().apply_matrix(((1, 3), (0, 1)))
    with pytest.raises(NoCircumsquare):
        circumsquare(t1, 0)


def test_is_generic_t1():
    ok, witness = is_generic(torus_t1())
    assert ok and witness is None


def test_is_generic_square_torus():
    ok, witness = is_generic(square_torus())
    assert not ok
    assert witness is not None


def test_delaunay_triangulate_fixed_point():
    t1 = torus_t1()
    data, word, final = delaunay_triangulate(t1)
    assert word == []
    assert final.periods == t1.periods
    assert data.signs == ((1, 1), (-1, 1), (-1, -1))


def test_delaunay_triangulate_scramble_recovers():
    rng = random.Random(3)
    t1 = torus_t1()
    target, _, _ = delaunay_triangulate(t1)
    for _ in range(20):
        cur = t1
        for _ in range(rng.randint(1, 5)):
            e = rng.randint(1, 3)
            try:
                cur, _ = cur.flip(e)
            except Exception:
                pass
        data, _, final = delaunay_triangulate(cur)
        # uniqueness: periods of the Delaunay surface agree up to edge
        # relabeling/orientation with the canonical one
        norm = sorted(
            sorted([p, (-p[0], -p[1])]) for p in final.periods
        )
        ref = sorted(sorted([p, (-p[0], -p[1])]) for p in torus_t1().periods)
        assert norm == ref


def test_delaunay_triangulate_square_torus_not_generic():
    with pytest.raises(NotGeneric):
        delaunay_triangulate(square_torus())


def test_verifier_criterion_agreement():
    # quad criterion passes iff all circumsquare certificates pass
    rng = random.Random(11)
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    for _ in range(50):
        a = (QQ(rng.randint(1, 6)), QQ(rng.randint(1, 6)))
        b = (QQ(-rng.randint(1, 6)), QQ(rng.randint(1, 6)))
        c = (-(a[0] + b[0]), -(a[1] + b[1]))
        if c[0] == 0 or c[1] == 0:
            continue
        if a[0] * b[1] - a[1] * b[0] <= 0:
            continue
        surf = Surface(tri, [a, b, c])
        data = DelaunayData.of_surface(surf)
        if not is_veering(data):
            continue
        quads_ok = all(delaunay_condition(q, surf) for q in quad_set(data))
        certs_ok = all(cert.passes() for cert in all_certificates(surf))
        assert quads_ok == certs_ok
