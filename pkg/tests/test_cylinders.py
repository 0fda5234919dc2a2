import pytest

from isodelaunay.rational import QQ, ZERO
from isodelaunay.errors import CapExhausted
from isodelaunay.surface import (
    Surface,
    Triangulation,
    octagon_surface,
    square_torus,
    torus_t1,
    validate_surface,
)
from isodelaunay.cylinders import (
    cylinder_deform,
    displacement_steps,
    find_cylinders,
    lift_crossings,
    shrink_moduli,
)


def test_square_torus_horizontal_cylinder():
    cyls = find_cylinders(square_torus(), "horizontal", QQ(2))
    assert len(cyls) == 1
    c = cyls[0]
    assert c.width == 1 and c.height == 1 and c.modulus == 1


def test_square_torus_vertical_cylinder():
    cyls = find_cylinders(square_torus(), "vertical", QQ(2))
    assert len(cyls) == 1
    assert cyls[0].width == 1 and cyls[0].height == 1


def test_t1_horizontal_cylinder():
    # lattice <(2,1), (-1,1)>: primitive horizontal vector (3,0), area 3
    cyls = find_cylinders(torus_t1(), "horizontal", QQ(4))
    assert len(cyls) == 1
    c = cyls[0]
    assert c.width == 3
    assert c.height == 1
    assert c.modulus == QQ(1, 3)


def test_cap_soundness_empty():
    # no horizontal saddle of length <= 2 on T1 (shortest is 3)
    cyls = find_cylinders(torus_t1(), "horizontal", QQ(2))
    assert cyls == []


def test_strict_cap_exhausted():
    with pytest.raises(CapExhausted):
        find_cylinders(torus_t1(), "horizontal", QQ(2), strict=True)


def test_octagon_cylinders():
    # sides (1,0) and (0,1) are saddles; each direction decomposes into
    # cylinders; widths/heights are rational and positive
    for direction in ("horizontal", "vertical"):
        cyls = find_cylinders(octagon_surface(), direction, QQ(6))
        assert cyls, direction
        for c in cyls:
            assert c.width > 0 and c.height > 0


def test_stretch_doubles_modulus():
    sq = square_torus()
    c = find_cylinders(sq, "horizontal", QQ(2))[0]
    out = cylinder_deform(sq, c, "stretch", QQ(2))
    assert validate_surface(out).valid
    c2 = find_cylinders(out, "horizontal", QQ(2))[0]
    assert c2.modulus == 2


def test_shear_unit_square():
    sq = square_torus()
    c = find_cylinders(sq, "horizontal", QQ(2))[0]
    out = cylinder_deform(sq, c, "shear", QQ(1))
    assert validate_surface(out).valid
    # the vertical edge period (0,1) becomes (1,1)
    periods = set(out.periods) | {(-p[0], -p[1]) for p in out.periods}
    assert (QQ(1), QQ(1)) in periods


def test_shear_stretch_identity():
    # u_s o a_t = a_t o u_{st} as exact period identity, s=2/3, t=5/2
    sq = square_torus()
    s, t = QQ(2, 3), QQ(5, 2)

    def horiz(surface):
        return find_cylinders(surface, "horizontal", QQ(4))[0]

    a_t_first = cylinder_deform(sq, horiz(sq), "stretch", t)
    lhs = cylinder_deform(a_t_first, horiz(a_t_first), "shear", s)

    u_st_first = cylinder_deform(sq, horiz(sq), "shear", s * t)
    rhs = cylinder_deform(u_st_first, horiz(u_st_first), "stretch", t)

    assert lhs.triangulation.triangles == rhs.triangulation.triangles
    assert lhs.periods == rhs.periods


def test_shrink_moduli_torus():
    # stretch the square torus to modulus 3 horizontally, then shrink at t=1
    sq = square_torus()
    c = find_cylinders(sq, "horizontal", QQ(2))[0]
    tall = cylinder_deform(sq, c, "stretch", QQ(3))
    out = shrink_moduli(tall, QQ(1), QQ(4))
    cyl = find_cylinders(out, "horizontal", QQ(4))[0]
    assert cyl.modulus == 1


def test_shrink_moduli_t0_identity():
    sq = square_torus()
    assert shrink_moduli(sq, QQ(0), QQ(4)) is sq


def test_t1_cylinder_deform_needs_flip():
    # the (3,0) saddle of T1 is not an edge; deformation straightens first
    t1 = torus_t1()
    c = find_cylinders(t1, "horizontal", QQ(4))[0]
    out = cylinder_deform(t1, c, "stretch", QQ(3))
    assert validate_surface(out).valid
    c2 = find_cylinders(out, "horizontal", QQ(4))[0]
    assert c2.modulus == 1  # mod was 1/3, stretched by 3


def test_displacement_formula_values():
    dx, dy = displacement_steps(1, 2, -2)
    assert dx == QQ(1, 2)
    assert dy == 1


def test_displacement_formula_against_lift():
    # cross-check by the explicit planar lift construction
    for (w, h, sa, sb) in ((1, 3, 2, -2), (2, 7, 3, -1), (QQ(3, 2), 5, 4, -3)):
        pts = lift_crossings(w, h, sa, sb)
        assert len(pts) >= 2
        dx, dy = displacement_steps(w, sa, sb)
        for p, q in zip(pts, pts[1:]):
            assert abs(q[0] - p[0]) == dx
            assert abs(q[1] - p[1]) == dy
