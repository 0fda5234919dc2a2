import random

import pytest

from isodelaunay.rational import QQ
from isodelaunay.errors import (
    FlipDegenerate,
    FlipSelfGlued,
    InputError,
    NonPositiveDeterminant,
)
from isodelaunay.surface import (
    StratumSignature,
    Surface,
    Triangulation,
    format_surface,
    parse_surface,
    octagon_surface,
    square_torus,
    torus_t1,
    validate_surface,
)


def test_signature_invariants():
    sig = StratumSignature(1, (0,))
    assert sig.dimension == 4
    sig2 = StratumSignature(2, (2,))
    assert sig2.dimension == 8  # 4g + 2n - 2
    with pytest.raises(InputError):
        StratumSignature(2, (1,))  # sum != 2g-2


def test_torus_combinatorics():
    t1 = torus_t1()
    tri = t1.triangulation
    assert tri.num_edges == 3
    assert tri.num_triangles == 2
    assert tri.num_vertices == 1
    assert tri.genus == 1
    assert t1.triangle_area2(0) == 3
    assert t1.triangle_area2(1) == 3


def test_validate_t1():
    report = validate_surface(torus_t1())
    assert report.valid
    assert report.signature == StratumSignature(1, (0,))


def test_validate_closure_failure():
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    with pytest.raises(InputError):
        Surface(tri, [(2, 1), (-1, 1), (-1, -3)])
    surf = Surface(tri, [(2, 1), (-1, 1), (-1, -3)], check=False)
    report = validate_surface(surf)
    assert not report.valid
    assert len(report.closure_failures) == 2


def test_validate_octagon_h2():
    report = validate_surface(octagon_surface())
    assert report.valid
    # single cone point of angle 6*pi: quadrant crossings give winding 3
    assert report.signature == StratumSignature(2, (2,))
    assert octagon_surface().cone_turns() == (3,)


def test_flip_b_period():
    t1 = torus_t1()
    flipped, quad = t1.flip(2)
    assert abs(flipped.periods[1][0]) == 3 and abs(flipped.periods[1][1]) == 3
    assert validate_surface(flipped).valid


def test_flip_c_period_and_convexity():
    t1 = torus_t1()
    flipped, _ = t1.flip(3)
    assert flipped.periods[2] in (((QQ(3), QQ(0))), ((QQ(-3), QQ(0))))
    assert validate_surface(flipped).valid


def test_double_flip_is_identity_up_to_orientation():
    t1 = torus_t1()
    once, _ = t1.flip(2)
    twice, _ = once.flip(2)
    # the edge comes back with reversed orientation; normalize and compare
    per = list(twice.periods)
    assert per[1] == (QQ(1), QQ(-1))  # reverse of b = (-1, 1)
    normalized = {frozenset([p, (-p[0], -p[1])]) for p in per}
    original = {frozenset([p, (-p[0], -p[1])]) for p in t1.periods}
    assert normalized == original
    assert twice.triangle_area2(0) == 3


def test_flip_self_glued():
    tri = Triangulation([(1, 2, -1), (-2, 3, -3)])
    with pytest.raises(FlipSelfGlued):
        tri.flip_quad(1)


def test_flip_degenerate():
    # the quadrilaterals around the glued octagon sides are non-convex,
    # while every fan diagonal sits in a convex quadrilateral
    surf = octagon_surface()
    for e in (1, 2, 3, 4):
        with pytest.raises(FlipDegenerate):
            surf.flip(e)
    for e in (5, 6, 7, 8, 9):
        flipped, _ = surf.flip(e)
        assert validate_surface(flipped).valid


def test_apply_matrix_identity_and_eps():
    t1 = torus_t1()
    same = t1.apply_matrix(((1, 0), (0, 1)))
    assert same.periods == t1.periods
    eps = QQ(1, 8)
    tilted = t1.apply_matrix(((1, 0), (-eps, 1 + eps)))
    assert tilted.periods[0] == (QQ(2), QQ(7, 8))
    assert validate_surface(tilted).valid
    with pytest.raises(NonPositiveDeterminant):
        t1.apply_matrix(((1, 0), (0, -1)))


def test_apply_matrix_composition():
    rng = random.Random(7)
    t1 = torus_t1()
    for _ in range(10):
        def rand_matrix():
            while True:
                m = tuple(
                    tuple(QQ(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(2))
                    for _ in range(2)
                )
                if m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0:
                    return m
        a, b = rand_matrix(), rand_matrix()
        ab = (
            (
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ),
            (
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ),
        )
        assert t1.apply_matrix(b).apply_matrix(a).periods == t1.apply_matrix(ab).periods


def test_surface_io_roundtrip():
    for surf in (torus_t1(), square_torus(), octagon_surface()):
        text = format_surface(surf)
        back = parse_surface(text)
        assert back.periods == surf.periods
        assert back.triangulation.triangles == surf.triangulation.triangles


def test_parse_error_names_line():
    text = "triangle 0: 1 2 3\ntriangle 1: -1 -2 -3\nedge 1: re=1/0 im=1\n"
    with pytest.raises(InputError) as err:
        parse_surface(text, path="bad.srf")
    assert "bad.srf:3" in str(err.value)


def test_header_validation():
    text = format_surface(torus_t1())
    assert text.startswith("stratum g=1 kappa=0\n")
    bad = text.replace("kappa=0", "kappa=2")
    with pytest.raises(InputError):
        parse_surface(bad)
