"""Veering and L-infinity Delaunay predicates, circumsquares, and the flip
algorithm producing the L-infinity Delaunay triangulation.

The authoritative Delaunay test is the circumsquare development oracle;
the quadrilateral length comparison on alternating-slope quadrilaterals is
the fast path that drives the flip loop.
"""

from collections import deque

from .rational import QQ, ZERO, sign
from .errors import (
    AxisAlignedEdge,
    FlipSelfGlued,
    InputError,
    NoCircumsquare,
    NonTermination,
    NotGeneric,
)
from .surface import vadd, vsub, vneg, cross


def linf(v):
    """The L-infinity norm max(|re|, |im|) of a period."""
    return max(abs(v[0]), abs(v[1]))


def slope_signs(surface):
    """Per-edge (sign re, sign im) for the positive orientation.

    Raises AxisAlignedEdge naming the first offending edge; an axis-aligned
    period means the surface is not L-infinity generic.
    """
    signs = []
    for e in range(1, surface.triangulation.num_edges + 1):
        re_v, im_v = surface.periods[e - 1]
        if re_v == 0 or im_v == 0:
            raise AxisAlignedEdge(e)
        signs.append((sign(re_v), sign(im_v)))
    return tuple(signs)


class DelaunayData:
    """A pair (triangulation, slope-sign vector)."""

    __slots__ = ("triangulation", "signs")

    def __init__(self, triangulation, signs):
        signs = tuple((int(a), int(b)) for a, b in signs)
        if len(signs) != triangulation.num_edges:
            raise InputError("one sign pair per edge required")
        if any(a not in (-1, 1) or b not in (-1, 1) for a, b in signs):
            raise InputError("signs must be +-1")
        self.triangulation = triangulation
        self.signs = signs

    @classmethod
    def of_surface(cls, surface):
        return cls(surface.triangulation, slope_signs(surface))

    def sign_re(self, s):
        v = self.signs[abs(s) - 1][0]
        return v if s > 0 else -v

    def sign_im(self, s):
        v = self.signs[abs(s) - 1][1]
        return v if s > 0 else -v

    def slope_sign(self, s):
        """Orientation-independent sign of the slope of an edge."""
        a, b = self.signs[abs(s) - 1]
        return a * b

    def __eq__(self, other):
        return (
            isinstance(other, DelaunayData)
            and self.triangulation == other.triangulation
            and self.signs == other.signs
        )

    def __hash__(self):
        return hash((self.triangulation, self.signs))

    def __repr__(self):
        return f"DelaunayData(E={self.triangulation.num_edges}, signs={self.signs})"


def is_veering(data):
    """True iff no triangle carries three edges of equal slope sign."""
    for tri in data.triangulation.triangles:
        s0 = data.slope_sign(tri[0])
        if all(data.slope_sign(s) == s0 for s in tri[1:]):
            return False
    return True


class Quadrilateral:
    """Two adjacent triangles with alternating side slope-signs.

    With e the shared edge, the triangles are (e, a, b) and (-e, c, d); the
    other diagonal runs head(a) -> head(c) and has period p(b) + p(c).
    """

    __slots__ = ("edge", "sides")

    def __init__(self, edge, sides):
        self.edge = edge
        self.sides = sides

    @property
    def diagonal_parts(self):
        """The two oriented sides whose period sum is the other diagonal."""
        return (self.sides[1], self.sides[2])

    def gamma_period(self, surface):
        return surface.period(self.edge)

    def other_diagonal_period(self, surface):
        b, c = self.diagonal_parts
        return vadd(surface.period(b), surface.period(c))

    def __repr__(self):
        return f"Quadrilateral(edge={self.edge}, sides={self.sides})"


def quad_set(data):
    """All alternating-slope quadrilaterals, ordered by shared edge index."""
    quads = []
    tri = data.triangulation
    for e in range(1, tri.num_edges + 1):
        try:
            sides = tri.flip_quad(e)
        except FlipSelfGlued:
            continue
        ss = [data.slope_sign(s) for s in sides]
        if ss[0] == ss[2] and ss[1] == ss[3] and ss[0] != ss[1]:
            quads.append(Quadrilateral(e, sides))
    return quads


def delaunay_condition(quad, surface):
    """Whether the shared edge is strictly L-infinity shorter than the other
    diagonal, evaluated exactly."""
    return linf(quad.gamma_period(surface)) < linf(quad.other_diagonal_period(surface))


# ---------------------------------------------------------------------------
# circumsquare certificates


class CircumsquareCertificate:
    """Inscribing square of a triangle plus a developed emptiness check."""

    __slots__ = (
        "triangle",
        "square",
        "inscribed",
        "empty",
        "boundary",
        "interior_witness",
        "witness_exit_edge",
        "axis_aligned_edge",
        "degenerate",
        "placements",
    )

    def __init__(self, triangle, square, inscribed, empty, boundary,
                 interior_witness, witness_exit_edge, axis_aligned_edge,
                 degenerate, placements):
        self.triangle = triangle
        self.square = square              # (x0, y0, h)
        self.inscribed = inscribed        # developed vertex positions
        self.empty = empty
        self.boundary = boundary          # {position: vertex label}
        self.interior_witness = interior_witness
        self.witness_exit_edge = witness_exit_edge
        self.axis_aligned_edge = axis_aligned_edge
        self.degenerate = degenerate
        self.placements = placements

    @property
    def boundary_count(self):
        return len(self.boundary)

    def passes(self):
        """The full L-infinity Delaunay triangle condition."""
        return (
            self.empty
            and self.axis_aligned_edge is None
            and set(self.boundary) == set(self.inscribed)
        )

    def explain(self):
        x0, y0, h = self.square
        msg = [
            f"triangle {self.triangle}: square corner=({x0},{y0}) height={h}",
            f"  inscribed at {sorted(self.inscribed)}",
            f"  boundary singularities: {len(self.boundary)}",
        ]
        if not self.empty:
            msg.append(f"  interior singularity at {self.interior_witness}")
        if self.axis_aligned_edge is not None:
            msg.append(f"  axis-aligned edge {self.axis_aligned_edge}")
        msg.append(f"  development size {self.placements}")
        return "\n".join(msg)


def _on_boundary(p, square):
    x0, y0, h = square
    x, y = p
    if not (x0 <= x <= x0 + h and y0 <= y <= y0 + h):
        return False
    return x == x0 or x == x0 + h or y == y0 or y == y0 + h


def _strict_inside(p, square):
    x0, y0, h = square
    return x0 < p[0] < x0 + h and y0 < p[1] < y0 + h


def _candidate_squares(pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    w, hb = maxx - minx, maxy - miny
    h = max(w, hb)
    if h == 0:
        return []
    cands = []
    if w == hb:
        cands.append((minx, miny, h))
    elif w > hb:
        seen = set()
        for p in pts:
            for y0 in (p[1], p[1] - h):
                if y0 in seen:
                    continue
                seen.add(y0)
                if maxy - h <= y0 <= miny:
                    cands.append((minx, y0, h))
        if not cands:
            # all vertices on the vertical extremes; any placement works
            cands.append((minx, miny, h))
    else:
        seen = set()
        for p in pts:
            for x0 in (p[0], p[0] - h):
                if x0 in seen:
                    continue
                seen.add(x0)
                if maxx - h <= x0 <= minx:
                    cands.append((x0, miny, h))
        if not cands:
            cands.append((minx, miny, h))
    valid = []
    for sq in cands:
        if all(_on_boundary(p, sq) for p in pts):
            valid.append(sq)
    valid.sort()
    return valid


def _seg_meets_open_square(p, q, square):
    """Whether the open segment (p, q) meets the open square."""
    x0, y0, h = square
    lo = [x0, y0]
    hi = [x0 + h, y0 + h]
    # clip parameter interval (0,1) against the four slabs
    t_lo, t_hi = QQ(0), QQ(1)
    for i in range(2):
        d = q[i] - p[i]
        if d == 0:
            if not (lo[i] < p[i] < hi[i]):
                return False
            continue
        t1 = (lo[i] - p[i]) / d
        t2 = (hi[i] - p[i]) / d
        if t1 > t2:
            t1, t2 = t2, t1
        t_lo = max(t_lo, t1)
        t_hi = min(t_hi, t2)
    return t_lo < t_hi


def circumsquare(surface, triangle_index, budget=4096):
    """Inscribing-square certificate for one triangle.

    Develops neighboring triangles breadth-first across every edge whose open
    segment meets the open square, recording singularities that land in the
    closed square.  Termination is forced by the area bound; the budget is a
    defensive guard only.
    """
    tri = surface.triangulation
    t0 = tri.triangles[triangle_index]
    p0 = (ZERO, ZERO)
    pts = [p0]
    for s in t0[:2]:
        pts.append(vadd(pts[-1], surface.period(s)))
    squares = _candidate_squares(pts)
    if not squares:
        raise NoCircumsquare(
            f"triangle {triangle_index} admits no inscribing axis-aligned square"
        )
    square = squares[0]

    axis_edge = None
    for s in t0:
        re_v, im_v = surface.period(s)
        if re_v == 0 or im_v == 0:
            axis_edge = abs(s)
            break
    degenerate = cross(surface.period(t0[0]), surface.period(t0[1])) == 0

    # development: placement = (triangle index, offset of its first corner);
    # each placement remembers through which seed side its chain first left
    # the seed triangle, so repair flips know where a violation entered
    inscribed = set(pts)
    boundary = {}
    interior_witness = None
    witness_exit = None
    empty = True
    for i, p in enumerate(pts):
        boundary.setdefault(p, tri.tail(t0[i]))

    def corners(ti, offset):
        t = tri.triangles[ti]
        c = [offset]
        c.append(vadd(c[-1], surface.period(t[0])))
        c.append(vadd(c[-1], surface.period(t[1])))
        return c

    start = (triangle_index, p0)
    seen = {start: None}
    queue = deque([start])
    steps = 0
    while queue:
        steps += 1
        if steps > budget:
            raise NonTermination(
                f"circumsquare development exceeded {budget} placements"
            )
        key = queue.popleft()
        ti, off = key
        exit_edge = seen[key]
        t = tri.triangles[ti]
        cs = corners(ti, off)
        for i, s in enumerate(t):
            corner = cs[i]
            vlabel = tri.tail(s)
            if _strict_inside(corner, square):
                if corner not in inscribed:
                    empty = False
                    if interior_witness is None:
                        interior_witness = (corner, vlabel)
                        witness_exit = exit_edge
            elif _on_boundary(corner, square):
                if corner not in boundary:
                    boundary[corner] = vlabel
        for i, s in enumerate(t):
            a, b = cs[i], cs[(i + 1) % 3]
            if not _seg_meets_open_square(a, b, square):
                continue
            nti, ni = tri._slot[-s]
            # align the neighbor so its side -s occupies segment b -> a
            nt = tri.triangles[nti]
            walk = (ZERO, ZERO)
            for k in range(ni):
                walk = vadd(walk, surface.period(nt[k]))
            noff = vsub(b, walk)
            nkey = (nti, noff)
            if nkey not in seen:
                seen[nkey] = exit_edge if exit_edge is not None else s
                queue.append(nkey)
    return CircumsquareCertificate(
        triangle=triangle_index,
        square=square,
        inscribed=inscribed,
        empty=empty,
        boundary=boundary,
        interior_witness=interior_witness,
        witness_exit_edge=witness_exit,
        axis_aligned_edge=axis_edge,
        degenerate=degenerate,
        placements=len(seen),
    )


def all_certificates(surface, budget=4096):
    return [
        circumsquare(surface, ti, budget=budget)
        for ti in range(surface.triangulation.num_triangles)
    ]


# ---------------------------------------------------------------------------
# the flip algorithm


def _axis_edges(surface):
    out = []
    for e in range(1, surface.triangulation.num_edges + 1):
        re_v, im_v = surface.periods[e - 1]
        if re_v == 0 or im_v == 0:
            out.append(e)
    return out


def _flippable(surface, e):
    try:
        a, b, c, d = surface.triangulation.flip_quad(e)
    except FlipSelfGlued:
        return None
    f = vadd(surface.period(b), surface.period(c))
    if cross(f, surface.period(d)) <= 0 or cross(vneg(f), surface.period(b)) <= 0:
        return None
    return f


def delaunay_triangulate(surface, budget_factor=64):
    """The unique L-infinity Delaunay triangulation of a generic surface.

    Returns (data, flip_word, delaunay_surface) where flip_word is the list of
    edge ids flipped, in order, starting from the input triangulation.

    The loop alternates a fast path (flip alternating-slope quadrilaterals
    whose shared edge is strictly longer than the other diagonal: the total
    edge length strictly drops, and saddle connections below any length bound
    are finite in number, so this phase cannot cycle) with a certificate-driven
    repair phase.  A certificate whose square has an empty interior but four
    or more boundary singularities is a maximal square witnessing
    non-genericity outright: any strictly larger square would contain one of
    them in its interior.
    """
    ne = surface.triangulation.num_edges
    budget = budget_factor * ne * ne
    word = []
    cur = surface
    visited = {(cur.triangulation.triangles, cur.periods)}

    def do_flip(e):
        nonlocal cur
        cur, _ = cur.flip(e)
        word.append(e)
        visited.add((cur.triangulation.triangles, cur.periods))

    moves = 0
    while True:
        if moves > budget:
            raise NonTermination(f"flip budget {budget} exceeded")
        moves += 1

        axis = _axis_edges(cur)
        if not axis:
            data = DelaunayData.of_surface(cur)
            improved = False
            for quad in quad_set(data):
                g = linf(quad.gamma_period(cur))
                o = linf(quad.other_diagonal_period(cur))
                if o < g and _flippable(cur, quad.edge) is not None:
                    do_flip(quad.edge)
                    improved = True
                    break
            if improved:
                continue

        # verification / witness scan
        violation = None
        for ti in range(cur.triangulation.num_triangles):
            try:
                cert = circumsquare(cur, ti)
            except NoCircumsquare:
                violation = ("monochromatic", ti, None)
                break
            if cert.empty and len(cert.boundary) > 3:
                raise NotGeneric(
                    ("maximal-square", ti, cert),
                    f"maximal square of triangle {ti} has "
                    f"{len(cert.boundary)} boundary singularities",
                )
            if not cert.passes():
                violation = ("certificate", ti, cert)
                break
        if violation is None:
            return DelaunayData.of_surface(cur), word, cur

        # repair: prefer the side through which the offending development
        # left the failing triangle, then the other sides, longest first
        kind, ti, cert = violation
        candidates = []
        if cert is not None and cert.witness_exit_edge is not None:
            candidates.append(abs(cert.witness_exit_edge))
        if cert is not None and cert.axis_aligned_edge is not None:
            candidates.append(cert.axis_aligned_edge)
        tri_edges = sorted(
            {abs(s) for s in cur.triangulation.triangles[ti]},
            key=lambda e: (-linf(cur.periods[e - 1]), e),
        )
        candidates.extend(e for e in tri_edges if e not in candidates)
        if kind != "monochromatic" and axis:
            candidates.extend(e for e in axis if e not in candidates)

        repaired = False
        for e in candidates:
            f = _flippable(cur, e)
            if f is None:
                continue
            nxt, _ = cur.flip(e)
            if (nxt.triangulation.triangles, nxt.periods) in visited:
                continue
            do_flip(e)
            repaired = True
            break
        if not repaired:
            if axis:
                raise NotGeneric(
                    ("axis-aligned-edge", axis[0]),
                    f"axis-aligned edge {axis[0]} cannot be removed",
                )
            raise NotGeneric(
                violation,
                f"triangle {ti} fails its certificate and no repair flip applies",
            )


def is_generic(surface, cap=None, budget_factor=64):
    """L-infinity genericity test; returns (bool, witness).

    A surface is generic iff it admits an L-infinity Delaunay triangulation
    whose circumsquare certificates all show exactly 3 boundary singularities,
    every quadrilateral comparison is strict, and no edge is axis-aligned;
    the first three are established by delaunay_triangulate, the strictness
    of quadrilaterals is re-checked here.
    """
    try:
        data, _, delaunay_surface = delaunay_triangulate(
            surface, budget_factor=budget_factor
        )
    except NotGeneric as exc:
        return False, exc.witness
    except AxisAlignedEdge as exc:
        return False, ("axis-aligned-edge", exc.edge)
    for quad in quad_set(data):
        g = linf(quad.gamma_period(delaunay_surface))
        o = linf(quad.other_diagonal_period(delaunay_surface))
        if not g < o:
            return False, ("quad-equality", quad.edge)
    return True, None
