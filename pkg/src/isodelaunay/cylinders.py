"""Cylinder detection and deformation via exact slit complexes.

Horizontal cylinders are found by tracing all horizontal separatrices up to
a cap, slitting every triangle along the discovered horizontal saddle
connections (within a triangle these cuts are full horizontal slices, hence
pairwise disjoint chords), regluing the convex cells across unslit edge
pieces, and testing each component for the exact metric-cylinder criteria:
no interior singularity, boundary angle exactly pi at every corner, two
boundary circles, Euler characteristic zero.  Vertical cylinders are the
horizontal ones of the surface rotated by ninety degrees.
"""

from collections import defaultdict

from .rational import QQ, ZERO, ONE
from .errors import CapExhausted, NonTermination, NotACylinder, NonPositiveStretch
from .surface import (
    Surface,
    axes_in_corner,
    cross,
    dot,
    same_direction,
    smul,
    vadd,
    vneg,
    vsub,
)
from .geometry import Ray, Tracer

ROT90 = ((QQ(0), QQ(-1)), (QQ(1), QQ(0)))
ROT90_INV = ((QQ(0), QQ(1)), (QQ(-1), QQ(0)))


class SaddleRef:
    """A horizontal saddle connection with its exact per-triangle footprint."""

    __slots__ = ("start_vertex", "end_vertex", "displacement", "chords",
                 "edge")

    def __init__(self, start_vertex, end_vertex, displacement, chords, edge=None):
        self.start_vertex = start_vertex
        self.end_vertex = end_vertex
        self.displacement = displacement
        self.chords = chords  # list of (triangle, local_in, local_out)
        self.edge = edge      # set when the saddle is an edge of the triangulation

    @property
    def length(self):
        return abs(self.displacement[0])

    def __repr__(self):
        return (f"SaddleRef(v{self.start_vertex}->v{self.end_vertex}, "
                f"disp={self.displacement}, edge={self.edge})")


def horizontal_saddles(surface, cap, budget=100000):
    """All horizontal saddle connections of length <= cap, traced east.

    Returns (saddles, unresolved): unresolved counts separatrices that ran
    past the cap without hitting a singularity.
    """
    tracer = Tracer(surface)
    tri = surface.triangulation
    east = (ONE, ZERO)
    saddles = []
    unresolved = 0
    seen_edges = set()
    for e in range(1, tri.num_edges + 1):
        re_v, im_v = surface.periods[e - 1]
        if im_v == 0 and e not in seen_edges:
            seen_edges.add(e)
            s = e if re_v > 0 else -e
            saddles.append(SaddleRef(
                tri.tail(s), tri.head(s),
                (abs(re_v), ZERO), [], edge=e,
            ))
    for cyc in tri.vertex_cycles():
        for s0 in cyc:
            u = surface.period(s0)
            w = surface.period(-tri.prev_edge(s0))
            if same_direction(u, east):
                continue  # separatrix along an edge: covered above
            if not (cross(u, east) > 0 and cross(east, w) > 0):
                continue
            res = tracer.trace_ray(Ray(s0, east), linf_cap=cap, budget=budget)
            if res.end_kind == "cap":
                unresolved += 1
                continue
            if res.end_kind != "vertex":
                unresolved += 1
                continue
            chords = [
                (st.triangle, vsub(st.entry, st.offset), vsub(st.exit, st.offset))
                for st in res.steps
            ]
            saddles.append(SaddleRef(
                tri.tail(s0), res.end_vertex, res.end_point, chords,
            ))
    return saddles, unresolved


# ---------------------------------------------------------------------------
# slit complex


def _split_polygon(poly, p, q):
    """Split a convex polygon (ccw point list) along the chord p-q."""

    def locate(pt):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            ab = vsub(b, a)
            ap = vsub(pt, a)
            if cross(ab, ap) != 0:
                continue
            denom = dot(ab, ab)
            t = dot(ap, ab) / denom
            if 0 <= t <= 1:
                return i, t
        return None

    lp = locate(p)
    lq = locate(q)
    if lp is None or lq is None:
        return None
    points = []
    marks = {}
    n = len(poly)
    for i in range(n):
        points.append(poly[i])
        inserts = []
        if lp[0] == i and lp[1] > 0:
            inserts.append((lp[1], p))
        if lq[0] == i and lq[1] > 0:
            inserts.append((lq[1], q))
        for _, pt in sorted(inserts, key=lambda z: z[0]):
            if pt != points[-1]:
                points.append(pt)
    # dedupe closing point
    if len(points) > 1 and points[0] == points[-1]:
        points.pop()
    try:
        ip = points.index(p)
        iq = points.index(q)
    except ValueError:
        return None
    if ip == iq:
        return None
    lo, hi = min(ip, iq), max(ip, iq)
    side1 = points[lo:hi + 1]
    side2 = points[hi:] + points[:lo + 1]
    if len(side1) < 3 or len(side2) < 3:
        return None
    return side1, side2


def _poly_area2(poly):
    total = ZERO
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        total += cross(a, b)
    return total


class CellComplex:
    """The surface cut along a set of horizontal saddle connections."""

    def __init__(self, surface, saddles):
        self.surface = surface
        self.saddles = saddles
        tri = surface.triangulation
        chords_by_tri = defaultdict(list)
        for si, sad in enumerate(saddles):
            for ti, pin, pout in sad.chords:
                chords_by_tri[ti].append((pin, pout, si))
        slit_edges = {sad.edge for sad in saddles if sad.edge is not None}

        self.cells = []       # (triangle, polygon)
        cell_of_tri = defaultdict(list)
        for ti in range(tri.num_triangles):
            corners = [
                (ZERO, ZERO),
                surface.period(tri.triangles[ti][0]),
                vadd(surface.period(tri.triangles[ti][0]),
                     surface.period(tri.triangles[ti][1])),
            ]
            polys = [corners]
            for pin, pout, _ in chords_by_tri.get(ti, ()):
                if pin == pout:
                    continue
                for k, poly in enumerate(polys):
                    res = _split_polygon(poly, pin, pout)
                    if res is not None:
                        polys[k:k + 1] = [list(res[0]), list(res[1])]
                        break
            for poly in polys:
                cid = len(self.cells)
                self.cells.append((ti, [tuple(p) for p in poly]))
                cell_of_tri[ti].append(cid)

        # classify every cell side: slit (chord or slit edge) or glue piece
        self.side_info = {}   # (cell, i) -> ('slit', saddle idx) | ('edge', e, lo, hi)
        glue_pool = defaultdict(list)
        for cid, (ti, poly) in enumerate(self.cells):
            corners = [
                (ZERO, ZERO),
                surface.period(tri.triangles[ti][0]),
                vadd(surface.period(tri.triangles[ti][0]),
                     surface.period(tri.triangles[ti][1])),
            ]
            n = len(poly)
            for i in range(n):
                a, b = poly[i], poly[(i + 1) % n]
                tag = None
                for pin, pout, si in chords_by_tri.get(ti, ()):
                    if _on_segment(pin, pout, a) and _on_segment(pin, pout, b):
                        tag = ("slit", si)
                        break
                if tag is None:
                    for k in range(3):
                        ca, cb = corners[k], corners[(k + 1) % 3]
                        if _on_segment(ca, cb, a) and _on_segment(ca, cb, b):
                            s = tri.triangles[ti][k]
                            lo = _param_on(ca, cb, a)
                            hi = _param_on(ca, cb, b)
                            if s < 0:
                                lo, hi = ONE - lo, ONE - hi
                            lo, hi = min(lo, hi), max(lo, hi)
                            if abs(s) in slit_edges:
                                tag = ("slitedge", abs(s))
                            else:
                                tag = ("edge", abs(s), lo, hi)
                                glue_pool[(abs(s), lo, hi)].append((cid, i))
                            break
                assert tag is not None, "cell side with unknown provenance"
                self.side_info[(cid, i)] = tag

        # glue matching pieces across edges
        self.glued = {}
        for key, sides in glue_pool.items():
            assert len(sides) == 2, f"edge piece {key} not matched in pairs"
            (c1, i1), (c2, i2) = sides
            self.glued[(c1, i1)] = (c2, i2)
            self.glued[(c2, i2)] = (c1, i1)

        # connected components of cells under gluing
        parent = list(range(len(self.cells)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (c1, i1), (c2, i2) in self.glued.items():
            r1, r2 = find(c1), find(c2)
            if r1 != r2:
                parent[r1] = r2
        comp = defaultdict(list)
        for cid in range(len(self.cells)):
            comp[find(cid)].append(cid)
        self.components = [sorted(v) for _, v in sorted(comp.items())]

    def corner_classes(self, cells):
        """Union-find on cell corners of a component, identified across glued
        side pieces (endpoint to endpoint, reversed)."""
        cells_set = set(cells)
        nodes = {}
        for cid in cells:
            for k in range(len(self.cells[cid][1])):
                nodes[(cid, k)] = (cid, k)

        def find(x):
            while nodes[x] != x:
                nodes[x] = nodes[nodes[x]]
                x = nodes[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                nodes[rx] = ry

        for (c1, i1), (c2, i2) in self.glued.items():
            if c1 not in cells_set:
                continue
            n1 = len(self.cells[c1][1])
            n2 = len(self.cells[c2][1])
            union((c1, i1), (c2, (i2 + 1) % n2))
            union((c1, (i1 + 1) % n1), (c2, i2))
        return nodes, find


def _on_segment(a, b, p):
    ab = vsub(b, a)
    ap = vsub(p, a)
    if cross(ab, ap) != 0:
        return False
    t = dot(ap, ab)
    return 0 <= t <= dot(ab, ab)


def _param_on(a, b, p):
    ab = vsub(b, a)
    if ab[0] != 0:
        return (p[0] - a[0]) / ab[0]
    return (p[1] - a[1]) / ab[1]


class Cylinder:
    """A maximal flat cylinder with exact width, height, and boundary chains."""

    __slots__ = ("direction", "width", "height", "bottom", "top", "cells",
                 "interior_triangles")

    def __init__(self, direction, width, height, bottom, top, cells,
                 interior_triangles):
        self.direction = direction
        self.width = width
        self.height = height
        self.bottom = bottom  # list of SaddleRef along the bottom chain
        self.top = top
        self.cells = cells
        self.interior_triangles = interior_triangles

    @property
    def modulus(self):
        return self.height / self.width

    def chain_key(self):
        bot = sorted((s.start_vertex, s.length) for s in self.bottom)
        topc = sorted((s.start_vertex, s.length) for s in self.top)
        return (self.direction, self.width, self.height, tuple(bot), tuple(topc))

    def __repr__(self):
        return (f"Cylinder({self.direction}, w={self.width}, h={self.height}, "
                f"mod={self.modulus})")


def _component_cylinder(complexe, cells):
    """Test one component for the metric cylinder criteria; returns a
    Cylinder or None."""
    surface = complexe.surface
    tri = surface.triangulation
    cells_set = set(cells)

    # boundary sides (slits) and angle-pi test at every boundary corner
    nodes, find = complexe.corner_classes(cells)
    boundary_sides = []
    for cid in cells:
        poly = complexe.cells[cid][1]
        for i in range(len(poly)):
            tag = complexe.side_info[(cid, i)]
            if tag[0] in ("slit", "slitedge"):
                boundary_sides.append((cid, i))
            elif (cid, i) not in complexe.glued:
                return None  # unmatched side: defect
    if not boundary_sides:
        return None

    # interior singularity exclusion + boundary angles: accumulate quadrant
    # crossings per corner class; a class strictly inside the component at a
    # singular position is a wrapped cone point (reject), and every boundary
    # class must see exactly pi of angle (straight cylinder boundary)
    corner_positions = set()
    for ti in range(tri.num_triangles):
        cs = [
            (ZERO, ZERO),
            surface.period(tri.triangles[ti][0]),
            vadd(surface.period(tri.triangles[ti][0]),
                 surface.period(tri.triangles[ti][1])),
        ]
        for k in range(3):
            corner_positions.add((ti, cs[k]))

    angle = defaultdict(int)
    sing_flag = defaultdict(bool)
    for cid in cells:
        ti, poly = complexe.cells[cid]
        n = len(poly)
        for k in range(n):
            u = vsub(poly[(k + 1) % n], poly[k])
            w = vsub(poly[(k - 1) % n], poly[k])
            cls = find((cid, k))
            angle[cls] += axes_in_corner(u, w)
            if (ti, poly[k]) in corner_positions:
                sing_flag[cls] = True

    boundary_nodes = set()
    for cid, i in boundary_sides:
        n = len(complexe.cells[cid][1])
        boundary_nodes.add(find((cid, i)))
        boundary_nodes.add(find((cid, (i + 1) % n)))
    for cls, total in angle.items():
        if cls in boundary_nodes:
            if total != 2:  # exactly pi
                return None
        elif sing_flag[cls]:
            return None  # a singularity wrapped entirely inside
    # Euler characteristic and boundary cycle count
    v_count = len({find(n) for n in nodes})
    e_count = len(self_glued_pairs(complexe, cells_set)) + len(boundary_sides)
    f_count = len(cells)
    if v_count - e_count + f_count != 0:
        return None
    cycles = _boundary_cycles(complexe, cells, boundary_sides, find)
    if len(cycles) != 2:
        return None

    area2 = sum(_poly_area2(complexe.cells[cid][1]) for cid in cells)
    widths = []
    chains = []
    sides_up = []
    for cyc in cycles:
        w = ZERO
        chain = []
        above = None
        for cid, i in cyc:
            poly = complexe.cells[cid][1]
            a, b = poly[i], poly[(i + 1) % len(poly)]
            assert a[1] == b[1], "boundary side is not horizontal"
            w += abs(b[0] - a[0])
            tag = complexe.side_info[(cid, i)]
            if tag[0] == "slit":
                sad = complexe.saddles[tag[1]]
            else:
                sad = next(s for s in complexe.saddles if s.edge == tag[1])
            if not chain or chain[-1] is not sad:
                chain.append(sad)
            if above is None:
                others = [p for p in poly if p[1] != a[1]]
                above = bool(others) and others[0][1] > a[1]
        widths.append(w)
        chains.append(chain)
        sides_up.append(above)
    if widths[0] != widths[1]:
        return None
    width = widths[0]
    height = (area2 / 2) / width
    if sides_up[0]:
        bottom, top = chains[0], chains[1]
    else:
        bottom, top = chains[1], chains[0]

    # whole-triangle structure: present iff every cell is an uncut triangle
    interior = set()
    covered = True
    for cid in cells:
        ti, poly = complexe.cells[cid]
        if len(poly) == 3 and set(poly) == {
            (ZERO, ZERO),
            surface.period(tri.triangles[ti][0]),
            vadd(surface.period(tri.triangles[ti][0]),
                 surface.period(tri.triangles[ti][1])),
        }:
            interior.add(ti)
        else:
            covered = False
    return Cylinder(
        "horizontal", width, height, bottom, top, list(cells),
        interior if covered else None,
    )


def self_glued_pairs(complexe, cells_set):
    pairs = set()
    for (c1, i1), (c2, i2) in complexe.glued.items():
        if c1 in cells_set:
            pairs.add(frozenset(((c1, i1), (c2, i2))))
    return pairs


def _boundary_cycles(complexe, cells, boundary_sides, find):
    """Group boundary sides into cycles via shared corner classes."""
    ends = defaultdict(list)
    for cid, i in boundary_sides:
        n = len(complexe.cells[cid][1])
        a = find((cid, i))
        b = find((cid, (i + 1) % n))
        ends[a].append((cid, i))
        ends[b].append((cid, i))
    for cls, segs in ends.items():
        if len(segs) != 2:
            return []  # boundary is not a 1-manifold
    cycles = []
    remaining = set(boundary_sides)
    while remaining:
        start = min(remaining)
        cyc = [start]
        remaining.remove(start)
        cur = start
        while True:
            cid, i = cur
            n = len(complexe.cells[cid][1])
            b = find((cid, (i + 1) % n))
            nxt = [s for s in ends[b] if s != cur]
            if not nxt:
                break
            nxt = nxt[0]
            if nxt == start:
                break
            if nxt not in remaining:
                break
            cyc.append(nxt)
            remaining.remove(nxt)
            cur = nxt
        cycles.append(cyc)
    return cycles


def find_cylinders(surface, direction, cap, strict=False):
    """All cylinders in the given direction whose boundary saddle connections
    have length <= cap; sound, and complete up to the cap.

    With strict=True, an unresolved separatrix (ran past the cap without
    hitting a singularity) raises CapExhausted, since completeness of the
    cylinder list can then not be certified.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    if direction == "vertical":
        rotated = surface.apply_matrix(ROT90)
        cyls = find_cylinders(rotated, "horizontal", cap, strict=strict)
        out = []
        for c in cyls:
            c.direction = "vertical"
            out.append(c)
        return out
    saddles, unresolved = horizontal_saddles(surface, cap)
    if strict and unresolved:
        raise CapExhausted(
            f"{unresolved} horizontal separatrices unresolved at cap {cap}"
        )
    if not saddles:
        return []
    complexe = CellComplex(surface, saddles)
    out = []
    for cells in complexe.components:
        cyl = _component_cylinder(complexe, cells)
        if cyl is not None:
            out.append(cyl)
    out.sort(key=lambda c: (c.width, c.height, c.chain_key()))
    return out


# ---------------------------------------------------------------------------
# deformations


def _stretch_matrix(direction, t):
    if direction == "horizontal":
        return ((ONE, ZERO), (ZERO, QQ(t)))
    return ((QQ(t), ZERO), (ZERO, ONE))


def _shear_matrix(direction, t):
    if direction == "horizontal":
        return ((ONE, QQ(t)), (ZERO, ONE))
    # R(pi/2) [[1,t],[0,1]] R(-pi/2) = [[1,0],[-t,1]]
    return ((ONE, ZERO), (QQ(-t), ONE))


def straighten_saddle(surface, start_vertex, start_ray, displacement,
                      budget=256):
    """Flip until the given straight saddle connection is an edge.

    The saddle is anchored by an interior point so it survives retracing
    across flips; each round flips the first crossed edge (preferring a
    convex flip) and retraces.  Returns (surface, flip_word, edge_id).
    """
    from .geometry import Tracer, Ray

    cur = surface
    word = []
    ray = start_ray
    for _ in range(budget):
        tracer = Tracer(cur)
        res = tracer.trace_ray(ray, target=displacement)
        if res.end_kind != "vertex" or res.end_point != displacement:
            raise NotACylinder("saddle connection lost during straightening")
        if not res.crossings:
            # the saddle runs along an edge of the current triangulation
            tri = cur.triangulation
            s0 = res.start_ray.sector
            u = cur.period(s0)
            if same_direction(u, displacement) and u == displacement:
                return cur, word, abs(s0)
            # along an edge but longer/shorter would have hit a vertex first
            raise NotACylinder("saddle trace is edge-aligned but not an edge")
        flipped = False
        for eid, _param, _spar in res.crossings:
            try:
                nxt, _ = cur.flip(eid)
            except Exception:
                continue
            w_old = ray
            # re-anchor the start ray: the flip may rename the start sector;
            # locate the direction in the new fan by walking from a surviving
            # sector at the same vertex
            cur2 = nxt
            word.append(eid)
            ray = _relocate_ray(cur, cur2, ray)
            cur = cur2
            flipped = True
            break
        if not flipped:
            raise NotACylinder("no crossed edge of the saddle is flippable")
    raise NonTermination("straighten_saddle exceeded its flip budget")


def _relocate_ray(old_surface, new_surface, ray):
    """Find the ray with the same geometric direction at the same vertex
    after one flip, anchored at a sector edge that survived the flip."""
    from .geometry import Tracer

    old_tri = old_surface.triangulation
    new_tri = new_surface.triangulation
    vertex = old_tri.tail(ray.sector)
    d = ray.direction
    old_fan = Tracer(old_surface).fan(vertex)
    new_fan = Tracer(new_surface).fan(vertex)
    # walk the old fan clockwise from the ray's sector to the first sector
    # edge that still exists with the same period in the new triangulation
    sectors = old_fan.sectors
    pos = sectors.index(ray.sector)
    n = len(sectors)
    for back in range(n):
        s = sectors[(pos - back) % n]
        if s in new_fan.sectors and old_surface.period(s) == new_surface.period(s):
            return new_fan.locate_from(s, d, max_corners=len(new_fan.sectors))
    raise NotACylinder("could not re-anchor ray after flip")


def _saddle_ray(surface, saddle):
    """Starting ray of a saddle on its surface."""
    from .geometry import Tracer

    tracer = Tracer(surface)
    fan = tracer.fan(saddle.start_vertex)
    east = (ONE, ZERO)
    d = saddle.displacement
    for s in fan.sectors:
        u = fan.sector_direction(s)
        w = fan.sector_direction(fan.next_sector(s))
        if same_direction(u, d) or (cross(u, d) > 0 and cross(d, w) > 0):
            ray = Ray(s, d)
            try:
                res = tracer.trace_ray(ray, target=d)
            except Exception:
                continue
            if res.end_kind == "vertex" and res.end_point == d:
                return ray
    raise NotACylinder("saddle start ray not found")


def align_cylinder(surface, cylinder, cap):
    """Flip the surface so every boundary saddle of `cylinder` is an edge;
    returns (new_surface, matching cylinder with interior triangles)."""
    work = surface
    if cylinder.direction == "vertical":
        work = surface.apply_matrix(ROT90)
    target_key = None
    for _ in range(64):
        cyls = find_cylinders(work, "horizontal", cap)
        match = [
            c for c in cyls
            if (c.width, c.height) == (cylinder.width, cylinder.height)
            and sorted((s.start_vertex, s.length) for s in c.bottom + c.top)
            == sorted((s.start_vertex, s.length) for s in cylinder.bottom + cylinder.top)
        ]
        if not match:
            raise NotACylinder("cylinder not found on the surface")
        cyl = match[0]
        if cyl.interior_triangles is not None:
            if cylinder.direction == "vertical":
                back = work.apply_matrix(ROT90_INV)
                return back, cyl
            return work, cyl
        pending = [s for s in cyl.bottom + cyl.top if s.edge is None]
        assert pending, "cylinder not aligned yet has no pending saddles"
        sad = pending[0]
        ray = _saddle_ray(work, sad)
        work, _, _ = straighten_saddle(
            work, sad.start_vertex, ray, sad.displacement
        )
    raise NonTermination("align_cylinder failed to stabilize")


def cylinder_deform(surface, cylinder, kind, t, cap=None):
    """Stretch (a_t) or shear (u_t) supported on one cylinder.

    Periods of edges inside the cylinder transform by the conjugated matrix;
    boundary and exterior periods are unchanged.  The cylinder interior must
    be triangulated by edges lying in it; the surface is re-flipped first
    when needed (the flips do not change the surface, only its triangulation).
    """
    if kind == "stretch":
        if t <= 0:
            raise NonPositiveStretch(f"stretch parameter {t} <= 0")
        mat = _stretch_matrix(cylinder.direction, t)
    elif kind == "shear":
        mat = _shear_matrix(cylinder.direction, t)
    else:
        raise ValueError(f"unknown deformation kind {kind!r}")
    if cap is None:
        cap = 4 * (cylinder.width + cylinder.height + 1)
    aligned, cyl = align_cylinder(surface, cylinder, cap)
    inside = cyl.interior_triangles
    if cylinder.direction == "vertical":
        # interior triangles were computed on the rotated copy, but the
        # triangulation is shared, so indices agree
        pass
    tri = aligned.triangulation
    periods = list(aligned.periods)
    from .surface import mat_apply

    for e in range(1, tri.num_edges + 1):
        left_in = tri.triangle_of(e) in inside
        right_in = tri.triangle_of(-e) in inside
        p = periods[e - 1]
        if left_in and right_in:
            periods[e - 1] = mat_apply(mat, p)
        elif left_in or right_in:
            q = mat_apply(mat, p)
            assert q == p, "cylinder boundary edge moved by the deformation"
    out = Surface(tri, periods)
    return out


def shrink_moduli(surface, t, cap):
    """Modulus-shrinking map: stretch every horizontal and vertical cylinder
    of modulus m > 1 by (1-t) + t/m; at t = 1 all such moduli become 1.

    The supports are pairwise disjoint (cylinders of modulus greater than one
    are disjoint), so the result does not depend on the application order.
    """
    if not (0 <= t <= 1):
        raise ValueError("t must lie in [0, 1]")
    if t == 0:
        return surface
    cur = surface
    # discover loudly: an unresolved separatrix may hide a large-modulus
    # cylinder, which would make the homotopy silently wrong
    work = []
    for direction in ("horizontal", "vertical"):
        for cyl in find_cylinders(cur, direction, cap, strict=True):
            if cyl.modulus > 1:
                work.append((direction, cyl.chain_key(), cyl.modulus))
    for direction, key, modulus in work:
        cyls = [
            c for c in find_cylinders(cur, direction, cap)
            if c.chain_key() == key
        ]
        assert len(cyls) == 1, "deformed target cylinder not re-identified"
        factor = (1 - QQ(t)) + QQ(t) / modulus
        cur = cylinder_deform(cur, cyls[0], "stretch", factor, cap=cap)
    return cur


# ---------------------------------------------------------------------------
# displacement arithmetic (crossings of saddles sharing a cylinder)


def displacement_steps(width, slope_a, slope_b):
    """Horizontal and vertical distances between consecutive crossings of two
    saddle connections of the given slopes inside a horizontal cylinder."""
    width = QQ(width)
    sa, sb = QQ(slope_a), QQ(slope_b)
    if sa == sb:
        raise ValueError("slopes must differ")
    dx = abs(sb * width / (sa - sb))
    dy = abs(sa * sb * width / (sa - sb))
    return dx, dy


def lift_crossings(width, height, slope_a, slope_b, offset=QQ(1, 3)):
    """Explicit planar lift oracle for the displacement formula.

    In the strip model of a horizontal cylinder (universal cover R x (0,h),
    deck translation x -> x + width), the segment of slope a from the origin
    is intersected with every deck translate of the slope-b segment based at
    (offset, 0); crossing points come back ordered along the first segment.
    """
    width, height = QQ(width), QQ(height)
    sa, sb = QQ(slope_a), QQ(slope_b)
    if sa == sb:
        raise ValueError("slopes must differ")
    x0 = QQ(offset)
    pts = []
    for k in range(-256, 257):
        y = (x0 + k * width) * sa * sb / (sb - sa)
        if 0 < y < height:
            pts.append((y / sa, y))
    pts.sort(key=lambda p: p[1] if sa > 0 else -p[1])
    return pts
