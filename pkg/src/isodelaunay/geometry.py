"""Exact straight-line geometry on triangulated translation surfaces.

Provides corner fans and rays at cone points, the developing tracer for
straight segments, and bounded saddle-connection search.  Everything is
exact rational arithmetic; traces that claim to land on a singularity have
verified the landing by development.
"""

from collections import deque

from .rational import QQ, ZERO, ONE
from .errors import IncompatibleReference, NonTermination
from .surface import (
    cross,
    dot,
    same_direction,
    smul,
    vadd,
    vneg,
    vsub,
)


class Ray:
    """Direction at a cone point: a corner sector plus an exact direction.

    The sector is named by the oriented edge at its clockwise boundary; a
    direction along an edge-end belongs to the sector it opens (lower
    boundary convention), so each geometric ray has one canonical name.
    """

    __slots__ = ("sector", "direction")

    def __init__(self, sector, direction):
        self.sector = sector
        self.direction = direction

    def key(self):
        return (self.sector, self.direction)

    def __eq__(self, other):
        return isinstance(other, Ray) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Ray(sector={self.sector}, dir={self.direction})"


class Fan:
    """Cyclic corner structure at one vertex of a surface."""

    __slots__ = ("surface", "vertex", "sectors", "_pos")

    def __init__(self, surface, vertex):
        self.surface = surface
        self.vertex = vertex
        cyc = surface.triangulation.vertex_cycles()[vertex]
        self.sectors = cyc
        self._pos = {s: i for i, s in enumerate(cyc)}

    def __len__(self):
        return len(self.sectors)

    def sector_direction(self, s):
        return self.surface.period(s)

    def next_sector(self, s):
        return self.sectors[(self._pos[s] + 1) % len(self.sectors)]

    def canonical_ray(self, sector, direction):
        """Normalize: a direction on a sector's upper boundary moves to the
        next sector, where it is the lower boundary."""
        u = self.sector_direction(sector)
        if same_direction(u, direction):
            return Ray(sector, direction)
        w = self.sector_direction(self.next_sector(sector))
        if same_direction(w, direction):
            return Ray(self.next_sector(sector), direction)
        assert cross(u, direction) > 0 and cross(direction, w) > 0, (
            "direction outside the claimed sector"
        )
        return Ray(sector, direction)

    def locate_from(self, anchor_sector, direction, max_corners=None):
        """First ray with the given direction reached from the lower boundary
        of the anchor sector by a ccw walk (at most max_corners corners)."""
        s = anchor_sector
        limit = max_corners if max_corners is not None else len(self.sectors)
        for _ in range(limit + 1):
            u = self.sector_direction(s)
            if same_direction(u, direction):
                return Ray(s, direction)
            w = self.sector_direction(self.next_sector(s))
            if cross(u, direction) > 0 and cross(direction, w) > 0:
                return Ray(s, direction)
            s = self.next_sector(s)
        raise NonTermination("direction not located in the corner fan walk")

    def ray_order_key(self, ray):
        """Total order key for circular comparisons around this vertex.

        Within a sector (corner angle < pi) the ccw angle from the lower
        boundary is ordered by quadrant-free monotone invariants of
        (cross, dot) with the boundary direction.
        """
        u = self.sector_direction(ray.sector)
        if same_direction(u, ray.direction):
            return (self._pos[ray.sector], 0, ZERO)
        c = cross(u, ray.direction)
        d = dot(u, ray.direction)
        assert c > 0, "ray direction outside its sector"
        if d > 0:
            return (self._pos[ray.sector], 1, c / d)
        if d == 0:
            return (self._pos[ray.sector], 2, ZERO)
        return (self._pos[ray.sector], 3, -d / c)


class TraceStep:
    """One straight piece inside one triangle of the base surface."""

    __slots__ = ("triangle", "offset", "entry", "exit")

    def __init__(self, triangle, offset, entry, exit):
        self.triangle = triangle
        self.offset = offset  # development offset of the triangle's corner 0
        self.entry = entry    # developed entry point of this piece
        self.exit = exit


class TraceResult:
    """Outcome of tracing a straight segment from a cone point."""

    __slots__ = ("start_ray", "steps", "end_kind", "end_vertex", "end_point",
                 "end_back_ray", "crossings")

    def __init__(self, start_ray, steps, end_kind, end_vertex, end_point,
                 end_back_ray, crossings):
        self.start_ray = start_ray
        self.steps = steps
        self.end_kind = end_kind      # 'vertex' | 'interior' | 'cap'
        self.end_vertex = end_vertex
        self.end_point = end_point    # developed endpoint (start at origin)
        self.end_back_ray = end_back_ray
        self.crossings = crossings    # (unoriented edge, param, ray parameter)

    @property
    def displacement(self):
        return self.end_point


class Tracer:
    """Develops straight segments through a positive-area triangulation."""

    def __init__(self, surface):
        self.surface = surface
        tri = surface.triangulation
        for ti in range(tri.num_triangles):
            if surface.triangle_area2(ti) <= 0:
                raise IncompatibleReference(
                    "tracer requires strictly positive triangle areas"
                )
        self._fans = {}

    def fan(self, vertex):
        if vertex not in self._fans:
            self._fans[vertex] = Fan(self.surface, vertex)
        return self._fans[vertex]

    def corners(self, ti, offset):
        t = self.surface.triangulation.triangles[ti]
        c = [offset]
        c.append(vadd(c[-1], self.surface.period(t[0])))
        c.append(vadd(c[-1], self.surface.period(t[1])))
        return c

    def neighbor_offset(self, ti, offset, i):
        """Placement of the triangle across side i of placement (ti, offset)."""
        tri = self.surface.triangulation
        s = tri.triangles[ti][i]
        cs = self.corners(ti, offset)
        b = cs[(i + 1) % 3]
        nti, ni = tri._slot[-s]
        nt = tri.triangles[nti]
        walk = (ZERO, ZERO)
        for k in range(ni):
            walk = vadd(walk, self.surface.period(nt[k]))
        return nti, vsub(b, walk)

    def trace_ray(self, start_ray, target=None, linf_cap=None, budget=100000):
        """Trace the straight line from the vertex of start_ray.

        With `target` set (a displacement vector aligned with the ray), the
        trace stops at exactly that displacement and reports whether it ends
        on a singularity ('vertex'), inside a triangle or on an open edge
        ('interior'); the trace also stops early at any singularity passed on
        the way.  Without a target it runs until a singularity or until the
        L-infinity displacement exceeds linf_cap ('cap').
        """
        tri = self.surface.triangulation
        d = start_ray.direction
        if target is not None:
            if not same_direction(d, target):
                raise ValueError("target must align with the ray direction")
            t_par = _param_along(d, target)
        else:
            t_par = None
        ti, i0 = tri._slot[start_ray.sector]
        cs0 = self.corners(ti, (ZERO, ZERO))
        offset = vneg(cs0[i0])
        s_cur = ZERO
        point = (ZERO, ZERO)
        steps = []
        crossings = []
        for _ in range(budget):
            cs = self.corners(ti, offset)
            t = tri.triangles[ti]
            # vertex landing inside this placement (target case): the target
            # may be a corner of the current triangle
            if t_par is not None:
                for k in range(3):
                    if cs[k] == target:
                        steps.append(TraceStep(ti, offset, point, target))
                        back = self._incoming_ray(ti, k, d)
                        return TraceResult(start_ray, steps, "vertex",
                                           tri.tail(t[k]), target, back,
                                           crossings)
            # exit through a side: solve s*d = a + u*(b-a) globally, s > s_cur
            best = None
            for i in range(3):
                a, b = cs[i], cs[(i + 1) % 3]
                ab = vsub(b, a)
                denom = cross(d, ab)
                if denom == 0:
                    continue
                s_par = cross(a, ab) / denom
                u_par = cross(a, d) / denom
                if s_par <= s_cur or u_par < 0 or u_par > 1:
                    continue
                if best is None or s_par < best[0]:
                    best = (s_par, i, u_par)
            if best is None:
                raise NonTermination("ray failed to exit a triangle")
            s_par, i, u_par = best
            if t_par is not None and t_par <= s_par:
                end_pt = target
                steps.append(TraceStep(ti, offset, point, end_pt))
                return TraceResult(start_ray, steps, "interior", None, end_pt,
                                   None, crossings)
            exit_pt = smul(s_par, d)
            side = t[i]
            if u_par == 0 or u_par == 1:
                k = (i + 1) % 3 if u_par == 1 else i
                steps.append(TraceStep(ti, offset, point, exit_pt))
                back = self._incoming_ray(ti, k, d)
                return TraceResult(start_ray, steps, "vertex",
                                   tri.tail(t[k]), exit_pt, back, crossings)
            steps.append(TraceStep(ti, offset, point, exit_pt))
            param = u_par if side > 0 else ONE - u_par
            crossings.append((abs(side), param, s_par))
            if linf_cap is not None and t_par is None:
                if max(abs(exit_pt[0]), abs(exit_pt[1])) > linf_cap:
                    return TraceResult(start_ray, steps, "cap", None, exit_pt,
                                       None, crossings)
            ti, offset = self.neighbor_offset(ti, offset, i)
            point = exit_pt
            s_cur = s_par
        raise NonTermination("trace exceeded its step budget")

    def _incoming_ray(self, ti, corner_index, d):
        """Canonical ray at the landing vertex pointing back along the
        segment; the segment arrives through the corner (ti, corner_index),
        so the back direction lies in that corner or on its upper boundary."""
        tri = self.surface.triangulation
        s = tri.triangles[ti][corner_index]
        fan = self.fan(tri.tail(s))
        return fan.locate_from(s, vneg(d), max_corners=1)

    def straight_arc(self, start_ray, displacement):
        """Trace a straight saddle connection with the given displacement;
        raises if the segment passes through or misses singularities."""
        res = self.trace_ray(start_ray, target=displacement)
        if res.end_kind != "vertex" or res.end_point != displacement:
            raise IncompatibleReference(
                "displacement does not define a straight saddle connection"
            )
        return res


def _param_along(d, target):
    if d[0] != 0:
        return target[0] / d[0]
    return target[1] / d[1]


def saddle_connections_up_to(surface, cap, budget=200000):
    """All saddle connections of L-infinity length <= cap.

    Develops a cap-sized window around every corner sector and verifies every
    candidate displacement with an honest trace.  Returns a deterministic
    list of (start_vertex, TraceResult).
    """
    tracer = Tracer(surface)
    tri = surface.triangulation
    out = []
    for cyc in tri.vertex_cycles():
        for s0 in cyc:
            v = tri.tail(s0)
            for disp in _sector_candidates(tracer, s0, cap, budget):
                ray = Ray(s0, disp)
                res = tracer.trace_ray(ray, target=disp)
                if res.end_kind == "vertex" and res.end_point == disp:
                    out.append((v, res))
    out.sort(key=lambda r: (r[0], _hx(r[1].start_ray.sector),
                            r[1].start_ray.direction))
    return out


def _hx(s):
    return 2 * (abs(s) - 1) + (1 if s < 0 else 0)


def _sector_candidates(tracer, s0, cap, budget):
    """Developed singularity positions inside the sector of s0 and the cap
    window; candidates only, each later verified by tracing."""
    surface = tracer.surface
    tri = surface.triangulation
    ti, i0 = tri._slot[s0]
    cs0 = tracer.corners(ti, (ZERO, ZERO))
    offset0 = vneg(cs0[i0])
    u = surface.period(s0)
    w = surface.period(-tri.prev_edge(s0))
    hits = set()
    seen = {(ti, offset0)}
    queue = deque([(ti, offset0)])
    steps = 0
    while queue:
        steps += 1
        if steps > budget:
            raise NonTermination("saddle search development budget exceeded")
        cti, coff = queue.popleft()
        cs = tracer.corners(cti, coff)
        for k in range(3):
            p = cs[k]
            if p == (ZERO, ZERO):
                continue
            if max(abs(p[0]), abs(p[1])) <= cap and _in_sector(u, w, p):
                hits.add(p)
        for k in range(3):
            a, b = cs[k], cs[(k + 1) % 3]
            if not _segment_meets_box(a, b, cap):
                continue
            key = tracer.neighbor_offset(cti, coff, k)
            if key not in seen:
                seen.add(key)
                queue.append(key)
    return sorted(hits)


def _in_sector(u, w, p):
    """Whether direction p lies in the half-open sector [u, w), angle < pi."""
    if same_direction(u, p):
        return True
    return cross(u, p) > 0 and cross(p, w) > 0


def _segment_meets_box(a, b, cap):
    """Whether the open segment (a,b) meets the open box (-cap, cap)^2."""
    t_lo, t_hi = ZERO, ONE
    for i in range(2):
        d = b[i] - a[i]
        if d == 0:
            if not (-cap < a[i] < cap):
                return False
            continue
        t1 = (-cap - a[i]) / d
        t2 = (cap - a[i]) / d
        if t1 > t2:
            t1, t2 = t2, t1
        t_lo = max(t_lo, t1)
        t_hi = min(t_hi, t2)
    return t_lo < t_hi
