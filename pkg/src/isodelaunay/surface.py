"""Combinatorial triangulations of (S_g, Sigma) with exact rational periods.

An oriented edge is a nonzero integer s with |s| in 1..E; negating reverses
orientation.  A triangulation is a list of triangles, each a counterclockwise
triple of oriented edges chained head-to-tail, with every oriented edge
occurring in exactly one triangle slot.  Periods are stored per unoriented
edge relative to its positive orientation and satisfy the triangle closure
p(s1) + p(s2) + p(s3) = 0 in every triangle.
"""

from .rational import QQ, ZERO, qq, qstr, sign
from .errors import (
    FlipDegenerate,
    FlipSelfGlued,
    InputError,
    NonPositiveDeterminant,
)


# ---------------------------------------------------------------------------
# planar vector helpers (pairs of rationals)

def vadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def vsub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def vneg(u):
    return (-u[0], -u[1])


def smul(c, u):
    return (c * u[0], c * u[1])


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def mat_apply(m, u):
    """Apply a 2x2 matrix ((a,b),(c,d)) to a column vector."""
    (a, b), (c, d) = m
    return (a * u[0] + b * u[1], c * u[0] + d * u[1])


def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def same_direction(u, v):
    return cross(u, v) == 0 and dot(u, v) > 0


HALF_AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


def axes_in_corner(u, w):
    """Number of the four half-axis directions in the half-open ccw arc [u, w).

    The arc must span an angle in [0, pi]; this is exactly the range of
    Euclidean triangle corners, including degenerate (zero area) ones.
    Summing over all corners around a vertex counts each half-axis once per
    full turn, so the total is 4 * (winding number): the basis of the exact
    cone-angle computation.
    """
    if same_direction(u, w):
        return 0
    c = cross(u, w)
    if c < 0 and not same_direction(u, vneg(w)):
        raise ValueError("corner spans more than pi")
    count = 0
    for d in HALF_AXES:
        if same_direction(u, d):
            count += 1
        elif cross(u, d) > 0 and cross(d, w) > 0:
            count += 1
    return count


def ccw_angle_in_open_arc(u, w, d):
    """Whether direction d lies in the open ccw arc (u, w) of angle < pi."""
    if cross(u, w) <= 0 and not same_direction(vneg(u), w):
        raise ValueError("arc must span an angle in (0, pi]")
    return cross(u, d) > 0 and cross(d, w) > 0


class StratumSignature:
    """Genus and cone-point orders kappa with sum(kappa) = 2g - 2."""

    def __init__(self, genus, orders):
        orders = tuple(int(k) for k in orders)
        if genus < 1 or len(orders) < 1:
            raise InputError("need g >= 1 and at least one marked point")
        if any(k < 0 for k in orders):
            raise InputError("orders must be nonnegative")
        if sum(orders) != 2 * genus - 2:
            raise InputError(
                f"sum(kappa)={sum(orders)} but 2g-2={2 * genus - 2}"
            )
        self.genus = int(genus)
        self.orders = orders

    def __eq__(self, other):
        return (
            isinstance(other, StratumSignature)
            and self.genus == other.genus
            and self.orders == other.orders
        )

    def __hash__(self):
        return hash((self.genus, self.orders))

    def __repr__(self):
        return f"StratumSignature(g={self.genus}, kappa={self.orders})"

    @property
    def dimension(self):
        """Real dimension 4g + 2n - 2 of the stratum in period coordinates."""
        return 4 * self.genus + 2 * len(self.orders) - 2


class Triangulation:
    """Immutable combinatorial triangulation with labeled vertices."""

    __slots__ = ("triangles", "num_edges", "_slot", "_tails", "_vertex_cycles")

    def __init__(self, triangles, tails=None):
        triangles = tuple(tuple(int(s) for s in t) for t in triangles)
        if any(len(t) != 3 for t in triangles):
            raise InputError("every triangle needs exactly 3 oriented edges")
        edges = sorted({abs(s) for t in triangles for s in t})
        ne = len(edges)
        if edges != list(range(1, ne + 1)):
            raise InputError("edge ids must be 1..E with no gaps")
        if 3 * len(triangles) != 2 * ne:
            raise InputError("need 3F = 2E oriented edge slots")
        slot = {}
        for ti, tri in enumerate(triangles):
            for i, s in enumerate(tri):
                if s in slot:
                    raise InputError(f"oriented edge {s} used twice")
                slot[s] = (ti, i)
        for e in range(1, ne + 1):
            if e not in slot or -e not in slot:
                raise InputError(f"edge {e} missing an orientation")
        self.triangles = triangles
        self.num_edges = ne
        self._slot = slot
        if tails is None:
            cycles = self._compute_vertex_cycles()
            tails = [0] * (2 * ne)
            for label, cyc in enumerate(cycles):
                for s in cyc:
                    tails[_hx(s)] = label
            tails = tuple(tails)
        else:
            tails = tuple(tails)
        self._tails = tails
        self._vertex_cycles = None

    # -- elementary navigation ---------------------------------------------

    def next_edge(self, s):
        ti, i = self._slot[s]
        return self.triangles[ti][(i + 1) % 3]

    def prev_edge(self, s):
        ti, i = self._slot[s]
        return self.triangles[ti][(i + 2) % 3]

    def triangle_of(self, s):
        return self._slot[s][0]

    def vertex_rotation(self, s):
        """Next outgoing oriented edge counterclockwise around tail(s)."""
        return -self.prev_edge(s)

    def tail(self, s):
        return self._tails[_hx(s)]

    def head(self, s):
        return self._tails[_hx(-s)]

    def _compute_vertex_cycles(self):
        seen = set()
        cycles = []
        for s in self.oriented_edges():
            if s in seen:
                continue
            cyc = []
            cur = s
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = self.vertex_rotation(cur)
            cycles.append(tuple(cyc))
        cycles.sort(key=lambda c: min(_hx(s) for s in c))
        return cycles

    def vertex_cycles(self):
        """Orbits of outgoing oriented edges under ccw rotation, one per vertex."""
        if self._vertex_cycles is None:
            cycles = self._compute_vertex_cycles()
            cycles.sort(key=lambda c: self._tails[_hx(c[0])])
            self._vertex_cycles = tuple(cycles)
        return self._vertex_cycles

    def oriented_edges(self):
        for e in range(1, self.num_edges + 1):
            yield e
            yield -e

    @property
    def num_triangles(self):
        return len(self.triangles)

    @property
    def num_vertices(self):
        return len(set(self._tails))

    @property
    def genus(self):
        chi = self.num_vertices - self.num_edges + self.num_triangles
        if chi % 2 != 0:
            raise InputError("odd Euler characteristic")
        return (2 - chi) // 2

    def __eq__(self, other):
        return (
            isinstance(other, Triangulation)
            and self.triangles == other.triangles
            and self._tails == other._tails
        )

    def __hash__(self):
        return hash((self.triangles, self._tails))

    def __repr__(self):
        return f"Triangulation({list(self.triangles)})"

    # -- flips ---------------------------------------------------------------

    def flip_quad(self, edge):
        """Sides (a, b, c, d) of the quadrilateral around `edge`, ccw.

        With e = +edge the two triangles are (e, a, b) and (-e, c, d); the
        post-flip diagonal is f = b + c running from head(a) to head(c).
        """
        e = abs(edge)
        tl = self.triangle_of(e)
        tr = self.triangle_of(-e)
        if tl == tr:
            raise FlipSelfGlued(f"edge {e} borders a single triangle")
        a = self.next_edge(e)
        b = self.next_edge(a)
        c = self.next_edge(-e)
        d = self.next_edge(c)
        return a, b, c, d

    def flip(self, edge):
        """Combinatorial diagonal swap; returns (new triangulation, quad)."""
        e = abs(edge)
        a, b, c, d = self.flip_quad(e)
        new_tris = []
        for ti, tri in enumerate(self.triangles):
            if ti == self.triangle_of(e) or ti == self.triangle_of(-e):
                continue
            new_tris.append(tri)
        new_tris.append((e, d, a))
        new_tris.append((-e, b, c))
        tails = list(self._tails)
        tails[_hx(e)] = self.tail(b)   # f runs tail(b) -> tail(d)
        tails[_hx(-e)] = self.tail(d)
        return Triangulation(new_tris, tails=tails), (a, b, c, d)


def _hx(s):
    """Index of an oriented edge in flat arrays: 2(|s|-1) + (s<0)."""
    return 2 * (abs(s) - 1) + (1 if s < 0 else 0)


class Surface:
    """Translation surface: triangulation plus exact periods per edge."""

    __slots__ = ("triangulation", "periods", "_signature")

    def __init__(self, triangulation, periods, check=True, allow_degenerate=False):
        periods = tuple((qq(p[0]), qq(p[1])) for p in periods)
        if len(periods) != triangulation.num_edges:
            raise InputError("one period per edge required")
        self.triangulation = triangulation
        self.periods = periods
        self._signature = None
        if check:
            for ti, tri in enumerate(triangulation.triangles):
                total = (ZERO, ZERO)
                for s in tri:
                    total = vadd(total, self.period(s))
                if total != (ZERO, ZERO):
                    raise InputError(f"triangle {ti} fails closure: sum={total}")
            if not allow_degenerate:
                for ti in range(triangulation.num_triangles):
                    if self.triangle_area2(ti) <= 0:
                        raise InputError(f"triangle {ti} has non-positive area")

    def period(self, s):
        p = self.periods[abs(s) - 1]
        return p if s > 0 else vneg(p)

    def triangle_area2(self, ti):
        """Twice the signed area of triangle ti."""
        s1, s2, _ = self.triangulation.triangles[ti]
        return cross(self.period(s1), self.period(s2))

    def total_area2(self):
        return sum(self.triangle_area2(t) for t in range(self.triangulation.num_triangles))

    def cone_turns(self):
        """Per vertex, the winding number (angle / 2pi) as an exact integer."""
        turns = []
        for cyc in self.triangulation.vertex_cycles():
            crossings = 0
            m = len(cyc)
            for i in range(m):
                u = self.period(cyc[i])
                w = self.period(cyc[(i + 1) % m])
                crossings += axes_in_corner(u, w)
            if crossings % 4 != 0:
                raise InputError(f"vertex winding not an integer: {crossings}/4")
            turns.append(crossings // 4)
        return tuple(turns)

    def signature(self):
        if self._signature is None:
            turns = self.cone_turns()
            self._signature = StratumSignature(
                self.triangulation.genus, tuple(t - 1 for t in turns)
            )
        return self._signature

    def apply_matrix(self, m):
        """Act by a 2x2 rational matrix of positive determinant on all periods."""
        m = ((qq(m[0][0]), qq(m[0][1])), (qq(m[1][0]), qq(m[1][1])))
        if mat_det(m) <= 0:
            raise NonPositiveDeterminant(f"det = {mat_det(m)}")
        return Surface(
            self.triangulation,
            [mat_apply(m, p) for p in self.periods],
            check=False,
        )

    def flip(self, edge):
        """Geometric flip; the new diagonal period is the closure-restoring sum."""
        e = abs(edge)
        a, b, c, d = self.triangulation.flip_quad(e)
        f = vadd(self.period(b), self.period(c))
        if cross(f, self.period(d)) <= 0 or cross(vneg(f), self.period(b)) <= 0:
            raise FlipDegenerate(f"flip of edge {e} creates non-positive area")
        tri2, quad = self.triangulation.flip(e)
        periods = list(self.periods)
        periods[e - 1] = f
        return Surface(tri2, periods, check=False), quad

    def with_periods(self, periods, allow_degenerate=False):
        return Surface(self.triangulation, periods, check=True,
                       allow_degenerate=allow_degenerate)

    def __eq__(self, other):
        return (
            isinstance(other, Surface)
            and self.triangulation == other.triangulation
            and self.periods == other.periods
        )

    def __hash__(self):
        return hash((self.triangulation, self.periods))

    def __repr__(self):
        return f"Surface(E={self.triangulation.num_edges}, g={self.triangulation.genus})"


class ValidationReport:
    """Report-style outcome of validate_surface; never raises."""

    def __init__(self):
        self.closure_failures = []
        self.area_failures = []
        self.cone_angle_failures = []
        self.signature = None

    @property
    def valid(self):
        return not (
            self.closure_failures or self.area_failures or self.cone_angle_failures
        )

    def lines(self):
        out = []
        for ti, total in self.closure_failures:
            out.append(f"closure violation at triangle {ti}: residue {total}")
        for ti, a2 in self.area_failures:
            out.append(f"non-positive area at triangle {ti}: 2*area = {a2}")
        for msg in self.cone_angle_failures:
            out.append(msg)
        if self.valid and self.signature is not None:
            g, orders = self.signature.genus, self.signature.orders
            out.append(f"valid: g={g} kappa={','.join(map(str, orders))}")
        return out


def validate_surface(surface, expected_signature=None):
    """Check closure, areas and cone angles; returns a ValidationReport."""
    report = ValidationReport()
    tri = surface.triangulation
    for ti, t in enumerate(tri.triangles):
        total = (ZERO, ZERO)
        for s in t:
            total = vadd(total, surface.period(s))
        if total != (ZERO, ZERO):
            report.closure_failures.append((ti, total))
    if report.closure_failures:
        return report
    for ti in range(tri.num_triangles):
        a2 = surface.triangle_area2(ti)
        if a2 <= 0:
            report.area_failures.append((ti, a2))
    if report.area_failures:
        return report
    try:
        sig = surface.signature()
    except InputError as exc:
        report.cone_angle_failures.append(str(exc))
        return report
    total_excess = sum(sig.orders)
    if total_excess != 2 * sig.genus - 2:
        report.cone_angle_failures.append(
            f"cone angles sum to {total_excess} != 2g-2 = {2 * sig.genus - 2}"
        )
        return report
    if expected_signature is not None and sig != expected_signature:
        report.cone_angle_failures.append(
            f"signature {sig} does not match declared {expected_signature}"
        )
        return report
    report.signature = sig
    return report


# ---------------------------------------------------------------------------
# surface file format


def parse_surface(text, path="<string>"):
    """Parse the line-oriented surface format.

    header   `stratum g=<int> kappa=<k1,...,kn>` (optional, validated)
    triangle `triangle <id>: <±e1> <±e2> <±e3>`
    edge     `edge <id>: re=<p>/<q> im=<p>/<q>`
    """
    declared = None
    tri_lines = {}
    edge_lines = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "stratum":
                fields = dict(p.split("=", 1) for p in parts[1:])
                declared = StratumSignature(
                    int(fields["g"]),
                    tuple(int(k) for k in fields["kappa"].split(",")),
                )
            elif parts[0] == "triangle":
                tid = int(parts[1].rstrip(":"))
                tri_lines[tid] = tuple(int(p) for p in parts[2:])
            elif parts[0] == "edge":
                eid = int(parts[1].rstrip(":"))
                fields = dict(p.split("=", 1) for p in parts[2:])
                re_v = qq(fields["re"])
                im_v = qq(fields["im"])
                edge_lines[eid] = (re_v, im_v)
            else:
                raise InputError(f"{path}:{ln}: unknown directive {parts[0]!r}")
        except InputError:
            raise
        except (ValueError, KeyError, IndexError, ZeroDivisionError) as exc:
            raise InputError(f"{path}:{ln}: cannot parse {raw.strip()!r} ({exc})")
    if not tri_lines or not edge_lines:
        raise InputError(f"{path}: need at least one triangle and one edge")
    tri_ids = sorted(tri_lines)
    edge_ids = sorted(edge_lines)
    if edge_ids != list(range(1, len(edge_ids) + 1)):
        raise InputError(f"{path}: edge ids must be 1..E")
    triangulation = Triangulation([tri_lines[t] for t in tri_ids])
    surface = Surface(triangulation, [edge_lines[e] for e in edge_ids])
    if declared is not None:
        report = validate_surface(surface, expected_signature=declared)
        if not report.valid:
            raise InputError(f"{path}: {'; '.join(report.lines())}")
    return surface


def format_surface(surface, signature=None):
    lines = []
    if signature is None:
        try:
            signature = surface.signature()
        except InputError:
            signature = None
    if signature is not None:
        kappa = ",".join(str(k) for k in signature.orders)
        lines.append(f"stratum g={signature.genus} kappa={kappa}")
    for ti, tri in enumerate(surface.triangulation.triangles):
        lines.append(f"triangle {ti}: " + " ".join(str(s) for s in tri))
    for e, (re_v, im_v) in enumerate(surface.periods, start=1):
        lines.append(f"edge {e}: re={qstr(re_v)} im={qstr(im_v)}")
    return "\n".join(lines) + "\n"


def load_surface(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_surface(fh.read(), path=str(path))


def save_surface(surface, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_surface(surface))


# ---------------------------------------------------------------------------
# stock examples used across the test-suite and docs


def torus_t1():
    """Genus-1 torus with edges a=(2,1), b=(-1,1), c=(-1,-2)."""
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    return Surface(tri, [(QQ(2), QQ(1)), (QQ(-1), QQ(1)), (QQ(-1), QQ(-2))])


def square_torus():
    """Unit square torus; not L-infinity generic (axis-aligned edges)."""
    tri = Triangulation([(1, 2, 3), (-1, -2, -3)])
    return Surface(tri, [(QQ(1), QQ(0)), (QQ(0), QQ(1)), (QQ(-1), QQ(-1))])


def octagon_surface():
    """Genus-2 surface in H(2): rational convex octagon, opposite sides glued.

    Sides s1..s4 = (1,0), (1,1), (0,1), (-1,1) and their negatives; fan
    triangulation from vertex 0 of the polygon.
    """
    sides = [(QQ(1), QQ(0)), (QQ(1), QQ(1)), (QQ(0), QQ(1)), (QQ(-1), QQ(1))]
    verts = [(ZERO, ZERO)]
    for v in sides + [vneg(s) for s in sides[:3]]:
        verts.append(vadd(verts[-1], v))
    # edges 1..4: the glued side pairs; edges 5..9: fan diagonals 0->v2..0->v6
    periods = list(sides)
    for k in range(2, 7):
        periods.append(verts[k])
    tris = []
    # polygon corners: vertex indices 0..7; side i runs v_{i-1} -> v_i
    # fan triangles: (0, v1, v2), (0, v2, v3), ..., (0, v6, v7)
    # side edge ids: side k (1-based 1..8) has edge id ((k-1) % 4) + 1,
    # oriented along the polygon for k<=4 and against it for k>=5.
    def side_edge(k):
        eid = ((k - 1) % 4) + 1
        return eid if k <= 4 else -eid

    diag = {k: 4 + (k - 1) for k in range(2, 7)}  # vertex k -> edge id
    tris.append((side_edge(1), side_edge(2), -diag[2]))
    for k in range(2, 6):
        tris.append((diag[k], side_edge(k + 1), -diag[k + 1]))
    tris.append((diag[6], side_edge(7), side_edge(8)))
    tri = Triangulation(tris)
    return Surface(tri, periods)
