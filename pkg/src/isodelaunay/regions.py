"""Exact linear systems cutting out isodelaunay region polytopes.

The quadrilateral condition max(|Re G|, |Im G|) > max(l1, l2) is encoded by
a four-way case split on which signed component of the other diagonal G
dominates; each branch is a conjunction of linear inequalities, the union of
the branches is exactly the piecewise-linear condition, and distinct-sign
branches exclude each other through their strict sign constraint.  A region
system is the product of these per-quadrilateral splits over the veering
cone; the closed variant keeps only the cases whose strict version is
feasible, which makes its union exactly the closure of the open region.
"""

from .rational import QQ, ZERO, ONE
from .errors import Infeasible, NotVeering
from .linprog import EQ, GE, INFEASIBLE, OPTIMAL, UNBOUNDED, solve_max
from .chart import LinearForm, matrix_rank
from .delaunay import is_veering, quad_set


class LinearSystem:
    """Equalities, strict and nonstrict inequalities over one chart."""

    __slots__ = ("chart", "equalities", "strict", "nonstrict")

    def __init__(self, chart, equalities=(), strict=(), nonstrict=()):
        self.chart = chart
        self.equalities = tuple(equalities)
        self.strict = tuple(strict)
        self.nonstrict = tuple(nonstrict)

    def closed(self):
        return LinearSystem(
            self.chart, self.equalities, (), self.nonstrict + self.strict
        )

    def merged(self, other):
        if other.chart is not self.chart:
            raise_chart_mismatch()
        return LinearSystem(
            self.chart,
            self.equalities + other.equalities,
            self.strict + other.strict,
            self.nonstrict + other.nonstrict,
        )

    def with_equalities(self, extra):
        return LinearSystem(
            self.chart, self.equalities + tuple(extra), self.strict, self.nonstrict
        )

    def contains_point(self, x):
        return (
            all(f.evaluate(x) == 0 for f in self.equalities)
            and all(f.evaluate(x) > 0 for f in self.strict)
            and all(f.evaluate(x) >= 0 for f in self.nonstrict)
        )

    def dump(self):
        lines = []
        for f in self.equalities:
            lines.append(f"= : {f}")
        for f in self.strict:
            lines.append(f"> : {f}")
        for f in self.nonstrict:
            lines.append(f">= : {f}")
        return "\n".join(lines)


def raise_chart_mismatch():
    from .errors import ChartMismatch

    raise ChartMismatch("systems live on different charts")


class FeasibilityCertificate:
    """Outcome of an exact feasibility query.

    feasible: carries an ambient witness point satisfying every constraint.
    infeasible: carries Farkas-style multipliers (when produced by the LP)
    or a named structural reason (Z0 containment, empty case list).
    """

    __slots__ = ("feasible", "witness", "reason", "detail", "case")

    def __init__(self, feasible, witness=None, reason=None, detail=None, case=None):
        self.feasible = feasible
        self.witness = witness
        self.reason = reason
        self.detail = detail
        self.case = case

    def __bool__(self):
        return self.feasible

    def __repr__(self):
        if self.feasible:
            return "FeasibilityCertificate(feasible)"
        return f"FeasibilityCertificate(infeasible: {self.reason})"


def _lp_constraints(system, slack=False):
    """Reduce a system to LP constraints over chart parameters (+ slack)."""
    chart = system.chart
    dim = chart.dim
    extra = 1 if slack else 0
    cons = []
    for f in system.equalities:
        coeffs, const = chart.reduce_form(f)
        cons.append((tuple(coeffs) + (ZERO,) * extra, const, EQ))
    for f in system.nonstrict:
        coeffs, const = chart.reduce_form(f)
        cons.append((tuple(coeffs) + (ZERO,) * extra, const, GE))
    for f in system.strict:
        coeffs, const = chart.reduce_form(f)
        if slack:
            cons.append((tuple(coeffs) + (QQ(-1),), const, GE))
        else:
            cons.append((tuple(coeffs), const, GE))
    return cons, dim + extra


def strict_feasible(system):
    """Exact strict feasibility via slack maximization (s <= 1 bounded).

    Feasible iff the optimum slack is positive; the witness is the optimal
    point, which satisfies every strict inequality by at least the optimum.
    """
    if isinstance(system, RegionSystem):
        return system.strict_feasible()
    chart = system.chart
    cons, nv = _lp_constraints(system, slack=True)
    cons.append(((ZERO,) * (nv - 1) + (QQ(-1),), ONE, GE))  # s <= 1
    obj = [ZERO] * nv
    obj[nv - 1] = ONE
    res = solve_max(nv, obj, cons)
    if res.status == INFEASIBLE:
        return FeasibilityCertificate(
            False, reason="nonstrict-core-infeasible", detail=res.farkas
        )
    assert res.status == OPTIMAL
    if res.value <= 0:
        return FeasibilityCertificate(
            False, reason="no-strict-point", detail=(res.value, res.dual)
        )
    x = chart.lift(res.x[:-1])
    assert system.contains_point(x), "strict witness failed substitution"
    return FeasibilityCertificate(True, witness=x)


def maximize_form(system, form):
    """Maximize an ambient linear form over a closed system; exact.

    Returns (status, value, ambient witness).  When unbounded, the witness
    is a concrete feasible point where the form exceeds 1, obtained by
    walking far enough along the recession ray.
    """
    chart = system.chart
    cons, nv = _lp_constraints(system, slack=False)
    obj, const = chart.reduce_form(form)
    res = solve_max(nv, list(obj), cons)
    if res.status == INFEASIBLE:
        raise Infeasible("maximize_form on an infeasible system")
    if res.status == UNBOUNDED:
        base_val = sum((c * v for c, v in zip(obj, res.x)), ZERO) + const
        ray_val = sum((c * v for c, v in zip(obj, res.ray)), ZERO)
        assert ray_val > 0
        lam = max(ONE, (ONE - base_val) / ray_val + ONE)
        point = tuple(b + lam * r for b, r in zip(res.x, res.ray))
        return UNBOUNDED, None, chart.lift(point)
    return OPTIMAL, res.value + const, chart.lift(res.x)


def relative_interior_point(system):
    """Point strictly inside all non-implicit constraints, plus affine dim.

    Implicit equalities are nonstrict inequalities whose maximum over the
    solution set is zero; the affine dimension is the chart dimension minus
    the rank of all equalities, implicit ones included.
    """
    base = LinearSystem(
        system.chart,
        system.equalities,
        (),
        system.nonstrict + system.strict,
    )
    cons, nv = _lp_constraints(base, slack=False)
    probe = solve_max(nv, [ZERO] * nv, cons)
    if probe.status == INFEASIBLE:
        raise Infeasible("relative_interior_point on empty system")
    implicit = []
    flexible = []
    for f in base.nonstrict:
        status, value, _ = maximize_form(base, f)
        if status == OPTIMAL and value == 0:
            implicit.append(f)
        else:
            flexible.append(f)
    interior_sys = LinearSystem(
        system.chart, base.equalities + tuple(implicit), tuple(flexible), ()
    )
    if flexible:
        cert = strict_feasible(interior_sys)
        assert cert.feasible, "implicit-equality split left no interior"
        point = cert.witness
    else:
        point = system.chart.lift(probe.x)
    eq_rows = [system.chart.reduce_form(f)[0] for f in base.equalities]
    eq_rows += [system.chart.reduce_form(f)[0] for f in implicit]
    dim = system.chart.dim - matrix_rank(eq_rows, system.chart.dim)
    return point, dim


class RegionSystem:
    """Disjunctive system for one Delaunay datum over a chart.

    Branch (component, sign) of a quadrilateral asserts that the signed
    component dominates the other diagonal and exceeds both resolved
    absolute values of the shared edge.
    """

    def __init__(self, chart, data, transport):
        if not is_veering(data):
            raise NotVeering("region systems require veering data")
        self.chart = chart
        self.data = data
        self.transport = transport
        ne = data.triangulation.num_edges
        veering = []
        for e in range(1, ne + 1):
            sre, sim = data.signs[e - 1]
            veering.append(transport.form(e, 0, factor=QQ(sre)))
            veering.append(transport.form(e, 1, factor=QQ(sim)))
        self.veering_forms = tuple(veering)
        self.quads = quad_set(data)
        branch_table = []
        for quad in self.quads:
            e = quad.edge
            sre, sim = data.signs[e - 1]
            l1 = transport.form(e, 0, factor=QQ(sre))
            l2 = transport.form(e, 1, factor=QQ(sim))
            b, c = quad.diagonal_parts
            branches = []
            for part, sgn in ((0, 1), (0, -1), (1, 1), (1, -1)):
                comp = transport.combo_form((b, c), part, factor=QQ(sgn))
                other = transport.combo_form((b, c), 1 - part)
                strict = (comp, comp.minus(l1), comp.minus(l2))
                nonstrict = (comp.minus(other), comp.plus(other))
                branches.append((strict, nonstrict))
            branch_table.append(tuple(branches))
        self.branch_table = tuple(branch_table)
        self._feasible_selections = None
        self._strict_cert = None

    # -- case assembly -------------------------------------------------------

    def case_system(self, selection, closed=False):
        """LinearSystem for one branch choice per quadrilateral."""
        strict = list(self.veering_forms)
        nonstrict = []
        for quad_branches, pick in zip(self.branch_table, selection):
            st, ns = quad_branches[pick]
            strict.extend(st)
            nonstrict.extend(ns)
        sys = LinearSystem(self.chart, (), tuple(strict), tuple(nonstrict))
        return sys.closed() if closed else sys

    def _partial_system(self, selection):
        strict = list(self.veering_forms)
        nonstrict = []
        for quad_branches, pick in zip(self.branch_table, selection):
            st, ns = quad_branches[pick]
            strict.extend(st)
            nonstrict.extend(ns)
        return LinearSystem(self.chart, (), tuple(strict), tuple(nonstrict))

    def _dfs_cases(self, first_only):
        """Depth-first enumeration of strictly feasible branch selections."""
        out = []

        def rec(prefix):
            cert = strict_feasible(self._partial_system(prefix))
            if not cert.feasible:
                return False
            if len(prefix) == len(self.branch_table):
                out.append((tuple(prefix), cert))
                return first_only
            for pick in range(4):
                if rec(prefix + [pick]):
                    return True
            return False

        rec([])
        return out

    def strict_feasible(self):
        """First strictly feasible case in deterministic order."""
        if self._strict_cert is not None:
            return self._strict_cert
        found = self._dfs_cases(first_only=True)
        if found:
            selection, cert = found[0]
            cert = FeasibilityCertificate(
                True, witness=cert.witness, case=selection
            )
        else:
            cert = FeasibilityCertificate(False, reason="all-cases-infeasible")
        self._strict_cert = cert
        return cert

    def feasible_selections(self):
        """All strictly feasible branch selections, cached."""
        if self._feasible_selections is None:
            found = self._dfs_cases(first_only=False)
            self._feasible_selections = tuple(sel for sel, _ in found)
        return self._feasible_selections

    def closed_cases(self):
        """Closures of the nonempty strict cases; their union is the closed
        region (strictly infeasible cases must be dropped, or their nonstrict
        versions could contribute spurious low-dimensional pieces)."""
        return [
            self.case_system(sel, closed=True) for sel in self.feasible_selections()
        ]

    # -- point membership ----------------------------------------------------

    def contains_point_strict(self, x):
        """Membership in the open region via the disjunctive encoding."""
        if not all(f.evaluate(x) > 0 for f in self.veering_forms):
            return False
        for quad_branches in self.branch_table:
            hit = False
            for st, ns in quad_branches:
                if all(f.evaluate(x) > 0 for f in st) and all(
                    f.evaluate(x) >= 0 for f in ns
                ):
                    hit = True
                    break
            if not hit:
                return False
        return True

    def contains_point_closed(self, x):
        """Membership in the closure: some feasible case holds nonstrictly."""
        return any(
            case.contains_point(x) for case in self.closed_cases()
        )

    def quad_comparisons_hold(self, x, strict=True):
        """Direct evaluation of the L-infinity comparisons at a point."""
        for quad, quad_branches in zip(self.quads, self.branch_table):
            e = quad.edge
            gre, gim = self.transport.period(x, e)
            b, c = quad.diagonal_parts
            dre1, dim1 = self.transport.period(x, b)
            dre2, dim2 = self.transport.period(x, c)
            gamma = max(abs(gre), abs(gim))
            diag = max(abs(dre1 + dre2), abs(dim1 + dim2))
            if strict and not gamma < diag:
                return False
            if not strict and not gamma <= diag:
                return False
        return True

    def veering_holds(self, x, strict=True):
        if strict:
            return all(f.evaluate(x) > 0 for f in self.veering_forms)
        return all(f.evaluate(x) >= 0 for f in self.veering_forms)

    def z0_excluded(self, x):
        """No edge period of the datum vanishes at x."""
        for e in range(1, self.data.triangulation.num_edges + 1):
            if self.transport.period(x, e) == (ZERO, ZERO):
                return False
        return True

    def region_dimension(self):
        """Affine dimension of the closed region: max over feasible cases."""
        best = -1
        for case in self.closed_cases():
            _, dim = relative_interior_point(case)
            best = max(best, dim)
            if best == self.chart.dim:
                break
        if best < 0:
            raise Infeasible("region has no feasible case")
        return best


def region_system(data, chart, transport):
    """Disjunctive strict system for P-open and its closed variant."""
    return RegionSystem(chart, data, transport)


class RegionIntersection:
    """Intersection of closed regions as a union of case-product pieces."""

    def __init__(self, regions):
        if not regions:
            raise ValueError("need at least one region")
        chart = regions[0].chart
        for r in regions:
            if r.chart is not chart:
                raise_chart_mismatch()
        self.regions = list(regions)
        self.chart = chart
        self._case_lists = [r.closed_cases() for r in regions]
        self._merged_cache = {}
        self.feasible_combos = []
        if all(self._case_lists):
            self._enumerate()

    def merged(self, combo):
        if combo not in self._merged_cache:
            sys = self._case_lists[0][combo[0]]
            for ri in range(1, len(combo)):
                sys = sys.merged(self._case_lists[ri][combo[ri]])
            self._merged_cache[combo] = sys
        return self._merged_cache[combo]

    def _probe(self, sys):
        cons, nv = _lp_constraints(sys, slack=False)
        return solve_max(nv, [ZERO] * nv, cons).status != INFEASIBLE

    def _enumerate(self):
        def rec(prefix):
            if prefix and not self._probe(self.merged(prefix)):
                return
            if len(prefix) == len(self._case_lists):
                self.feasible_combos.append(prefix)
                return
            for pick in range(len(self._case_lists[len(prefix)])):
                rec(prefix + (pick,))

        rec(())

    def dimension(self):
        """Affine dimension of the (convex) intersection: max over pieces."""
        best = -1
        for combo in self.feasible_combos:
            _, dim = relative_interior_point(self.merged(combo))
            best = max(best, dim)
        return best

    def _edge_escape_witness(self, region, e):
        """Point of some piece where edge e has nonzero period, or None."""
        for combo in self.feasible_combos:
            sys = self.merged(combo)
            for part in (0, 1):
                for sgn in (ONE, -ONE):
                    form = region.transport.form(e, part, factor=sgn)
                    status, value, pt = maximize_form(sys, form)
                    if status == UNBOUNDED or value > 0:
                        return pt
        return None

    def _vanishing_edges(self, x):
        out = []
        for r in self.regions:
            for e in range(1, r.data.triangulation.num_edges + 1):
                if r.transport.period(x, e) == (ZERO, ZERO):
                    out.append((id(r), r, e))
        return out

    def certificate(self):
        """Feasibility of the intersection minus Z0, with an exact witness.

        The intersection K of the closed regions is convex; it meets the
        region set (closures minus Z0) iff K is nonempty and not contained in
        any single {z_gamma = 0}: a convex set lies in a finite union of
        subspaces only by lying in one member.
        """
        if any(not cl for cl in self._case_lists):
            return FeasibilityCertificate(False, reason="empty-region")
        if not self.feasible_combos:
            return FeasibilityCertificate(
                False, reason="closed-intersection-empty"
            )
        combo0 = self.feasible_combos[0]
        point, _ = relative_interior_point(self.merged(combo0))
        guard = 0
        while True:
            bad = self._vanishing_edges(point)
            if not bad:
                break
            guard += 1
            assert guard <= 64, "witness combination failed to escape Z0"
            _, region, e = bad[0]
            other = self._edge_escape_witness(region, e)
            if other is None:
                return FeasibilityCertificate(
                    False, reason="contained-in-z0", detail=(e,)
                )
            # each vanishing period is linear along the segment, so all but
            # finitely many mixing parameters strictly reduce the bad set;
            # the mix must stay inside the convex intersection K
            for denom in (2, 3, 5, 7, 11, 13):
                t = QQ(1, denom)
                cand = tuple((1 - t) * a + t * b for a, b in zip(point, other))
                if len(self._vanishing_edges(cand)) < len(bad):
                    point = cand
                    break
            else:
                raise AssertionError("could not perturb witness off Z0")
        return FeasibilityCertificate(
            True, witness=point, case=self.feasible_combos[0]
        )


def nonempty_region_intersection(regions):
    """Feasibility certificate for the intersection of closed regions with
    the Z0 locus removed (the D_sigma test)."""
    return RegionIntersection(regions).certificate()


def contains_region(outer, inner_cases):
    """Whether every point of the inner system(s) satisfies the outer one.

    outer: a closed LinearSystem; inner_cases: a LinearSystem or list of
    LinearSystems (e.g. the closed cases of a region).  Decided constraint
    by constraint with exact LPs.
    """
    if isinstance(inner_cases, LinearSystem):
        inner_cases = [inner_cases]
    for inner in inner_cases:
        if inner.chart is not outer.chart:
            raise_chart_mismatch()
        cons, nv = _lp_constraints(inner, slack=False)
        probe = solve_max(nv, [ZERO] * nv, cons)
        if probe.status == INFEASIBLE:
            continue
        for f in outer.nonstrict + outer.strict:
            status, value, _ = maximize_form(inner, f.scaled(QQ(-1)))
            if status == UNBOUNDED or value > 0:
                return False
        for f in outer.equalities:
            for sgn in (ONE, -ONE):
                status, value, _ = maximize_form(inner, f.scaled(sgn))
                if status == UNBOUNDED or value > 0:
                    return False
    return True
