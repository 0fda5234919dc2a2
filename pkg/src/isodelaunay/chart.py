"""Period coordinate charts, linear forms, and flip transports.

A chart is the edge-period coordinate system of a base triangulation:
ambient coordinates (Re z_e, Im z_e) per edge, constrained by the triangle
closure equalities.  Because closures act on real and imaginary parts
separately, the closure subspace is two copies of the complex solution
space; systems are solved in that reduced parametrization.
"""

from .rational import QQ, ZERO, ONE
from .errors import ChartMismatch, InvalidPath


def rref(rows, width):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = ONE / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def matrix_rank(rows, width):
    return len(rref(rows, width)[0])


def idx(edge, part):
    """Ambient coordinate index of (edge, re|im); part 0 is re, 1 is im."""
    return 2 * (edge - 1) + part


class LinearForm:
    """Rational linear form over a chart's ambient (edge, re|im) coordinates."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs, const=ZERO):
        self.coeffs = tuple(coeffs)
        self.const = const

    def evaluate(self, x):
        total = self.const
        for c, v in zip(self.coeffs, x):
            if c != 0 and v != 0:
                total += c * v
        return total

    def scaled(self, factor):
        return LinearForm([factor * c for c in self.coeffs], factor * self.const)

    def minus(self, other):
        return LinearForm(
            [a - b for a, b in zip(self.coeffs, other.coeffs)],
            self.const - other.const,
        )

    def plus(self, other):
        return LinearForm(
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            self.const + other.const,
        )

    def is_zero(self):
        return self.const == 0 and all(c == 0 for c in self.coeffs)

    def key(self):
        return (self.coeffs, self.const)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        terms = [
            f"{c}*x{i}" for i, c in enumerate(self.coeffs) if c != 0
        ]
        if self.const != 0 or not terms:
            terms.append(str(self.const))
        return " + ".join(terms)


class Transport:
    """Integer expression of a derived triangulation's edge periods in terms
    of the base chart's edge periods.

    rows[e-1] gives edge e of the derived triangulation as an integer
    combination of base edges; the combination acts identically on real and
    imaginary parts (chart changes lie in GL(Z)).
    """

    __slots__ = ("rows", "base_edges")

    def __init__(self, rows, base_edges):
        self.rows = tuple(tuple(int(c) for c in r) for r in rows)
        self.base_edges = base_edges
        if any(len(r) != base_edges for r in self.rows):
            raise InvalidPath("transport row width mismatch")

    @classmethod
    def identity(cls, num_edges):
        return cls(
            [[1 if i == j else 0 for j in range(num_edges)] for i in range(num_edges)],
            num_edges,
        )

    def row(self, s):
        r = self.rows[abs(s) - 1]
        return r if s > 0 else tuple(-c for c in r)

    def after_flip(self, edge, quad):
        """Transport after flipping `edge`; the new diagonal is sides[1]+sides[2]."""
        a, b, c, d = quad
        new = list(self.rows)
        new[edge - 1] = tuple(
            x + y for x, y in zip(self.row(b), self.row(c))
        )
        return Transport(new, self.base_edges)

    def form(self, s, part, factor=ONE):
        """The linear form factor * (part of the period of oriented edge s)."""
        coeffs = [ZERO] * (2 * self.base_edges)
        for j, cj in enumerate(self.row(s), start=1):
            if cj != 0:
                coeffs[idx(j, part)] = factor * cj
        return LinearForm(coeffs)

    def combo_form(self, signed_edges, part, factor=ONE):
        coeffs = [ZERO] * (2 * self.base_edges)
        for s in signed_edges:
            for j, cj in enumerate(self.row(s), start=1):
                if cj != 0:
                    coeffs[idx(j, part)] += factor * cj
        return LinearForm(coeffs)

    def period(self, x, s):
        """Evaluate the complex period of oriented edge s at ambient point x."""
        re_v = ZERO
        im_v = ZERO
        for j, cj in enumerate(self.row(s), start=1):
            if cj != 0:
                re_v += cj * x[idx(j, 0)]
                im_v += cj * x[idx(j, 1)]
        return (re_v, im_v)

    def periods(self, x):
        return tuple(self.period(x, e) for e in range(1, len(self.rows) + 1))

    def __eq__(self, other):
        return isinstance(other, Transport) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)


class Chart:
    """Edge-period coordinates of a base triangulation with closure reduced."""

    __slots__ = ("triangulation", "num_edges", "closure_forms", "_basis",
                 "_free_cols", "dim")

    def __init__(self, triangulation):
        self.triangulation = triangulation
        ne = triangulation.num_edges
        self.num_edges = ne
        complex_rows = []
        for tri in triangulation.triangles:
            row = [ZERO] * ne
            for s in tri:
                row[abs(s) - 1] += ONE if s > 0 else -ONE
            complex_rows.append(row)
        reduced, pivots = rref(complex_rows, ne)
        free = [c for c in range(ne) if c not in pivots]
        # basis vector per free column: identity on free slots, pivot slots
        # filled by back substitution
        basis = []
        for fc in free:
            vec = [ZERO] * ne
            vec[fc] = ONE
            for prow, pc in zip(reduced, pivots):
                vec[pc] = -prow[fc]
            basis.append(tuple(vec))
        self._basis = tuple(basis)
        self._free_cols = tuple(free)
        self.dim = 2 * len(basis)
        forms = []
        for row in complex_rows:
            for part in (0, 1):
                coeffs = [ZERO] * (2 * ne)
                for j, cj in enumerate(row, start=1):
                    if cj != 0:
                        coeffs[idx(j, part)] = cj
                forms.append(LinearForm(coeffs))
        self.closure_forms = tuple(forms)

    @property
    def ambient_dim(self):
        return 2 * self.num_edges

    def reduce_form(self, form):
        """Compose an ambient form with the closure parametrization.

        Parameters t = (t_re, t_im) of length dim; x_re = B t_re per edge.
        """
        k = len(self._basis)
        out = [ZERO] * (2 * k)
        for i, vec in enumerate(self._basis):
            acc_re = ZERO
            acc_im = ZERO
            for j in range(self.num_edges):
                vj = vec[j]
                if vj == 0:
                    continue
                cre = form.coeffs[idx(j + 1, 0)]
                cim = form.coeffs[idx(j + 1, 1)]
                if cre != 0:
                    acc_re += cre * vj
                if cim != 0:
                    acc_im += cim * vj
            out[i] = acc_re
            out[k + i] = acc_im
        return tuple(out), form.const

    def lift(self, t):
        """Ambient point from reduced parameters."""
        k = len(self._basis)
        x = [ZERO] * (2 * self.num_edges)
        for i, vec in enumerate(self._basis):
            tre, tim = t[i], t[k + i]
            if tre == 0 and tim == 0:
                continue
            for j in range(self.num_edges):
                vj = vec[j]
                if vj != 0:
                    x[idx(j + 1, 0)] += vj * tre
                    x[idx(j + 1, 1)] += vj * tim
        return tuple(x)

    def reduce_point(self, x):
        """Parameters of an ambient point satisfying the closures."""
        for f in self.closure_forms:
            if f.evaluate(x) != 0:
                raise ChartMismatch("point violates closure equalities")
        k = len(self._basis)
        t = [ZERO] * (2 * k)
        for i, fc in enumerate(self._free_cols):
            t[i] = x[idx(fc + 1, 0)]
            t[k + i] = x[idx(fc + 1, 1)]
        return tuple(t)

    def point_of_surface(self, surface):
        if surface.triangulation.num_edges != self.num_edges:
            raise ChartMismatch("edge count mismatch")
        x = []
        for re_v, im_v in surface.periods:
            x.extend((re_v, im_v))
        return tuple(x)
