"""Exact rational linear programming with verifiable certificates.

Dense two-phase simplex over arbitrary-precision rationals with Bland's
anti-cycling rule (index-minimal entering and leaving), so every run is
deterministic and terminates.  Free variables are split into positive and
negative parts; every answer carries multipliers that re-verify by direct
substitution or an exact nonnegative combination.

Constraints are (coeffs, const, rel) with rel in {GE, EQ} meaning
coeffs.x + const >= 0 or == 0.
"""

from .rational import QQ, ZERO, ONE

GE = ">="
EQ = "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPResult:
    __slots__ = ("status", "x", "value", "dual", "farkas", "ray")

    def __init__(self, status, x=None, value=None, dual=None, farkas=None, ray=None):
        self.status = status
        self.x = x
        self.value = value
        self.dual = dual       # per-row multipliers lambda: sum lambda_i row_i = obj
        self.farkas = farkas   # per-row multipliers mu certifying infeasibility
        self.ray = ray

    def __repr__(self):
        return f"LPResult({self.status}, value={self.value})"


def _dot(a, b):
    total = ZERO
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            total += x * y
    return total


def solve_max(num_vars, objective, constraints):
    """Maximize objective.x subject to the constraints; exact simplex.

    Returns an LPResult.  On OPTIMAL, `dual` holds one multiplier per
    constraint with: sum_i dual_i * coeffs_i == objective componentwise,
    dual_i <= 0 on GE rows, and -sum_i dual_i * const_i == value, which
    certifies the optimum from above.  On INFEASIBLE, `farkas` holds
    multipliers mu with mu_i >= 0 on GE rows, sum mu_i coeffs_i == 0 and
    sum mu_i const_i < 0.
    """
    objective = [QQ(c) for c in objective]
    m = len(constraints)
    n_struct = 2 * num_vars + sum(1 for c in constraints if c[2] == GE)

    # rows: sigma_i * (coeffs_i . x) - surplus_i = -sigma_i*const_i with b >= 0
    rows = []
    b = []
    sigma = []
    surplus_col = {}
    col = 2 * num_vars
    for i, (coeffs, const, rel) in enumerate(constraints):
        if rel == GE:
            surplus_col[i] = col
            col += 1
    for i, (coeffs, const, rel) in enumerate(constraints):
        rhs = -QQ(const)
        sg = 1 if rhs >= 0 else -1
        sigma.append(sg)
        row = [ZERO] * (n_struct + m)
        for j, cj in enumerate(coeffs):
            if cj != 0:
                row[2 * j] = sg * QQ(cj)
                row[2 * j + 1] = -sg * QQ(cj)
        if rel == GE:
            row[surplus_col[i]] = QQ(-sg)
        row[n_struct + i] = ONE  # artificial
        rows.append(row)
        b.append(sg * rhs)

    total_cols = n_struct + m
    basis = [n_struct + i for i in range(m)]
    tableau = [list(r) for r in rows]
    rhs = list(b)

    def pivot(pr, pc):
        piv = tableau[pr][pc]
        inv = ONE / piv
        prow = tableau[pr]
        for j in range(total_cols):
            if prow[j] != 0:
                prow[j] *= inv
        rhs[pr] *= inv
        for i in range(m):
            if i == pr:
                continue
            f = tableau[i][pc]
            if f == 0:
                continue
            irow = tableau[i]
            for j in range(total_cols):
                if prow[j] != 0:
                    irow[j] -= f * prow[j]
            rhs[i] -= f * rhs[pr]
        basis[pr] = pc

    def run_simplex(costs, allowed):
        """Bland's rule; returns 'optimal' or ('unbounded', entering col)."""
        while True:
            # reduced costs via duals: pi_k = sum over basic rows of
            # cost(basis) * B^-1, read from artificial columns
            pi = [ZERO] * m
            for i in range(m):
                cb = costs[basis[i]]
                if cb == 0:
                    continue
                for k in range(m):
                    akk = tableau[i][n_struct + k]
                    if akk != 0:
                        pi[k] += cb * akk
            entering = -1
            for j in range(total_cols):
                if j in allowed and j not in basis:
                    rc = costs[j] - _dot_col(pi, rows, j)
                    if rc > 0:
                        entering = j
                        break
            if entering < 0:
                return "optimal", pi
            # ratio test on the CURRENT tableau column for `entering`
            colv = [tableau[i][entering] for i in range(m)]
            leaving = -1
            best = None
            for i in range(m):
                if colv[i] > 0:
                    ratio = rhs[i] / colv[i]
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leaving]
                    ):
                        best = ratio
                        leaving = i
            if leaving < 0:
                return "unbounded", entering
            pivot(leaving, entering)

    def _dot_col(pi, original_rows, j):
        total = ZERO
        for i in range(m):
            a = original_rows[i][j]
            if a != 0 and pi[i] != 0:
                total += pi[i] * a
        return total

    # ---- phase 1: drive artificials to zero
    costs1 = [ZERO] * total_cols
    for k in range(m):
        costs1[n_struct + k] = QQ(-1)
    allowed1 = set(range(total_cols))
    status, info = run_simplex(costs1, allowed1)
    assert status == "optimal"
    infeas = sum((rhs[i] for i in range(m) if basis[i] >= n_struct), ZERO)
    if infeas > 0:
        pi = info
        # mu_i = -sigma_i*pi_i gives mu >= 0 on GE rows, sum mu coeffs = 0
        # componentwise, and sum mu const < 0: an exact Farkas certificate
        mu = [-sigma[i] * pi[i] for i in range(m)]
        _verify_farkas(num_vars, constraints, mu)
        return LPResult(INFEASIBLE, farkas=mu)

    # pivot remaining artificials out of the basis; drop redundant rows
    for i in range(m):
        if basis[i] >= n_struct:
            for j in range(n_struct):
                if tableau[i][j] != 0:
                    pivot(i, j)
                    break

    # ---- phase 2
    costs2 = [ZERO] * total_cols
    for j in range(num_vars):
        costs2[2 * j] = objective[j]
        costs2[2 * j + 1] = -objective[j]
    allowed2 = set(range(n_struct))
    # redundant rows keep their artificial basic at zero; that is harmless
    status, info = run_simplex(costs2, allowed2)

    def extract_x():
        x = [ZERO] * num_vars
        for i in range(m):
            jb = basis[i]
            if jb < 2 * num_vars:
                if jb % 2 == 0:
                    x[jb // 2] += rhs[i]
                else:
                    x[jb // 2] -= rhs[i]
        return tuple(x)

    if status == "unbounded":
        entering = info
        x = extract_x()
        direction = [ZERO] * num_vars
        if entering < 2 * num_vars:
            direction[entering // 2] = ONE if entering % 2 == 0 else -ONE
        for i in range(m):
            jb = basis[i]
            if jb < 2 * num_vars:
                step = -tableau[i][entering]
                if jb % 2 == 0:
                    direction[jb // 2] += step
                else:
                    direction[jb // 2] -= step
        return LPResult(UNBOUNDED, x=x, ray=tuple(direction))

    pi = info
    x = extract_x()
    value = _dot(objective, x)
    lam = [sigma[i] * pi[i] for i in range(m)]
    _verify_optimal(num_vars, objective, constraints, x, value, lam)
    return LPResult(OPTIMAL, x=x, value=value, dual=lam)


def _verify_farkas(num_vars, constraints, mu):
    for (coeffs, const, rel), m_i in zip(constraints, mu):
        if rel == GE:
            assert m_i >= 0, "Farkas multiplier negative on a GE row"
    for j in range(num_vars):
        total = ZERO
        for (coeffs, const, rel), m_i in zip(constraints, mu):
            if m_i != 0 and j < len(coeffs) and coeffs[j] != 0:
                total += m_i * coeffs[j]
        assert total == 0, "Farkas combination does not cancel"
    combo = sum(
        (m_i * QQ(const) for (coeffs, const, rel), m_i in zip(constraints, mu)),
        ZERO,
    )
    assert combo < 0, "Farkas constant not negative"


def _verify_optimal(num_vars, objective, constraints, x, value, lam):
    for (coeffs, const, rel), l_i in zip(constraints, lam):
        v = _dot(coeffs, x) + QQ(const)
        if rel == GE:
            assert v >= 0, "witness violates a GE row"
            assert l_i <= 0, "dual positive on a GE row"
        else:
            assert v == 0, "witness violates an EQ row"
    for j in range(num_vars):
        total = ZERO
        for (coeffs, const, rel), l_i in zip(constraints, lam):
            if l_i != 0 and j < len(coeffs) and coeffs[j] != 0:
                total += l_i * coeffs[j]
        assert total == objective[j], "dual combination misses the objective"
    bound = -sum(
        (l_i * QQ(const) for (coeffs, const, rel), l_i in zip(constraints, lam)),
        ZERO,
    )
    assert bound == value, "dual bound does not match the optimum"
