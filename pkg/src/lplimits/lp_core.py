"""Dense LPs, a bounded-variable tableau simplex, and duality certificates.

The solver is a primal simplex on the bounded-variable standard form: every
structural variable carries finite lower/upper bounds, nonbasic variables sit
at one of their bounds, and a ratio test allows bound flips in addition to
basis exchanges.  Entering and leaving variables are chosen by Bland's rule
(lowest index), which makes every solve deterministic and cycle-free on the
highly degenerate instances this package produces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerances: coefficients in this package are O(1) and mildly conditioned.
FEAS_TOL = 1e-9       # absolute primal feasibility
PIVOT_TOL = 1e-10     # minimum magnitude of an eligible pivot / ratio-test entry
REDCOST_TOL = 1e-9    # reduced-cost threshold for entering candidates
CERT_TOL = 1e-8       # relative duality-gap tolerance for certificates

MINIMIZE = "minimize"
MAXIMIZE = "maximize"
LE, GE, EQ = "<=", ">=", "="

FAMILY_TAGS = ("toy", "balance", "ranking", "secretary", "custom")

_BASIC, _AT_LOWER, _AT_UPPER = 0, 1, 2


class LpInputError(ValueError):
    """Rejected LP input (bad shapes, non-finite entries, bad sizes)."""


@dataclass(frozen=True)
class DenseLp:
    """A finite LP in explicit row form.

    minimize/maximize  objective @ x
    subject to         rows[i] @ x  (relations[i])  rhs[i]
                       var_lower <= x <= var_upper   (all bounds finite)
    """

    sense: str
    objective: np.ndarray
    rows: np.ndarray
    relations: tuple
    rhs: np.ndarray
    var_lower: np.ndarray
    var_upper: np.ndarray
    family_tag: str | None = None

    def __post_init__(self):
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise LpInputError(f"unknown sense {self.sense!r}")
        obj = np.atleast_1d(np.asarray(self.objective, dtype=float))
        n = obj.size
        if n < 1:
            raise LpInputError("LP must have at least one variable")
        rows = np.asarray(self.rows, dtype=float)
        if rows.size == 0:
            rows = rows.reshape(0, n)
        if rows.ndim != 2 or rows.shape[1] != n:
            raise LpInputError(f"rows must be (m, {n}), got {rows.shape}")
        m = rows.shape[0]
        rel = tuple(self.relations)
        rhs = np.atleast_1d(np.asarray(self.rhs, dtype=float)) if m else np.zeros(0)
        if len(rel) != m or rhs.size != m:
            raise LpInputError("relations/rhs length must match row count")
        for r in rel:
            if r not in (LE, GE, EQ):
                raise LpInputError(f"unknown relation {r!r}")
        lo = np.atleast_1d(np.asarray(self.var_lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.var_upper, dtype=float))
        if lo.size != n or hi.size != n:
            raise LpInputError("bound vectors must have length n_vars")
        for name, arr in (("objective", obj), ("rows", rows), ("rhs", rhs),
                          ("var_lower", lo), ("var_upper", hi)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise LpInputError(f"non-finite entries in {name}")
        if np.any(lo > hi):
            raise LpInputError("var_lower must not exceed var_upper")
        if self.family_tag is not None and self.family_tag not in FAMILY_TAGS:
            raise LpInputError(f"unknown family_tag {self.family_tag!r}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "var_lower", lo)
        object.__setattr__(self, "var_upper", hi)

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class LpSolution:
    status: str                 # optimal | infeasible | unbounded | iteration_limit
    x: np.ndarray
    objective_value: float
    dual: np.ndarray            # one multiplier per row, caller's sense
    max_primal_violation: float
    duality_gap: float          # |primal objective - dual objective|, absolute
    iterations: int


@dataclass(frozen=True)
class FeasibilityReport:
    max_violation: float        # max over row residuals and bound residuals
    worst_row: int              # 0-based index of worst row residual, -1 if no rows
    max_row_violation: float
    max_bound_violation: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol


@dataclass(frozen=True)
class CertificateReport:
    primal_feasibility: float
    dual_feasibility: float
    complementarity: float
    gap: float
    objective_value: float
    dual_objective: float
    passed: bool


def check_feasibility(lp: DenseLp, x, tol: float = FEAS_TOL) -> FeasibilityReport:
    """Exact residual report for a candidate point.

    Row residual is the amount by which the row relation is violated (0 when
    satisfied); bound residual likewise.  A zero report means x is feasible.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (lp.n_vars,):
        raise LpInputError(f"x must have shape ({lp.n_vars},), got {x.shape}")
    if lp.n_rows:
        ax = lp.rows @ x
        res = np.zeros(lp.n_rows)
        for i, rel in enumerate(lp.relations):
            if rel == LE:
                res[i] = max(0.0, ax[i] - lp.rhs[i])
            elif rel == GE:
                res[i] = max(0.0, lp.rhs[i] - ax[i])
            else:
                res[i] = abs(ax[i] - lp.rhs[i])
        worst = int(np.argmax(res))
        row_viol = float(res[worst])
    else:
        worst, row_viol = -1, 0.0
    bound_viol = float(max(np.max(lp.var_lower - x, initial=0.0),
                           np.max(x - lp.var_upper, initial=0.0)))
    return FeasibilityReport(
        max_violation=max(row_viol, bound_viol),
        worst_row=worst,
        max_row_violation=row_viol,
        max_bound_violation=bound_viol,
        tol=tol,
    )


def _dual_report(lp: DenseLp, x: np.ndarray, y: np.ndarray):
    """Dual objective, dual sign residual and complementarity residual.

    y is in the caller's sense: for maximization, binding <= rows carry
    nonnegative multipliers (shadow prices), and symmetrically for
    minimization.  Reduced costs d = c - A^T y split against the box bounds.
    """
    sgn = 1.0 if lp.sense == MINIMIZE else -1.0
    c = lp.objective
    d = c - (lp.rows.T @ y if lp.n_rows else 0.0)
    d_int = sgn * d  # reduced costs of the internal minimization problem
    pos = np.maximum(d_int, 0.0)
    neg = np.maximum(-d_int, 0.0)
    # internal-min dual objective, mapped back to the caller's sense
    bound_part = float(lp.var_lower @ pos - lp.var_upper @ neg)
    dual_obj = sgn * (float(lp.rhs @ (sgn * y)) if lp.n_rows else 0.0) + sgn * bound_part
    # sign feasibility of row multipliers (internal min: >= rows carry y >= 0)
    dual_infeas = 0.0
    comp = 0.0
    if lp.n_rows:
        ax = lp.rows @ x
        y_int = sgn * y
        for i, rel in enumerate(lp.relations):
            slack = lp.rhs[i] - ax[i]
            if rel == GE:
                dual_infeas = max(dual_infeas, -y_int[i])
            elif rel == LE:
                dual_infeas = max(dual_infeas, y_int[i])
            comp = max(comp, abs(y[i] * slack))
    comp_bounds = np.maximum(pos * np.abs(x - lp.var_lower),
                             neg * np.abs(lp.var_upper - x))
    comp = max(comp, float(np.max(comp_bounds, initial=0.0)))
    return dual_obj, max(0.0, dual_infeas), comp


def certify(lp: DenseLp, sol: LpSolution, tol: float = CERT_TOL) -> CertificateReport:
    """Independent optimality certificate from strong duality.

    Recomputes primal feasibility, dual sign feasibility, the complementary
    slackness residual and |primal - dual| objective gap from scratch; the
    certificate passes iff all are within tol scaled by (1 + |objective|).
    """
    if sol.status != "optimal":
        raise LpInputError(f"certificate refused: solution status is {sol.status!r}")
    feas = check_feasibility(lp, sol.x, tol)
    primal_obj = float(lp.objective @ sol.x)
    dual_obj, dual_infeas, comp = _dual_report(lp, sol.x, sol.dual)
    gap = abs(primal_obj - dual_obj)
    scale = 1.0 + abs(primal_obj)
    passed = (feas.max_violation <= tol * scale
              and dual_infeas <= tol * scale
              and comp <= tol * scale
              and gap <= tol * scale)
    return CertificateReport(
        primal_feasibility=feas.max_violation,
        dual_feasibility=dual_infeas,
        complementarity=comp,
        gap=gap,
        objective_value=primal_obj,
        dual_objective=dual_obj,
        passed=passed,
    )


class _Tableau:
    """Dense working tableau for one solve; not reused across solves."""

    def __init__(self, lp: DenseLp):
        self.lp = lp
        n, m = lp.n_vars, lp.n_rows
        sgn = 1.0 if lp.sense == MINIMIZE else -1.0
        self.sgn = sgn

        slack_rows = [i for i in range(m) if lp.relations[i] != EQ]
        self.slack_of_row = {i: n + k for k, i in enumerate(slack_rows)}
        n_slack = len(slack_rows)

        # Choose the all-lower or all-upper starting corner, whichever leaves
        # fewer rows needing an artificial variable (ties prefer lower).
        def start_infeasible(x0):
            ax = lp.rows @ x0 if m else np.zeros(0)
            bad = []
            for i in range(m):
                r = lp.rhs[i] - ax[i]
                if lp.relations[i] == LE and r < -FEAS_TOL:
                    bad.append(i)
                elif lp.relations[i] == GE and r > FEAS_TOL:
                    bad.append(i)
                elif lp.relations[i] == EQ and abs(r) > FEAS_TOL:
                    bad.append(i)
            return bad

        bad_lo = start_infeasible(lp.var_lower)
        bad_hi = start_infeasible(lp.var_upper)
        if len(bad_hi) < len(bad_lo):
            x0, bad, self.start_status = lp.var_upper, bad_hi, _AT_UPPER
        else:
            x0, bad, self.start_status = lp.var_lower, bad_lo, _AT_LOWER
        art_rows = sorted(set(bad) | {i for i in range(m) if lp.relations[i] == EQ and i not in bad}
                          ) if m else []
        # Equality rows always need a basic artificial (they have no slack),
        # feasible-at-start ones simply carry it at value ~0.
        self.art_of_row = {i: n + n_slack + k for k, i in enumerate(art_rows)}
        n_art = len(art_rows)
        N = n + n_slack + n_art
        self.n, self.m, self.N = n, m, N
        self.n_slack, self.n_art = n_slack, n_art

        A = np.zeros((m, N))
        if m:
            A[:, :n] = lp.rows
        lo = np.concatenate([lp.var_lower, np.zeros(n_slack + n_art)])
        hi = np.concatenate([lp.var_upper, np.full(n_slack + n_art, np.inf)])
        residual = lp.rhs - (lp.rows @ x0 if m else 0.0) if m else np.zeros(0)

        basis = np.empty(m, dtype=int)
        xB = np.empty(m)
        vstat = np.full(N, _AT_LOWER, dtype=np.int8)
        vstat[:n] = self.start_status
        for i in range(m):
            rel = lp.relations[i]
            if rel != EQ:
                A[i, self.slack_of_row[i]] = 1.0 if rel == LE else -1.0
            if i in self.art_of_row:
                s = 1.0 if residual[i] >= 0 else -1.0
                A[i, self.art_of_row[i]] = s
                basis[i] = self.art_of_row[i]
                xB[i] = abs(residual[i])
            else:
                basis[i] = self.slack_of_row[i]
                xB[i] = residual[i] if rel == LE else -residual[i]
        vstat[basis] = _BASIC

        # tableau rows = B^{-1} A with the initial diagonal +-1 basis
        self.T = A.copy()
        for i in range(m):
            if A[i, basis[i]] < 0:
                self.T[i] = -self.T[i]
        self.A = A
        self.lo, self.hi = lo, hi
        self.basis, self.vstat, self.xB = basis, vstat, xB
        self.c_phase2 = np.zeros(N)
        self.c_phase2[:n] = sgn * lp.objective
        self.iterations = 0

    def reduced_costs(self, c: np.ndarray) -> np.ndarray:
        if self.m:
            d = c - self.c_basic(c) @ self.T
        else:
            d = c.copy()
        d[self.basis] = 0.0
        return d

    def c_basic(self, c):
        return c[self.basis]

    def run(self, c: np.ndarray, max_iterations: int) -> str:
        """Bland-rule primal simplex until optimal for objective c."""
        T, lo, hi = self.T, self.lo, self.hi
        basis, vstat, xB = self.basis, self.vstat, self.xB
        d = self.reduced_costs(c)
        span_ok = (hi - lo) > 0.0
        while True:
            enter_lo = (vstat == _AT_LOWER) & (d < -REDCOST_TOL) & span_ok
            enter_hi = (vstat == _AT_UPPER) & (d > REDCOST_TOL) & span_ok
            cand = enter_lo | enter_hi
            if not cand.any():
                return "optimal"
            if self.iterations >= max_iterations:
                return "iteration_limit"
            q = int(np.argmax(cand))  # lowest index: Bland's rule
            direction = 1.0 if vstat[q] == _AT_LOWER else -1.0
            col = T[:, q]
            delta = -direction * col  # rate of change of basic values
            t_own = hi[q] - lo[q]

            if self.m:
                limits = np.full(self.m, np.inf)
                dec = delta < -PIVOT_TOL
                inc = delta > PIVOT_TOL
                limits[dec] = (xB[dec] - lo[basis[dec]]) / (-delta[dec])
                ub = hi[basis[inc]]
                room = ub - xB[inc]
                limits[inc] = np.where(np.isfinite(ub), room / delta[inc], np.inf)
                np.maximum(limits, 0.0, out=limits)
                t_rows = float(limits.min()) if limits.size else np.inf
            else:
                limits = np.zeros(0)
                t_rows = np.inf

            self.iterations += 1
            if t_own <= t_rows:
                if not np.isfinite(t_own):
                    return "unbounded"
                # bound flip: no basis change, reduced costs unchanged
                xB += delta * t_own
                vstat[q] = _AT_UPPER if direction > 0 else _AT_LOWER
                continue
            if not np.isfinite(t_rows):
                return "unbounded"
            ties = np.nonzero(limits <= t_rows + 1e-12)[0]
            r = int(ties[np.argmin(basis[ties])])  # Bland: lowest leaving index

            xB += delta * t_rows
            leaving = basis[r]
            vstat[leaving] = _AT_LOWER if delta[r] < 0 else _AT_UPPER
            xB[r] = lo[q] + t_rows if direction > 0 else hi[q] - t_rows
            piv = T[r, q]
            Trow = T[r] / piv
            colq = T[:, q].copy()
            T -= np.outer(colq, Trow)
            T[r] = Trow
            d -= d[q] * Trow
            basis[r] = q
            vstat[q] = _BASIC
            d[q] = 0.0

    def nonbasic_values(self) -> np.ndarray:
        z = np.where(self.vstat == _AT_UPPER, self.hi, self.lo)
        return z

    def refresh_basics(self):
        """Re-solve for basic values from the basis factorization.

        Removes the drift accumulated by rank-one tableau updates; called once
        at termination so feasibility and duality residuals reach tolerance.
        """
        if not self.m:
            return
        z = self.nonbasic_values()
        z[self.basis] = 0.0
        rhs_eff = self.lp.rhs - self.A @ z
        B = self.A[:, self.basis]
        self.xB[:] = np.linalg.solve(B, rhs_eff)

    def primal(self) -> np.ndarray:
        z = self.nonbasic_values()
        if self.m:
            z[self.basis] = self.xB
        return z[:self.n]

    def duals(self) -> np.ndarray:
        if not self.m:
            return np.zeros(0)
        B = self.A[:, self.basis]
        y = np.linalg.solve(B.T, self.c_phase2[self.basis])
        return self.sgn * y  # caller's sense


def solve(lp: DenseLp, max_iterations: int | None = None) -> LpSolution:
    """Solve a DenseLp; deterministic for identical input.

    Runs phase 1 only when the cheaper of the two bound corners is infeasible.
    Exceeding the iteration cap is reported as status ``iteration_limit``,
    never silently.
    """
    tab = _Tableau(lp)
    if max_iterations is None:
        max_iterations = 50 * (tab.m + tab.N) + 5000

    def finish(status):
        if status == "optimal":
            tab.refresh_basics()
        x = tab.primal()
        obj = float(lp.objective @ x)
        if status == "optimal":
            y = tab.duals()
            feas = check_feasibility(lp, x, FEAS_TOL)
            dual_obj, _, _ = _dual_report(lp, x, y)
            gap = abs(obj - dual_obj)
            viol = feas.max_violation
        else:
            y = np.zeros(lp.n_rows)
            gap = np.inf
            viol = check_feasibility(lp, x, FEAS_TOL).max_violation
        return LpSolution(status=status, x=x, objective_value=obj, dual=y,
                          max_primal_violation=viol, duality_gap=gap,
                          iterations=tab.iterations)

    if tab.n_art:
        c1 = np.zeros(tab.N)
        c1[tab.n + tab.n_slack:] = 1.0
        status = tab.run(c1, max_iterations)
        if status != "optimal":
            return finish(status if status == "iteration_limit" else "infeasible")
        art_level = float(sum(tab.xB[i] for i in range(tab.m)
                              if tab.basis[i] >= tab.n + tab.n_slack))
        if art_level > FEAS_TOL * max(1.0, np.abs(lp.rhs).max(initial=1.0)):
            return finish("infeasible")
        # pin artificials at zero; zero-span variables can never re-enter
        tab.hi[tab.n + tab.n_slack:] = 0.0
        tab.lo[tab.n + tab.n_slack:] = 0.0

    status = tab.run(tab.c_phase2, max_iterations)
    return finish(status)


def dump_lp(lp: DenseLp, path) -> None:
    """Plain-text LP dump.

    Line 1: ``sense n_vars n_rows``; line 2: objective coefficients; then one
    line per row ``coeffs... rel rhs``; finally the lower and upper bound
    lines.
    """
    with open(path, "w") as fh:
        fh.write(f"{lp.sense} {lp.n_vars} {lp.n_rows}\n")
        fh.write(" ".join(repr(float(v)) for v in lp.objective) + "\n")
        for i in range(lp.n_rows):
            coeffs = " ".join(repr(float(v)) for v in lp.rows[i])
            fh.write(f"{coeffs} {lp.relations[i]} {float(lp.rhs[i])!r}\n")
        fh.write(" ".join(repr(float(v)) for v in lp.var_lower) + "\n")
        fh.write(" ".join(repr(float(v)) for v in lp.var_upper) + "\n")


def load_lp(path, family_tag: str | None = None) -> DenseLp:
    """Inverse of dump_lp."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    sense, n_s, m_s = lines[0].split()
    n, m = int(n_s), int(m_s)
    objective = np.array([float(v) for v in lines[1].split()])
    rows, relations, rhs = [], [], []
    for i in range(m):
        parts = lines[2 + i].split()
        rows.append([float(v) for v in parts[:n]])
        relations.append(parts[n])
        rhs.append(float(parts[n + 1]))
    lo = np.array([float(v) for v in lines[2 + m].split()])
    hi = np.array([float(v) for v in lines[3 + m].split()])
    return DenseLp(sense=sense, objective=objective,
                   rows=np.array(rows).reshape(m, n), relations=tuple(relations),
                   rhs=np.array(rhs), var_lower=lo, var_upper=hi,
                   family_tag=family_tag)
