import numpy as np
import pytest

from lplimits import (
    DenseLp,
    LpInputError,
    build_balance,
    build_ranking,
    build_toy,
    certify,
    check_feasibility,
    dump_lp,
    load_lp,
    solve,
)
from lplimits.lp_core import GE, LE, MAXIMIZE, MINIMIZE


def box_lp(sense, c, rows, rels, rhs, lo=None, hi=None):
    c = np.asarray(c, float)
    n = c.size
    return DenseLp(sense=sense, objective=c, rows=np.asarray(rows, float),
                   relations=tuple(rels), rhs=np.asarray(rhs, float),
                   var_lower=np.zeros(n) if lo is None else np.asarray(lo, float),
                   var_upper=np.ones(n) if hi is None else np.asarray(hi, float))


def test_toy_n1_forced_to_one():
    sol = solve(build_toy(1))
    assert sol.status == "optimal"
    assert sol.x == pytest.approx([1.0], abs=1e-12)
    assert sol.objective_value == pytest.approx(1.0, abs=1e-12)


def test_toy_n2_matches_hand_solution_and_grid():
    sol = solve(build_toy(2))
    assert sol.x == pytest.approx([1.0, 0.5], abs=1e-10)
    assert sol.objective_value == pytest.approx(0.75, abs=1e-12)
    # brute force over the [0,1]^2 grid at step 1e-3
    g = np.linspace(0.0, 1.0, 1001)
    x1, x2 = np.meshgrid(g, g, indexing="ij")
    feas = (1 - x1 <= 0 + 1e-12) & (1 - x2 <= 0.5 * x1 + 1e-12) & (x1 >= x2)
    best = np.min(np.where(feas, 0.5 * (x1 + x2), np.inf))
    assert best == pytest.approx(sol.objective_value, abs=1e-9)


def test_balance_n2_vertex_enumeration():
    lp = build_balance(2)
    sol = solve(lp)
    assert sol.objective_value == pytest.approx(0.25, abs=1e-12)
    assert sol.x[0] == pytest.approx(0.5, abs=1e-12)
    # enumerate vertices of {x1 <= 1/2, 1.5 x1 + x2 <= 1, x in [0,1]^2}
    best = -np.inf
    for x1 in (0.0, 0.5):
        for x2 in (0.0, 1.0, 1.0 - 1.5 * x1):
            x = np.array([x1, min(max(x2, 0.0), 1.0)])
            if check_feasibility(lp, x, 1e-12).ok:
                best = max(best, float(lp.objective @ x))
    assert best == pytest.approx(sol.objective_value, abs=1e-12)


def test_check_feasibility_reports():
    lp = build_toy(2)
    assert check_feasibility(lp, [1.0, 0.5]).max_violation == 0.0
    rep = check_feasibility(lp, [0.0, 0.0])
    assert rep.max_violation == pytest.approx(1.0)
    assert rep.worst_row == 0
    with pytest.raises(LpInputError):
        check_feasibility(lp, [1.0, 0.5, 0.0])


def test_certify_ranking_small():
    lp = build_ranking(2)
    sol = solve(lp)
    assert sol.objective_value == pytest.approx(5.0 / 9.0, abs=1e-12)
    report = certify(lp, sol)
    assert report.passed
    assert report.gap <= 1e-9


def test_certify_rejects_perturbed_solution():
    lp = build_ranking(2)
    sol = solve(lp)
    x_bad = sol.x.copy()
    x_bad[0] += 1e-2
    bad = type(sol)(status="optimal", x=x_bad,
                    objective_value=float(lp.objective @ x_bad),
                    dual=sol.dual, max_primal_violation=0.0,
                    duality_gap=0.0, iterations=sol.iterations)
    assert not certify(lp, bad).passed


def test_certify_refuses_non_optimal():
    lp = build_toy(2)
    sol = solve(lp, max_iterations=0)
    assert sol.status == "iteration_limit"
    with pytest.raises(LpInputError):
        certify(lp, sol)


def test_one_variable_strong_duality():
    lp = box_lp(MINIMIZE, [1.0], [[1.0]], [GE], [1.0], lo=[0.0], hi=[5.0])
    sol = solve(lp)
    assert sol.objective_value == pytest.approx(1.0, abs=1e-12)
    rep = certify(lp, sol)
    assert rep.dual_objective == pytest.approx(1.0, abs=1e-12)
    assert rep.gap <= 1e-12


def test_infeasible_detected():
    lp = box_lp(MINIMIZE, [1.0], [[1.0]], [GE], [2.0])  # x >= 2, x <= 1
    assert solve(lp).status == "infeasible"


def test_equality_rows():
    lp = box_lp(MAXIMIZE, [1.0, 1.0], [[1.0, 1.0]], ["="], [0.7])
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(0.7, abs=1e-12)
    assert certify(lp, sol).passed


def test_bounds_only_lp():
    lp = DenseLp(sense=MAXIMIZE, objective=np.array([2.0, -1.0]),
                 rows=np.zeros((0, 2)), relations=(), rhs=np.zeros(0),
                 var_lower=np.array([0.0, 0.0]), var_upper=np.array([1.0, 3.0]))
    sol = solve(lp)
    assert sol.x == pytest.approx([1.0, 0.0])
    assert sol.objective_value == pytest.approx(2.0)


def test_rejects_bad_inputs():
    with pytest.raises(LpInputError):
        DenseLp(sense=MINIMIZE, objective=np.zeros(0), rows=np.zeros((0, 0)),
                relations=(), rhs=np.zeros(0), var_lower=np.zeros(0),
                var_upper=np.zeros(0))
    with pytest.raises(LpInputError):
        box_lp(MINIMIZE, [np.nan], [[1.0]], [LE], [1.0])
    with pytest.raises(LpInputError):
        box_lp(MINIMIZE, [1.0], [[np.inf]], [LE], [1.0])
    with pytest.raises(LpInputError):
        box_lp(MINIMIZE, [1.0], [[1.0]], [LE], [1.0], lo=[2.0], hi=[1.0])
    with pytest.raises(LpInputError):
        box_lp("max", [1.0], [[1.0]], [LE], [1.0])


def test_deterministic_resolve_bit_identical():
    lp = build_ranking(40)
    a, b = solve(lp), solve(lp)
    assert np.array_equal(a.x, b.x)
    assert a.objective_value == b.objective_value
    assert a.iterations == b.iterations


@pytest.mark.parametrize("build,n", [(build_toy, 17), (build_ranking, 23)])
def test_row_scaling_leaves_optimum(build, n):
    lp = build(n)
    lam = 3.7
    scaled = DenseLp(sense=lp.sense, objective=lp.objective,
                     rows=lam * lp.rows, relations=lp.relations,
                     rhs=lam * lp.rhs, var_lower=lp.var_lower,
                     var_upper=lp.var_upper)
    a, b = solve(lp), solve(scaled)
    assert b.objective_value == pytest.approx(a.objective_value, abs=1e-10)
    assert b.x == pytest.approx(a.x, abs=1e-9)


@pytest.mark.parametrize("build,n", [
    (build_toy, 33), (build_balance, 48), (build_ranking, 57),
])
def test_solution_feasible_and_certified(build, n):
    lp = build(n)
    sol = solve(lp)
    assert sol.status == "optimal"
    assert check_feasibility(lp, sol.x, 1e-9).max_violation == pytest.approx(0.0, abs=1e-9)
    assert sol.duality_gap <= 1e-8 * (1.0 + abs(sol.objective_value))
    assert certify(lp, sol).passed
    assert np.all(sol.x >= lp.var_lower - 1e-9)
    assert np.all(sol.x <= lp.var_upper + 1e-9)


def test_agrees_with_scipy_on_random_boxed_lps(rng):
    from scipy.optimize import linprog

    for trial in range(40):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(0, 7))
        c = rng.integers(-5, 6, size=n).astype(float)
        rows = rng.integers(-4, 5, size=(m, n)).astype(float)
        rels = [("<=", ">=", "=")[int(rng.integers(0, 3))] for _ in range(m)]
        rhs = rng.integers(-6, 7, size=m).astype(float)
        lo = np.zeros(n)
        hi = rng.integers(1, 4, size=n).astype(float)
        sense = "minimize" if rng.integers(0, 2) else "maximize"
        lp = DenseLp(sense=sense, objective=c, rows=rows,
                     relations=tuple(rels), rhs=rhs, var_lower=lo, var_upper=hi)
        sol = solve(lp)

        sgn = 1.0 if sense == "minimize" else -1.0
        a_ub, b_ub, a_eq, b_eq = [], [], [], []
        for i, rel in enumerate(rels):
            if rel == "<=":
                a_ub.append(rows[i]); b_ub.append(rhs[i])
            elif rel == ">=":
                a_ub.append(-rows[i]); b_ub.append(-rhs[i])
            else:
                a_eq.append(rows[i]); b_eq.append(rhs[i])
        ref = linprog(sgn * c, A_ub=np.array(a_ub) if a_ub else None,
                      b_ub=np.array(b_ub) if b_ub else None,
                      A_eq=np.array(a_eq) if a_eq else None,
                      b_eq=np.array(b_eq) if b_eq else None,
                      bounds=list(zip(lo, hi)), method="highs")
        if ref.status == 2:
            assert sol.status == "infeasible", (trial, sol.status)
        else:
            assert ref.status == 0 and sol.status == "optimal", (trial, ref.status)
            assert sol.objective_value == pytest.approx(sgn * ref.fun, abs=1e-7)
            assert certify(lp, sol).passed


def test_degenerate_cycling_instance_terminates():
    # Beale's classical cycling example; Bland's rule must escape it
    lp = box_lp(MINIMIZE, [-0.75, 150.0, -0.02, 6.0],
                [[0.25, -60.0, -0.04, 9.0],
                 [0.5, -90.0, -0.02, 3.0],
                 [0.0, 0.0, 1.0, 0.0]],
                [LE, LE, LE], [0.0, 0.0, 1.0],
                lo=[0.0] * 4, hi=[1e4] * 4)
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(-0.05, abs=1e-9)
    assert certify(lp, sol).passed


def test_dump_load_roundtrip(tmp_path):
    lp = build_balance(5)
    path = tmp_path / "balance5.lp"
    dump_lp(lp, path)
    lp2 = load_lp(path, family_tag="balance")
    assert np.array_equal(lp.rows, lp2.rows)
    assert np.array_equal(lp.objective, lp2.objective)
    assert lp.relations == lp2.relations
    assert np.array_equal(lp.rhs, lp2.rhs)
    assert solve(lp2).objective_value == solve(lp).objective_value
