import math

import numpy as np
import pytest

from lplimits import (
    LpInputError,
    PolicyTable,
    SimInstance,
    SlabStats,
    best_threshold,
    build_secretary,
    offline_optimum,
    planted_instance,
    run_balance,
    run_ranking,
    run_secretary,
    secretary_policy_from_lp,
    slab_audit,
    solve,
    threshold_policy_value,
    triangular_instance,
)
from lplimits.online_sim import read_instance, write_instance

INV_E = 1.0 / math.e


def test_balance_single_forced_assignment():
    inst = SimInstance(n_offline=1, b=1, arrivals=((1,),))
    run = run_balance(inst, n_slabs=4)
    assert run.value == 1.0
    assert run.stats.alpha[-1] == 1  # the bidder ends fully spent


def test_balance_empty_arrivals():
    run = run_balance(SimInstance(n_offline=3, b=2, arrivals=()), n_slabs=5)
    assert run.value == 0.0
    assert np.all(run.stats.beta == 0.0)
    assert run.stats.alpha[0] == 3


def test_balance_ties_go_to_lowest_index():
    inst = SimInstance(n_offline=3, b=1, arrivals=((1, 2, 3), (2, 3)))
    run = run_balance(inst, n_slabs=2)
    assert list(run.assignments) == [1, 1, 0]


def test_balance_triangular_ratio():
    inst = triangular_instance(40, 40)
    run = run_balance(inst, n_slabs=20)
    ratio = run.value / 40
    assert abs(ratio - (1 - INV_E)) <= 0.02
    assert run.value <= 40.0
    assert slab_audit(run.stats, opt_exhausts_budgets=True).passed


def test_balance_never_beats_offline_optimum(rng):
    for k in range(10):
        n = int(rng.integers(2, 12))
        b = int(rng.integers(1, 4))
        n_arr = int(rng.integers(1, 3 * n))
        arrivals = []
        for _ in range(n_arr):
            deg = int(rng.integers(0, n + 1))
            arrivals.append(tuple(sorted(set(
                int(v) for v in rng.integers(1, n + 1, size=deg)))))
        inst = SimInstance(n_offline=n, b=b, arrivals=tuple(arrivals))
        run = run_balance(inst, n_slabs=4)
        assert run.value <= offline_optimum(inst) + 1e-12
        assert run.value <= n


def test_slab_audit_on_planted_corpus(rng):
    # slab boundaries aligned with the spend grid: b a multiple of N
    for k in range(40):
        N = int(rng.choice([5, 10, 20]))
        b = N * int(rng.integers(1, 4))
        n = int(rng.integers(4, 16))
        inst = planted_instance(n, b, extra_degree=int(rng.integers(1, 4)),
                                seed=int(rng.integers(0, 2**31)))
        assert offline_optimum(inst) == n  # planted perfect b-matching
        run = run_balance(inst, n_slabs=N)
        assert slab_audit(run.stats, opt_exhausts_budgets=True).passed


def test_slab_audit_rejects_fabricated_stats():
    bad = SlabStats(N=4, alpha=np.array([6, 0, 0, 0, 0]),
                    beta=np.zeros(4), rho=np.zeros(6))
    res = slab_audit(bad, opt_exhausts_budgets=True)
    assert not res.passed
    assert res.worst_prefix == 1


def test_slab_audit_vacuous_when_all_full():
    inst = SimInstance(n_offline=2, b=1, arrivals=((1,), (2,)))
    run = run_balance(inst, n_slabs=6)
    assert np.all(run.stats.alpha[:-1] == 0)
    assert slab_audit(run.stats, opt_exhausts_budgets=True).passed


def test_slab_audit_refused_without_hypothesis():
    run = run_balance(SimInstance(1, 1, ((1,),)), n_slabs=2)
    with pytest.raises(LpInputError):
        slab_audit(run.stats, opt_exhausts_budgets=False)


def test_ranking_single_edge():
    rep = run_ranking(SimInstance(1, 1, ((1,),)), trials=500, seed=1)
    assert rep.estimate == 1.0
    assert rep.std_error == 0.0


def test_ranking_complete_graph_is_perfect():
    n = 6
    inst = SimInstance(n, 1, tuple(tuple(range(1, n + 1)) for _ in range(n)))
    rep = run_ranking(inst, trials=300, seed=2)
    assert rep.estimate == float(n)


def test_ranking_requires_unit_capacity():
    with pytest.raises(LpInputError):
        run_ranking(SimInstance(2, 2, ((1,),)), trials=10)


def test_ranking_reproducible_and_seed_consistent():
    inst = triangular_instance(30, 1)
    a = run_ranking(inst, trials=4000, seed=9)
    b = run_ranking(inst, trials=4000, seed=9)
    assert a.estimate == b.estimate and a.std_error == b.std_error
    c = run_ranking(inst, trials=4000, seed=10)
    spread = abs(a.estimate - c.estimate)
    assert spread <= 4 * math.hypot(a.std_error, c.std_error)


def test_ranking_triangular_near_limit():
    rep = run_ranking(triangular_instance(60, 1), trials=20_000, seed=5)
    assert 0.60 <= rep.estimate / 60 <= 0.67


def test_policy_from_lp_threshold_shape():
    n = 60
    sol = solve(build_secretary(n))
    pol = secretary_policy_from_lp(sol.x)
    k_star, _ = best_threshold(n)
    assert np.all(pol.accept_prob[:k_star] <= 1e-9)
    reach = pol.reachable[k_star:]
    assert np.all(pol.accept_prob[k_star:][reach] >= 1 - 1e-9)
    assert abs(k_star / n - INV_E) <= 2.0 / n


def test_policy_from_zero_vector():
    pol = secretary_policy_from_lp(np.zeros(8))
    assert np.all(pol.accept_prob == 0.0)
    assert np.all(pol.reachable)


def test_policy_first_position_only():
    x = np.zeros(5)
    x[0] = 1.0
    pol = secretary_policy_from_lp(x)
    assert pol.accept_prob[0] == 1.0
    assert not pol.reachable[1:].any()
    assert np.all(pol.accept_prob[1:] == 0.0)


def test_policy_rejects_infeasible():
    x = np.full(5, 0.9)
    with pytest.raises(LpInputError):
        secretary_policy_from_lp(x)


def test_secretary_trivial_and_uniform_policies():
    always = PolicyTable(n=1, accept_prob=np.ones(1),
                         reachable=np.ones(1, dtype=bool))
    rep = run_secretary(always, trials=200, seed=3)
    assert rep.estimate == 1.0

    n = 8
    first = PolicyTable(n=n, accept_prob=np.ones(n),
                        reachable=np.ones(n, dtype=bool))
    rep = run_secretary(first, trials=40_000, seed=4)
    assert abs(rep.estimate - 1.0 / n) <= 4 * rep.std_error


@pytest.mark.parametrize("n", [10, 50, 200])
def test_secretary_policy_tracks_lp_objective(n):
    sol = solve(build_secretary(n))
    pol = secretary_policy_from_lp(sol.x)
    rep = run_secretary(pol, trials=60_000, seed=6)
    assert abs(rep.estimate - sol.objective_value) <= 3 * rep.std_error


def test_slab_stats_invariants():
    inst = triangular_instance(12, 6)
    run = run_balance(inst, n_slabs=3)
    st = run.stats
    assert st.alpha.sum() == 12
    assert np.all(st.beta >= 0) and np.all(st.beta <= 12 / 3 + 1e-12)
    assert np.all((st.rho >= 0) & (st.rho <= 1))
    assert st.beta_units.sum() == run.value * st.N * st.b


def test_threshold_policy_value_examples():
    assert threshold_policy_value(3, 1) == pytest.approx(0.5, abs=1e-15)
    assert threshold_policy_value(2, 0) == pytest.approx(0.5, abs=1e-15)
    assert threshold_policy_value(1, 0) == 1.0
    with pytest.raises(LpInputError):
        threshold_policy_value(3, 3)
    with pytest.raises(LpInputError):
        threshold_policy_value(3, -1)


def test_threshold_near_one_over_e():
    n = 10_000
    v = threshold_policy_value(n, int(n / math.e))
    assert abs(v - INV_E) <= 1e-3


@pytest.mark.parametrize("n", list(range(1, 61)))
def test_best_threshold_equals_lp(n):
    _, v = best_threshold(n)
    assert abs(v - solve(build_secretary(n)).objective_value) <= 1e-9


def test_instance_file_roundtrip(tmp_path):
    inst = planted_instance(5, 2, seed=3)
    path = tmp_path / "inst.txt"
    write_instance(inst, path)
    back = read_instance(path)
    assert back.n_offline == inst.n_offline
    assert back.b == inst.b
    assert back.arrivals == inst.arrivals


def test_instance_validation():
    with pytest.raises(LpInputError):
        SimInstance(2, 1, ((0,),))
    with pytest.raises(LpInputError):
        SimInstance(2, 1, ((3,),))
    with pytest.raises(LpInputError):
        SimInstance(0, 1, ())
