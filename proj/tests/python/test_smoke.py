import math

import pytest

import autfool


def test_lap_unit_bound_holds():
    rows = [[0.5, 0.25, 1.0, 0.75], [0.9, 0.1, 0.3, 0.6]]
    u = [0.5, 0.3, 0.8, 0.1]
    sol = autfool.solve_unit(rows, u)
    for k in range(2):
        assert sol.disc[k] <= autfool.lap_unit_bound(sol.mu[k], 2) + 1e-9


def test_lap_integral_u_is_exact():
    sol = autfool.solve_unit([[1.0, 1.0]], [1.0, 0.0])
    assert list(sol.v) == [1, 0]
    assert sol.disc[0] == pytest.approx(0.0)


def test_lap_rejects_bad_entries():
    with pytest.raises(autfool.ValidationError):
        autfool.solve_unit([[1.5]], [0.5])


def test_potential_shape():
    assert autfool.potential(0, 12) == 1.0
    assert autfool.potential(6, 12) == pytest.approx(0.5)
    assert autfool.potential(9, 12) == 0.0


def test_star_product_half_even():
    assert autfool.star_product([0.5], [0.1], 0.1) == pytest.approx(0.0)
    assert autfool.star_product([1.0, 0.0], [0.5, 0.7], 0.25) == pytest.approx(0.5)


def test_gb_small_instance():
    a = [[1, -1], [-1, 1]]
    res = autfool.run_gb(a, 1.0, 3.0, 128)
    assert res.imbalance <= 4
    assert res.imbalance >= 1
    assert autfool.imbalance(a, list(res.x), list(res.y)) == res.imbalance


def test_gb_oracle():
    assert autfool.gb_expected_weight_oracle(2) == pytest.approx(1.0)
    assert autfool.gb_expected_weight_oracle(4) == pytest.approx(1.5)


def test_brute_force_maxcut_triangle():
    side, opt = autfool.brute_force_maxcut(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
    assert opt == pytest.approx(2.0)


def test_round_maxcut_antipodal_edge():
    res = autfool.round_maxcut(
        n=2,
        edges=[(0, 1, 1.0)],
        vectors=[[1.0, 0.0], [-1.0, 0.0]],
        epsilon=0.3,
        quant_c=1.6,
        b_scale=0.12,
        size_cap=128,
    )
    assert res.cut_weight == pytest.approx(1.0)
    assert res.sum_model == pytest.approx(1.0)


def test_fool_table_automaton_parity():
    values = [[0, 1]] * 4
    probs = [[0.5, 0.5]] * 4
    # parity transition per (step, symbol index, state)
    table = [[[0, 1], [1, 0]] for _ in range(4)]
    size, min_slack, ok = autfool.fool_table_automaton(
        values, probs, table, 2, 0, [1.0, 0.0], 0.5, 512
    )
    assert ok
    assert min_slack >= 0.0
    assert size <= 512


def test_determinism_across_worker_counts():
    a = [[1, -1, 1, 1], [1, 1, -1, 1], [-1, 1, 1, 1], [1, 1, 1, -1]]
    autfool.set_worker_count(1)
    r1 = autfool.run_gb(a, 1.0, 3.0, 128)
    autfool.set_worker_count(8)
    r2 = autfool.run_gb(a, 1.0, 3.0, 128)
    autfool.set_worker_count(1)
    assert list(r1.y) == list(r2.y)
    assert r1.imbalance == r2.imbalance
