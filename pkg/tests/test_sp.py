"""Survey propagation: trivial fixed point, regimes, marginals."""

import numpy as np
import pytest

from qbfmp import (
    BpParams,
    FactorGraph,
    is_nontrivial,
    random_ksat,
    sp_marginals,
    sp_run,
    trivial_state,
)
from qbfmp import kernels
from qbfmp import _kernels_py
from qbfmp.sp import SpState

from _oracles import random_cnf


def _sweep_once(graph, state, order=None, damping=0.0):
    if order is None:
        order = np.arange(graph.n_edges, dtype=np.int64)
    return kernels.sp_sweep(
        graph.edge_var, graph.edge_clause, graph.edge_sign,
        graph.var_ptr, graph.var_edge, graph.clause_ptr,
        state.u, state.psi_u, state.psi_s, state.psi_star, order, damping,
    )


def test_trivial_point_is_exactly_fixed_without_unit_clauses():
    rng = np.random.default_rng(2)
    for _ in range(20):
        cnf = random_cnf(rng, 10, int(rng.integers(2, 30)), 2, 4)
        g = FactorGraph(cnf)
        st = trivial_state(g)
        residual, jokers = _sweep_once(g, st)
        assert residual == 0.0
        assert np.all(st.u == 1.0)
        assert np.all(st.psi_star == 1.0)
        assert not is_nontrivial(st)


def test_unit_clause_forces_a_sure_warning():
    g = FactorGraph(((1,), (1, 2), (-2, 3)))
    st = trivial_state(g)
    for _ in range(4):
        _sweep_once(g, st)
    e = g.edge_index(1, 0)
    assert st.u[e] == 0.0
    marg = sp_marginals(g, st)
    plus, star, minus = marg[1]
    assert abs(plus - 1.0) < 1e-9 and star < 1e-9 and minus < 1e-9


def test_sp_run_deterministic_and_converges_low_density():
    cnf = random_ksat(60, 90, 3, seed=4)
    g = FactorGraph(cnf)
    a = sp_run(g, BpParams(seed=11))
    b = sp_run(g, BpParams(seed=11))
    assert np.array_equal(a.state.u, b.state.u)
    assert np.array_equal(a.state.psi_star, b.state.psi_star)
    assert a.converged and b.converged
    assert not is_nontrivial(a.state)
    assert a.state.eta().max() <= 1e-3


def test_sp_nontrivial_at_high_density():
    cnf = random_ksat(300, 1230, 3, seed=9)  # density 4.1
    g = FactorGraph(cnf)
    r = sp_run(g, BpParams(seed=1))
    assert r.converged
    assert is_nontrivial(r.state)
    assert r.state.eta().max() > 1e-3


def test_sp_restarts_validation_and_return_shape():
    g = FactorGraph(((1, 2),))
    with pytest.raises(ValueError):
        sp_run(g, restarts=0)
    r = sp_run(g, BpParams(seed=0), restarts=3)
    assert isinstance(r.state, SpState)
    assert r.state.u.shape == (2,)


def test_sp_messages_stay_in_unit_interval():
    rng = np.random.default_rng(14)
    for _ in range(15):
        cnf = random_cnf(rng, 12, int(rng.integers(3, 40)), 2, 3)
        g = FactorGraph(cnf)
        r = sp_run(g, BpParams(seed=int(rng.integers(99)), t_max=int(rng.integers(1, 30))))
        for arr in (r.state.u, r.state.psi_u, r.state.psi_s, r.state.psi_star):
            assert np.all(arr >= 0.0) and np.all(arr <= 1.0)
        tri = r.state.psi_u + r.state.psi_s + r.state.psi_star
        assert np.allclose(tri, 1.0, atol=1e-12)


def test_sp_marginals_normalized_and_oriented():
    rng = np.random.default_rng(6)
    cnf = random_cnf(rng, 10, 30, 2, 3)
    g = FactorGraph(cnf)
    r = sp_run(g, BpParams(seed=3))
    marg = sp_marginals(g, r.state)
    for plus, star, minus in marg.values():
        assert abs(plus + star + minus - 1.0) < 1e-12
        assert min(plus, star, minus) >= 0.0
    # a variable occurring only positively can only be constrained true
    g2 = FactorGraph(((1, 2), (1, -2)))
    st = trivial_state(g2)
    for _ in range(30):
        _sweep_once(g2, st)
    plus, star, minus = sp_marginals(g2, st)[1]
    assert minus < 1e-9


def test_sp_marginals_isolated_variable():
    g = FactorGraph(((1, 2),), variables=(1, 2, 3))
    r = sp_run(g, BpParams(seed=0))
    assert sp_marginals(g, r.state)[3] == (0.0, 1.0, 0.0)


def test_sp_kernel_backends_agree_bitwise():
    if "c" not in kernels.available_backends():
        pytest.skip("compiled backend not built")
    c_mod = kernels.available_backends()["c"]
    rng = np.random.default_rng(21)
    for trial in range(8):
        cnf = random_cnf(rng, 12, 45, 2, 4)
        g = FactorGraph(cnf)
        init_u = rng.uniform(0.01, 0.99, size=g.n_edges)
        third = 1.0 / 3.0
        sets = []
        for _ in range(2):
            sets.append((
                init_u.copy(),
                np.full(g.n_edges, third), np.full(g.n_edges, third),
                np.full(g.n_edges, third),
            ))
        damping = 0.25 if trial % 2 else 0.0
        for sweep in range(10):
            order = np.random.default_rng(100 + sweep).permutation(g.n_edges)
            r1 = _kernels_py.sp_sweep(
                g.edge_var, g.edge_clause, g.edge_sign, g.var_ptr,
                g.var_edge, g.clause_ptr, *sets[0], order, damping)
            r2 = c_mod.sp_sweep(
                g.edge_var, g.edge_clause, g.edge_sign, g.var_ptr,
                g.var_edge, g.clause_ptr, *sets[1], order, damping)
            assert r1 == r2
        for a, b in zip(sets[0], sets[1]):
            assert np.array_equal(a, b)


def test_eta_is_one_minus_u():
    g = FactorGraph(((1, 2), (-1, 2)))
    r = sp_run(g, BpParams(seed=5))
    assert np.array_equal(r.state.eta(), 1.0 - r.state.u)
