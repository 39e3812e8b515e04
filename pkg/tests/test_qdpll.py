"""QBF solver semantics, statistics, and oracle agreement."""

import numpy as np
import pytest

from qbfmp import (
    BpParams,
    QbfFormula,
    QuantBlock,
    brute_force_eval,
    index_order,
    parse_qdimacs,
    qdpll_solve,
)

from _oracles import random_qbf

HEURISTICS = ("index", "vsids", "bph", "bpdh")


def test_two_alternation_sat_counts_universal_leaves():
    f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
    for h in HEURISTICS:
        r = qdpll_solve(f, heuristic=h)
        assert r.status == "sat"
        assert r.stats.solutions == 2
    assert brute_force_eval(f) == "sat"


def test_two_alternation_unsat_branch():
    f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n1 -2 0\n")
    for h in HEURISTICS:
        assert qdpll_solve(f, heuristic=h).status == "unsat"
    assert brute_force_eval(f) == "unsat"


def test_prefix_order_matters():
    f = parse_qdimacs("p cnf 2 2\ne 2 0\na 1 0\n1 2 0\n-1 -2 0\n")
    for h in HEURISTICS:
        assert qdpll_solve(f, heuristic=h).status == "unsat"
    assert brute_force_eval(f) == "unsat"


def test_single_block_formulas():
    assert qdpll_solve(parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n")).status == "sat"
    assert qdpll_solve(parse_qdimacs("p cnf 1 1\na 1 0\n1 0\n")).status == "unsat"
    assert brute_force_eval(parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n")) == "sat"
    assert brute_force_eval(parse_qdimacs("p cnf 1 1\na 1 0\n1 0\n")) == "unsat"


def test_empty_matrix_is_sat_with_one_leaf():
    f = QbfFormula((QuantBlock("a", (1,)), QuantBlock("e", (2,))), ())
    r = qdpll_solve(f)
    assert r.status == "sat"
    assert r.stats.solutions == 1
    assert r.stats.decisions == 0


def test_empty_clause_is_unsat_immediately():
    f = QbfFormula((QuantBlock("e", (1,)),), ((),))
    r = qdpll_solve(f, heuristic="index")
    assert r.status == "unsat"
    assert r.stats.solutions == 0


def test_unit_universal_literal_conflicts():
    f = parse_qdimacs("p cnf 2 1\ne 2 0\na 1 0\n1 2 0\n")
    r = qdpll_solve(f)
    assert r.status == "sat"          # y=true covers both x values
    assert r.stats.conflicts >= 1     # the y=false branch dies on unit (x)
    assert r.stats.solutions == 1


def test_solver_stats_shape():
    f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
    r = qdpll_solve(f)
    s = r.stats
    assert s.decisions >= 1 and s.conflicts >= 0
    assert s.propagations >= 1
    assert s.wall_time > 0.0


def test_deterministic_stats():
    rng = np.random.default_rng(3)
    for _ in range(5):
        f = random_qbf(rng)
        for h in HEURISTICS:
            a = qdpll_solve(f, heuristic=h)
            b = qdpll_solve(f, heuristic=h)
            assert a.status == b.status
            assert (a.stats.decisions, a.stats.conflicts,
                    a.stats.solutions, a.stats.propagations) == (
                b.stats.decisions, b.stats.conflicts,
                b.stats.solutions, b.stats.propagations)


def test_oracle_agreement_and_heuristic_independence():
    rng = np.random.default_rng(77)
    verdicts = {"sat": 0, "unsat": 0}
    for _ in range(60):
        f = random_qbf(rng, "lk" if rng.integers(2) else "model_b")
        expect = brute_force_eval(f)
        for h in HEURISTICS:
            r = qdpll_solve(f, heuristic=h, bp_params=BpParams(seed=1))
            assert r.status == expect
        verdicts[expect] += 1
    assert verdicts["sat"] > 5 and verdicts["unsat"] > 5


def test_solution_leaf_law_small():
    from qbfmp import GeneratorSpec, gen_formula

    checked = 0
    for seed in range(25):
        spec = GeneratorSpec(model="lk", l=1, k=2, n_u=4, n_e=6, m=8, seed=seed)
        f = gen_formula(spec)
        results = {h: qdpll_solve(f, heuristic=h) for h in HEURISTICS}
        statuses = {r.status for r in results.values()}
        assert len(statuses) == 1
        if statuses == {"sat"}:
            checked += 1
            for r in results.values():
                assert r.stats.solutions == 2 ** f.num_universal
    assert checked > 5


def test_static_order_input_accepted():
    f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
    r = qdpll_solve(f, heuristic=index_order(f))
    assert r.status == "sat"


def test_time_limit_returns_unknown():
    from qbfmp import GeneratorSpec, gen_formula

    f = gen_formula(GeneratorSpec(model="lk", l=1, k=3, n_u=14, n_e=14, m=40, seed=0))
    r = qdpll_solve(f, time_limit=1e-4)
    assert r.status == "unknown"


def test_brute_force_eval_rejects_large_formulas():
    f = QbfFormula((QuantBlock("e", tuple(range(1, 26))),), ((1,),))
    with pytest.raises(ValueError):
        brute_force_eval(f)
