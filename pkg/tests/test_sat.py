"""CDCL SAT backend against enumeration oracles."""

import itertools

import numpy as np
import pytest

from qbfmp import sat_solve

from _oracles import cnf_satisfiable, random_cnf


def test_contradictory_units():
    r = sat_solve([(1,), (-1,)])
    assert r.status == "unsat" and r.model is None


def test_unit_implication_chain():
    r = sat_solve([(1, 2), (-1,)])
    assert r.status == "sat"
    assert r.model == {1: False, 2: True}


def test_empty_cnf_and_empty_clause():
    assert sat_solve([]) == ("sat", {})
    assert sat_solve([()]).status == "unsat"
    assert sat_solve([(1,), ()]).status == "unsat"
    r = sat_solve([], variables=[4, 7])
    assert r.status == "sat" and set(r.model) == {4, 7}


def test_tautologies_and_duplicates_ignored():
    r = sat_solve([(1, -1), (2, 2, 3), (2, 3), (2, 3)])
    assert r.status == "sat"
    assert r.model[2] or r.model[3]


def test_model_covers_extra_variables():
    r = sat_solve([(1,)], variables=[1, 2, 9])
    assert r.status == "sat"
    assert set(r.model) == {1, 2, 9}
    assert r.model[1] is True


def test_deterministic_under_seed():
    cnf = random_cnf(np.random.default_rng(8), 25, 90, 2, 3)
    a = sat_solve(cnf, seed=3)
    b = sat_solve(cnf, seed=3)
    assert a == b


def _pigeonhole(holes):
    """holes+1 pigeons into `holes` holes; always unsat."""
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    cnf = [tuple(var(p, h) for h in range(holes)) for p in range(pigeons)]
    for h in range(holes):
        for p1, p2 in itertools.combinations(range(pigeons), 2):
            cnf.append((-var(p1, h), -var(p2, h)))
    return cnf


@pytest.mark.parametrize("holes", [2, 3, 4])
def test_pigeonhole_unsat(holes):
    assert sat_solve(_pigeonhole(holes)).status == "unsat"


def test_agreement_with_enumeration():
    rng = np.random.default_rng(19)
    n_sat = n_unsat = 0
    for _ in range(300):
        n = int(rng.integers(2, 15))
        m = int(rng.integers(1, 5 * n))
        cnf = random_cnf(rng, n, m, 1, 3)
        expect = cnf_satisfiable(cnf, list(range(1, n + 1)))
        got = sat_solve(cnf, variables=range(1, n + 1), seed=int(rng.integers(99)))
        assert (got.status == "sat") == expect
        if expect:
            n_sat += 1
            assert set(got.model) == set(range(1, n + 1))
        else:
            n_unsat += 1
    assert n_sat > 30 and n_unsat > 30


def test_dense_unsat_instances():
    rng = np.random.default_rng(5)
    for seed in range(5):
        from qbfmp import random_ksat

        cnf = random_ksat(40, 400, 3, seed=seed)   # density 10: surely unsat
        assert sat_solve(cnf, seed=seed).status == "unsat"
