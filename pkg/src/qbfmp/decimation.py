"""Heuristic unsatisfiability provers for two-block QBF.

The decimation provers repeatedly run message passing on the conditioned
matrix (quantifiers ignored), fix the most biased unfixed universal variable
AGAINST its bias, and simplify.  Once the universal block is fully assigned,
the surviving existential clauses go to the complete SAT backend: an unsat
residual is a proof that the QBF is false (one refuting universal assignment
suffices).  A sat residual proves nothing, so the outcome is unknown.

BPDU uses BP biases; BPSPDU tries SP first at each step and falls back to BP
whenever SP fails to converge to a nontrivial fixed point.  The greedy
baseline skips message passing and assigns each universal variable by the
majority sign rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .formula import (
    EXISTENTIAL,
    FormulaError,
    QbfFormula,
    UNIVERSAL,
    condition,
    residual_existential,
    to_two_alternation,
)
from .heuristics import NONE, POSITIVE, compute_bias
from .mp_core import BpParams, FactorGraph, bp_marginals, bp_run
from .sat import sat_solve
from .sp import is_nontrivial, sp_marginals, sp_run

UNSAT_PROVED = "unsat_proved"
UNSAT_EARLY = "unsat_early"
UNKNOWN = "unknown"


@dataclass
class DecimationStep:
    """One fixing: which variable, which value, from which marginals."""

    variable: int
    value: bool
    magnitude: float
    converged: bool
    source: str  # "bp" or "sp"


@dataclass
class UnsatProofAttempt:
    outcome: str
    universal_witness: dict
    residual_clause_count: int
    steps: list = field(default_factory=list)


def _check_prefix(f: QbfFormula) -> None:
    if len(f.prefix) > 2:
        raise FormulaError(
            "prover needs a two-block prefix; collapse with to_two_alternation"
        )
    quants = [b.quantifier for b in f.prefix]
    if quants not in ([], [EXISTENTIAL], [UNIVERSAL], [UNIVERSAL, EXISTENTIAL]):
        raise FormulaError(
            "prover needs a two-block prefix; collapse with to_two_alternation"
        )


def _residual_keep_empty(matrix, assignment: dict):
    """Condition, but keep falsified clauses as empty clauses."""
    out = []
    for clause in matrix:
        kept = []
        satisfied = False
        for lit in clause:
            val = assignment.get(abs(lit))
            if val is None:
                kept.append(lit)
            elif val == (lit > 0):
                satisfied = True
                break
        if not satisfied:
            out.append(tuple(kept))
    return tuple(out)


def _finish(f: QbfFormula, witness: dict, steps: list,
            seed: int) -> UnsatProofAttempt:
    """All universals fixed; decide the existential residual."""
    if f.num_existential > 0 and f.num_universal > 0:
        residual = residual_existential(f, witness)
    else:
        residual = _residual_keep_empty(f.matrix, witness)
    verdict = sat_solve(residual, variables=f.existential_variables(), seed=seed)
    outcome = UNSAT_PROVED if verdict.status == "unsat" else UNKNOWN
    return UnsatProofAttempt(outcome, witness, len(residual), steps)


def _decimate(f: QbfFormula, params: Optional[BpParams], use_sp: bool) -> UnsatProofAttempt:
    if params is None:
        params = BpParams()
    _check_prefix(f)
    unfixed = sorted(f.universal_variables())
    existentials = set(f.existential_variables())
    matrix = f.matrix
    witness: dict = {}
    steps: list = []
    while unfixed:
        variables = sorted({abs(l) for c in matrix for l in c} | set(unfixed))
        graph = FactorGraph(matrix, variables=variables)
        marginals = None
        source = "bp"
        converged = False
        if use_sp:
            sp_result = sp_run(graph, params)
            if sp_result.converged and is_nontrivial(sp_result.state):
                marginals = sp_marginals(graph, sp_result.state)
                source = "sp"
                converged = True
        if marginals is None:
            bp_result = bp_run(graph, params)
            marginals = bp_marginals(graph, bp_result.state)
            converged = bp_result.converged
        biases = {b.variable: b for b in compute_bias(marginals)}
        pick = max(unfixed, key=lambda v: (biases[v].magnitude, -v))
        bias = biases[pick]
        # fix against the bias; unbiased variables default to false
        value = False if bias.favored_sign == NONE else bias.favored_sign != POSITIVE
        witness[pick] = value
        steps.append(DecimationStep(pick, value, bias.magnitude, converged, source))
        unfixed.remove(pick)
        matrix, emptied = condition(matrix, {pick: value})
        if emptied:
            for v in unfixed:
                witness[v] = False
            return UnsatProofAttempt(UNSAT_EARLY, witness, len(matrix), steps)
    return _finish(f, witness, steps, params.seed)


def bpdu(f: QbfFormula, params: Optional[BpParams] = None) -> UnsatProofAttempt:
    """BP-guided universal decimation."""
    return _decimate(f, params, use_sp=False)


def bpspdu(f: QbfFormula, params: Optional[BpParams] = None) -> UnsatProofAttempt:
    """SP-first universal decimation with per-step BP fallback."""
    return _decimate(f, params, use_sp=True)


def greedy_universal(f: QbfFormula) -> dict:
    """Majority-sign assignment: true where the negated occurrences win.

    Each universal variable is set to falsify as many of its literals as
    possible; ties go to false.
    """
    _check_prefix(f)
    n_pos: dict = {}
    n_neg: dict = {}
    for v in f.universal_variables():
        n_pos[v] = 0
        n_neg[v] = 0
    for clause in f.matrix:
        for lit in clause:
            v = abs(lit)
            if v in n_pos:
                if lit > 0:
                    n_pos[v] += 1
                else:
                    n_neg[v] += 1
    return {v: n_neg[v] > n_pos[v] for v in n_pos}


def prove_unsat(f: QbfFormula, method: str,
                params: Optional[BpParams] = None) -> UnsatProofAttempt:
    """Uniform driver over the provers; collapses deeper prefixes first.

    Refuting the collapsed two-block form refutes the original formula, so
    an unsat outcome here is always a valid claim about f itself.
    """
    if params is None:
        params = BpParams()
    if len(f.prefix) > 2 or [b.quantifier for b in f.prefix] == [EXISTENTIAL, UNIVERSAL]:
        f = to_two_alternation(f)
    if method == "bpdu":
        return bpdu(f, params)
    if method == "bpspdu":
        return bpspdu(f, params)
    if method == "greedy":
        _check_prefix(f)
        witness = greedy_universal(f)
        return _finish(f, witness, [], params.seed)
    raise ValueError(f"unknown prover method {method!r}")
