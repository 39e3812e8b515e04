"""Message-passing inference, decimation provers, and complete solvers for
quantified Boolean formulas in prenex CNF.
"""

from .formula import (
    Assignment,
    Clause,
    EXISTENTIAL,
    FormulaError,
    Matrix,
    QbfFormula,
    QuantBlock,
    UNIVERSAL,
    condition,
    load_qdimacs,
    parse_qdimacs,
    residual_existential,
    save_qdimacs,
    to_two_alternation,
    write_qdimacs,
)
from .mp_core import BpParams, BpResult, BpState, FactorGraph, bp_marginals, bp_run, build_graph
from .sp import SpResult, SpState, is_nontrivial, sp_marginals, sp_run, trivial_state
from .heuristics import (
    Bias,
    DecisionOrder,
    OrderEntry,
    VsidsScorer,
    bpdh_order,
    bph_order,
    check_order,
    compute_bias,
    index_order,
    make_heuristic,
    vsids_order,
)
from .sat import SatResult, sat_solve
from .qdpll import QdpllResult, SolverStats, brute_force_eval, qdpll_solve
from .decimation import (
    DecimationStep,
    UnsatProofAttempt,
    bpdu,
    bpspdu,
    greedy_universal,
    prove_unsat,
)
from .gen import GeneratorSpec, gen_formula, gen_lk, gen_model_b, random_ksat
from .bench import SweepRow, SweepSpec, load_sweep, run_sweep
from .kernels import BACKEND, available_backends

__version__ = "0.1.0"
