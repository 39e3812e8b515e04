"""Survey propagation on CNF matrices.

Each edge carries a warning triple (psi_u, psi_s, psi_star): the weights of
variable i being constrained to dissatisfy clause a, constrained to satisfy
it, or unconstrained, plus a clause message u.  The all-ones u with triples
(0, 0, 1) is always a fixed point (the trivial one); a run is interesting
when it converges somewhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .mp_core import BpParams, FactorGraph


@dataclass
class SpState:
    """Message arrays after an SP run, indexed by edge id."""

    u: np.ndarray
    psi_u: np.ndarray
    psi_s: np.ndarray
    psi_star: np.ndarray
    sweeps: int
    residual: float
    joker_events: int

    def eta(self) -> np.ndarray:
        """Surveys in the warning convention: eta = 1 - u, 0 when trivial."""
        return 1.0 - self.u


class SpResult(NamedTuple):
    state: SpState
    converged: bool
    sweeps: int


def trivial_state(graph: FactorGraph) -> SpState:
    """The exact trivial fixed point: u = 1, triples (0, 0, 1)."""
    n = graph.n_edges
    return SpState(
        u=np.ones(n),
        psi_u=np.zeros(n),
        psi_s=np.zeros(n),
        psi_star=np.ones(n),
        sweeps=0,
        residual=0.0,
        joker_events=0,
    )


def sp_run(graph: FactorGraph, params: Optional[BpParams] = None,
           restarts: int = 1) -> SpResult:
    """Iterate SP to a fixed point or until t_max sweeps.

    Initialization and scheduling mirror bp_run.  With restarts > 1 the run
    is repeated from fresh random messages until one converges to a
    nontrivial fixed point; the last attempt is returned otherwise.
    """
    if params is None:
        params = BpParams()
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    rng = np.random.default_rng(params.seed)
    result = None
    for _ in range(restarts):
        u = rng.uniform(0.01, 0.99, size=graph.n_edges)
        third = 1.0 / 3.0
        psi_u = np.full(graph.n_edges, third)
        psi_s = np.full(graph.n_edges, third)
        psi_star = np.full(graph.n_edges, third)
        residual = np.inf
        jokers = 0
        converged = False
        sweeps = params.t_max
        for sweep in range(1, params.t_max + 1):
            order = rng.permutation(graph.n_edges)
            residual, new_jokers = kernels.sp_sweep(
                graph.edge_var, graph.edge_clause, graph.edge_sign,
                graph.var_ptr, graph.var_edge, graph.clause_ptr,
                u, psi_u, psi_s, psi_star, order, params.damping,
            )
            jokers += new_jokers
            if residual < params.epsilon:
                converged = True
                sweeps = sweep
                break
        state = SpState(u, psi_u, psi_s, psi_star, sweeps, float(residual), jokers)
        result = SpResult(state, converged, sweeps)
        if converged and is_nontrivial(state):
            return result
    return result


def is_nontrivial(state: SpState, eps_trivial: float = 1e-3) -> bool:
    """True when some clause message departs from the trivial value 1."""
    if state.u.size == 0:
        return False
    return bool(1.0 - state.u.min() > eps_trivial)


CLAMP = 1e-12


def sp_marginals(graph: FactorGraph, state: SpState) -> dict:
    """Per-variable triple (psi_plus, psi_star, psi_minus).

    psi_plus is the weight of being constrained true, psi_minus constrained
    false, psi_star unconstrained; the triple is normalized.  Isolated
    variables come out (0, 1, 0).
    """
    out = {}
    u = state.u
    for v in graph.var_ids:
        j = graph.var_index[v]
        p_pos = 1.0
        p_neg = 1.0
        for k in range(graph.var_ptr[j], graph.var_ptr[j + 1]):
            e = graph.var_edge[k]
            uf = u[e]
            if uf < CLAMP:
                uf = CLAMP
            if graph.edge_sign[e] > 0:
                p_pos *= uf
            else:
                p_neg *= uf
        w_plus = (1.0 - p_pos) * p_neg
        w_minus = (1.0 - p_neg) * p_pos
        w_star = p_pos * p_neg
        tot = w_plus + w_minus + w_star
        if tot == 0.0:
            out[v] = (0.0, 1.0, 0.0)
        else:
            out[v] = (float(w_plus / tot), float(w_star / tot), float(w_minus / tot))
    return out
