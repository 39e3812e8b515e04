"""Clause factor graphs and belief propagation on CNF matrices.

Quantifiers play no role here: BP treats every variable the same way and is
applied to the matrix only.  A message pair lives on each clause-variable
edge: psi[e] is the probability that variable i of edge e = (i, a)
dissatisfies clause a, and u[e] is the probability that clause a warns
variable i.  Sweeps update edges one at a time in a random order drawn from a
seeded PCG64 generator, so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels


@dataclass(frozen=True)
class BpParams:
    """Iteration controls shared by the BP and SP drivers."""

    t_max: int = 300
    epsilon: float = 1e-7
    damping: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0, 1)")


class FactorGraph:
    """Bipartite occurrence structure of a CNF matrix.

    Variables may be supplied explicitly so that variables without any
    occurrence (isolated) still get marginals; otherwise the variable set is
    read off the matrix.  Edges are stored clause-major.
    """

    def __init__(self, matrix, variables=None):
        matrix = tuple(tuple(c) for c in matrix)
        if variables is None:
            variables = sorted({abs(l) for c in matrix for l in c})
        self.var_ids = tuple(variables)
        if len(set(self.var_ids)) != len(self.var_ids):
            raise ValueError("duplicate variable ids")
        self.var_index = {v: j for j, v in enumerate(self.var_ids)}
        self.matrix = matrix
        self.n_vars = len(self.var_ids)
        self.n_clauses = len(matrix)

        edge_var = []
        edge_sign = []
        clause_ptr = [0]
        for clause in matrix:
            if not clause:
                raise ValueError("empty clause in matrix")
            seen = set()
            for lit in clause:
                v = abs(lit)
                if v in seen:
                    raise ValueError(f"variable {v} repeated within a clause")
                seen.add(v)
                try:
                    edge_var.append(self.var_index[v])
                except KeyError:
                    raise ValueError(f"variable {v} missing from variables") from None
                edge_sign.append(1 if lit > 0 else -1)
            clause_ptr.append(len(edge_var))
        self.n_edges = len(edge_var)
        self.edge_var = np.asarray(edge_var, dtype=np.int32)
        self.edge_sign = np.asarray(edge_sign, dtype=np.int8)
        self.clause_ptr = np.asarray(clause_ptr, dtype=np.int32)

        self.edge_clause = np.empty(self.n_edges, dtype=np.int32)
        for a in range(self.n_clauses):
            self.edge_clause[clause_ptr[a]:clause_ptr[a + 1]] = a

        # edges grouped by variable
        counts = np.zeros(self.n_vars + 1, dtype=np.int32)
        for j in edge_var:
            counts[j + 1] += 1
        self.var_ptr = np.cumsum(counts, dtype=np.int32)
        fill = self.var_ptr[:-1].copy()
        self.var_edge = np.empty(self.n_edges, dtype=np.int32)
        for e, j in enumerate(edge_var):
            self.var_edge[fill[j]] = e
            fill[j] += 1

    def edge_index(self, var: int, clause: int) -> int:
        """Edge id of variable var's occurrence in clause (by index)."""
        j = self.var_index[var]
        for e in range(self.clause_ptr[clause], self.clause_ptr[clause + 1]):
            if self.edge_var[e] == j:
                return e
        raise KeyError(f"variable {var} does not occur in clause {clause}")

    def clause_literals(self, clause: int) -> tuple:
        return self.matrix[clause]

    def occurrences(self, var: int, sign: int) -> list:
        """Clause indices where var occurs with the given sign (+1 or -1)."""
        j = self.var_index[var]
        out = []
        for k in range(self.var_ptr[j], self.var_ptr[j + 1]):
            e = self.var_edge[k]
            if self.edge_sign[e] == sign:
                out.append(int(self.edge_clause[e]))
        return out

    def pos_occurrences(self, var: int) -> list:
        return self.occurrences(var, 1)

    def neg_occurrences(self, var: int) -> list:
        return self.occurrences(var, -1)

    def same_sign_clauses(self, var: int, clause: int) -> list:
        """Clauses where var appears with the same sign as in clause, minus it."""
        e = self.edge_index(var, clause)
        sign = int(self.edge_sign[e])
        return [a for a in self.occurrences(var, sign) if a != clause]

    def opposite_sign_clauses(self, var: int, clause: int) -> list:
        e = self.edge_index(var, clause)
        sign = int(self.edge_sign[e])
        return self.occurrences(var, -sign)

    def degree(self, var: int) -> int:
        j = self.var_index[var]
        return int(self.var_ptr[j + 1] - self.var_ptr[j])


def build_graph(matrix, variables=None) -> FactorGraph:
    return FactorGraph(matrix, variables)


@dataclass
class BpState:
    """Message arrays after a run, indexed by edge id."""

    u: np.ndarray
    psi: np.ndarray
    sweeps: int
    residual: float


class BpResult(NamedTuple):
    state: BpState
    converged: bool
    sweeps: int


def bp_run(graph: FactorGraph, params: Optional[BpParams] = None) -> BpResult:
    """Iterate BP to a fixed point or until t_max sweeps.

    Messages start at psi = 1/2 and u uniform on [0.01, 0.99]; each sweep
    visits every edge once in a fresh random permutation.  The run converges
    when the largest message change in a sweep drops below epsilon.
    """
    if params is None:
        params = BpParams()
    rng = np.random.default_rng(params.seed)
    u = rng.uniform(0.01, 0.99, size=graph.n_edges)
    psi = np.full(graph.n_edges, 0.5)
    residual = np.inf
    for sweep in range(1, params.t_max + 1):
        order = rng.permutation(graph.n_edges)
        residual = kernels.bp_sweep(
            graph.edge_var, graph.edge_clause, graph.edge_sign,
            graph.var_ptr, graph.var_edge, graph.clause_ptr,
            u, psi, order, params.damping,
        )
        if residual < params.epsilon:
            return BpResult(BpState(u, psi, sweep, float(residual)), True, sweep)
    return BpResult(BpState(u, psi, params.t_max, float(residual)), False, params.t_max)


CLAMP = 1e-12


def bp_marginals(graph: FactorGraph, state: BpState) -> dict:
    """Per-variable probability psi_plus of being true, from the u messages.

    Isolated variables come out at exactly 1/2 (empty products).
    """
    out = {}
    u = state.u
    for v in graph.var_ids:
        j = graph.var_index[v]
        num = 1.0
        alt = 1.0
        for k in range(graph.var_ptr[j], graph.var_ptr[j + 1]):
            e = graph.var_edge[k]
            uf = u[e]
            if uf < CLAMP:
                uf = CLAMP
            elif uf > 1.0 - CLAMP:
                uf = 1.0 - CLAMP
            if graph.edge_sign[e] > 0:
                num *= 1.0 - uf
                alt *= uf
            else:
                num *= uf
                alt *= 1.0 - uf
        out[v] = float(num / (num + alt))
    return out
