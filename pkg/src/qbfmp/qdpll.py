"""Complete QBF solver: pure DPLL with prefix-respecting decisions.

Search follows the game reading of the prefix.  Decisions are only taken in
the outermost quantifier block that still has unassigned variables.  A
conflict (falsified clause, or a unit clause whose surviving literal is
universal) flips the most recent unflipped existential decision, and with
none left the formula is unsat.  A solution (every clause satisfied) is
counted as a solution leaf and flips the most recent unflipped universal
decision; with none left the formula is sat.  There is no clause learning
and no back-jumping.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .formula import EXISTENTIAL, QbfFormula, UNIVERSAL
from .heuristics import VsidsScorer, make_heuristic
from .mp_core import BpParams

_IMPLIED = 0
_DECISION = 1
_FLIPPED = 2


@dataclass
class SolverStats:
    decisions: int = 0
    conflicts: int = 0
    solutions: int = 0
    propagations: int = 0
    wall_time: float = 0.0


class QdpllResult(NamedTuple):
    status: str  # "sat", "unsat", or "unknown" (time limit, CLI layer only)
    stats: SolverStats


def qdpll_solve(f: QbfFormula, heuristic="index", seed: int = 0,
                bp_params: Optional[BpParams] = None,
                time_limit: Optional[float] = None) -> QdpllResult:
    """Decide a prenex-CNF QBF under game semantics.

    `heuristic` is a name (vsids, bph, bpdh, index), a static decision order
    (sequence of OrderEntry), or a VsidsScorer.  The seed feeds the BP runs
    behind bph/bpdh.  `time_limit` is for the CLI and bench layers; the
    default is an unbounded run.
    """
    if isinstance(heuristic, str):
        heuristic = make_heuristic(heuristic, f, bp_params or BpParams(seed=seed))
    return _Search(f, heuristic, time_limit).run()


class _Search:
    def __init__(self, f: QbfFormula, heuristic, time_limit):
        self.f = f
        order = f.variables()
        self.var_ids = order
        self.index = {v: j for j, v in enumerate(order)}
        n = len(order)
        self.value = [0] * n               # 0 unassigned, 1 true, -1 false
        self.is_uni = [False] * n
        self.block_of = [0] * n
        self.blocks: list = []
        j = 0
        for b, block in enumerate(f.prefix):
            members = []
            for v in block.variables:
                self.is_uni[j] = block.quantifier == UNIVERSAL
                self.block_of[j] = b
                members.append(j)
                j += 1
            self.blocks.append(members)
        self.block_unassigned = [len(m) for m in self.blocks]

        m = f.num_clauses
        self.clause_lits: list = []
        self.clen = [0] * m
        self.occ: list = [[] for _ in range(2 * n)]
        for a, clause in enumerate(f.matrix):
            lits = []
            for lit in clause:
                enc = 2 * self.index[abs(lit)] + (0 if lit > 0 else 1)
                lits.append(enc)
                self.occ[enc].append(a)
            self.clause_lits.append(lits)
            self.clen[a] = len(lits)
        self.n_true = [0] * m
        self.n_false = [0] * m
        self.sat_count = 0
        self.n_clauses = m
        self.pending = deque(a for a in range(m) if self.clen[a] == 1)
        self.has_empty = any(self.clen[a] == 0 for a in range(m))

        self.trail_var: list = []
        self.trail_kind: list = []
        self.stats = SolverStats()
        self.time_limit = time_limit

        if isinstance(heuristic, VsidsScorer):
            self.scorer = heuristic
            self.block_rank = None
        else:
            self.scorer = None
            # per-block static ranking, outer blocks first
            rank: list = [[] for _ in self.blocks]
            for entry in heuristic:
                jdx = self.index[entry.variable]
                rank[self.block_of[jdx]].append((jdx, entry.first_sign))
            self.block_rank = rank

    def _assign(self, var: int, val: int, kind: int) -> None:
        self.value[var] = val
        self.block_unassigned[self.block_of[var]] -= 1
        self.trail_var.append(var)
        self.trail_kind.append(kind)
        tl = 2 * var + (0 if val == 1 else 1)
        n_true = self.n_true
        for a in self.occ[tl]:
            if n_true[a] == 0:
                self.sat_count += 1
            n_true[a] += 1
        n_false = self.n_false
        pending = self.pending
        for a in self.occ[tl ^ 1]:
            n_false[a] += 1
            if n_true[a] == 0:
                pending.append(a)

    def _unassign(self, var: int) -> None:
        val = self.value[var]
        self.value[var] = 0
        self.block_unassigned[self.block_of[var]] += 1
        tl = 2 * var + (0 if val == 1 else 1)
        n_true = self.n_true
        for a in self.occ[tl]:
            n_true[a] -= 1
            if n_true[a] == 0:
                self.sat_count -= 1
        n_false = self.n_false
        for a in self.occ[tl ^ 1]:
            n_false[a] -= 1

    def _propagate(self):
        """Drain the queue; returns a conflicting clause index or None."""
        pending = self.pending
        value = self.value
        while pending:
            a = pending.popleft()
            if self.n_true[a] > 0:
                continue
            rem = self.clen[a] - self.n_false[a]
            if rem > 1:
                continue
            if rem == 0:
                return a
            for lit in self.clause_lits[a]:
                if value[lit >> 1] == 0:
                    break
            var = lit >> 1
            if self.is_uni[var]:
                # the adversary falsifies the lone universal literal
                return a
            self.stats.propagations += 1
            self._assign(var, 1 if (lit & 1) == 0 else -1, _IMPLIED)
        return None

    def _backtrack(self, want_universal: bool) -> bool:
        """Flip the most recent unflipped decision of the wanted kind.

        Everything above it is unassigned.  Returns False when no such
        decision exists (search space exhausted).
        """
        self.pending.clear()
        trail_var = self.trail_var
        trail_kind = self.trail_kind
        while trail_var:
            var = trail_var.pop()
            kind = trail_kind.pop()
            wanted = (
                kind == _DECISION
                and self.is_uni[var] == want_universal
            )
            old = self.value[var]
            self._unassign(var)
            if wanted:
                self._assign(var, -old, _FLIPPED)
                return True
        return False

    def _decide(self) -> None:
        # scanning from block 0 guarantees prefix legality: every block
        # before blk has no unassigned variable left
        blk = 0
        while self.block_unassigned[blk] == 0:
            blk += 1
        assert self.block_unassigned[blk] > 0
        if self.scorer is not None:
            candidates = [
                self.var_ids[j] for j in self.blocks[blk] if self.value[j] == 0
            ]
            var, sign = self.scorer.pick(candidates)
            jdx = self.index[var]
        else:
            for jdx, sign in self.block_rank[blk]:
                if self.value[jdx] == 0:
                    break
        self.stats.decisions += 1
        self._assign(jdx, 1 if sign else -1, _DECISION)

    def run(self) -> QdpllResult:
        t0 = time.perf_counter()
        stats = self.stats
        status = None
        if self.has_empty:
            status = "unsat"
        n = len(self.value)
        ticks = 0
        while status is None:
            ticks += 1
            if self.time_limit is not None and ticks % 256 == 0:
                if time.perf_counter() - t0 > self.time_limit:
                    status = "unknown"
                    break
            confl = self._propagate()
            if confl is not None:
                stats.conflicts += 1
                if self.scorer is not None:
                    self.scorer.notify_conflict()
                if not self._backtrack(want_universal=False):
                    status = "unsat"
            elif self.sat_count == self.n_clauses:
                stats.solutions += 1
                if not self._backtrack(want_universal=True):
                    status = "sat"
            else:
                self._decide()
        stats.wall_time = time.perf_counter() - t0
        return QdpllResult(status, stats)


def brute_force_eval(f: QbfFormula) -> str:
    """Exhaustive game-tree evaluation over all 2^n assignments.

    The leaf table is folded one prefix level at a time, innermost first:
    AND over the two child halves at universal levels, OR at existential
    ones.  Only meant as a test oracle; limited to 24 variables.
    """
    order = f.variables()
    n = len(order)
    if n > 24:
        raise ValueError("brute_force_eval is limited to 24 variables")
    pos = {v: j for j, v in enumerate(order)}
    idx = np.arange(1 << n, dtype=np.uint32)
    mask = np.ones(1 << n, dtype=bool)
    for clause in f.matrix:
        csat = np.zeros(1 << n, dtype=bool)
        for lit in clause:
            shift = n - 1 - pos[abs(lit)]
            bit = (idx >> np.uint32(shift)) & np.uint32(1)
            csat |= (bit == 1) if lit > 0 else (bit == 0)
        mask &= csat
    for j in range(n - 1, -1, -1):
        pairs = mask.reshape(-1, 2)
        mask = pairs.all(axis=1) if f.is_universal(order[j]) else pairs.any(axis=1)
    return "sat" if bool(mask[0]) else "unsat"
