"""Complete propositional SAT backend for residual formulas.

Conflict-driven clause learning with two-literal watching, first-UIP
learning, VSIDS-style activities with phase saving, and geometric restarts.
Instances here are small residuals, so there is no clause deletion.
"""

from __future__ import annotations

from random import Random
from typing import NamedTuple, Optional


class SatResult(NamedTuple):
    status: str  # "sat" or "unsat"
    model: Optional[dict]


def sat_solve(cnf, variables=None, seed: int = 0) -> SatResult:
    """Decide a propositional CNF; a returned model is verified first.

    The model covers every variable occurring in the clauses plus any extra
    ids passed in `variables`.  An empty clause makes the formula unsat, an
    empty CNF is sat with a model over just `variables`.
    """
    clauses = [tuple(c) for c in cnf]
    universe = {abs(l) for c in clauses for l in c}
    if variables is not None:
        universe.update(variables)
    if any(len(c) == 0 for c in clauses):
        return SatResult("unsat", None)
    solver = _Cdcl(sorted(universe), clauses, seed)
    model = solver.solve()
    if model is None:
        return SatResult("unsat", None)
    for clause in clauses:
        if not any(model[abs(l)] == (l > 0) for l in clause):
            raise AssertionError("internal error: model fails verification")
    return SatResult("sat", model)


_DECAY = 1.0 / 0.95
_RESCALE = 1e100
_RESTART_FIRST = 100
_RESTART_GROWTH = 1.5


class _Cdcl:
    """One-shot CDCL engine over variables renamed to 0..n-1.

    Literal encoding: variable j gives literals 2j (positive) and 2j+1
    (negative); l ^ 1 negates.
    """

    def __init__(self, universe, clauses, seed):
        self.universe = universe
        self.n = len(universe)
        self.index = {v: j for j, v in enumerate(universe)}
        self.assign = [0] * self.n          # 0 unassigned, 1 true, -1 false
        self.level = [0] * self.n
        self.reason: list = [None] * self.n
        self.phase = [False] * self.n
        rng = Random(seed)
        self.activity = [rng.random() * 1e-6 for _ in range(self.n)]
        self.var_inc = 1.0
        self.trail: list = []
        self.trail_lim: list = []
        self.qhead = 0
        self.clauses: list = []
        self.watches: list = [[] for _ in range(2 * self.n)]
        self.units: list = []
        seen_clauses = set()
        for clause in clauses:
            lits = []
            seen = set()
            tautology = False
            for l in clause:
                if -l in seen:
                    tautology = True
                    break
                if l not in seen:
                    seen.add(l)
                    j = self.index[abs(l)]
                    lits.append(2 * j if l > 0 else 2 * j + 1)
            if tautology:
                continue
            key = frozenset(lits)
            if key in seen_clauses:
                continue
            seen_clauses.add(key)
            if len(lits) == 1:
                self.units.append(lits[0])
            else:
                self._attach(lits)

    def _attach(self, lits) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        return ci

    def _value(self, lit) -> int:
        v = self.assign[lit >> 1]
        if v == 0:
            return 0
        return v if (lit & 1) == 0 else -v

    def _enqueue(self, lit, reason) -> None:
        v = lit >> 1
        self.assign[v] = 1 if (lit & 1) == 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.phase[v] = (lit & 1) == 0
        self.trail.append(lit)

    def _propagate(self):
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            fl = p ^ 1
            ws = self.watches[fl]
            self.watches[fl] = []
            kept = self.watches[fl]
            i = 0
            while i < len(ws):
                ci = ws[i]
                i += 1
                lits = self.clauses[ci]
                if lits[0] == fl:
                    lits[0], lits[1] = lits[1], lits[0]
                first = lits[0]
                if self._value(first) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(lits)):
                    if self._value(lits[k]) != -1:
                        lits[1], lits[k] = lits[k], lits[1]
                        self.watches[lits[1]].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if self._value(first) == -1:
                    kept.extend(ws[i:])
                    return ci
                self._enqueue(first, ci)
        return None

    def _bump(self, v) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > _RESCALE:
            scale = 1.0 / _RESCALE
            for j in range(self.n):
                self.activity[j] *= scale
            self.var_inc *= scale

    def _analyze(self, confl):
        """First-UIP learning; returns (learnt lits, backjump level)."""
        learnt = [0]
        seen = bytearray(self.n)
        counter = 0
        p = -1
        index = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        reason_lits = self.clauses[confl]
        while True:
            for q in reason_lits:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            v = p >> 1
            index -= 1
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            reason_lits = self.clauses[self.reason[v]]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            return learnt, 0
        # second watch = the deepest of the remaining literals
        best = max(range(1, len(learnt)), key=lambda k: self.level[learnt[k] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[learnt[1] >> 1]

    def _cancel_until(self, lvl) -> None:
        while len(self.trail_lim) > lvl:
            mark = self.trail_lim.pop()
            while len(self.trail) > mark:
                lit = self.trail.pop()
                self.assign[lit >> 1] = 0
        self.qhead = len(self.trail)

    def _decide(self) -> bool:
        best = -1
        best_act = -1.0
        for v in range(self.n):
            if self.assign[v] == 0 and self.activity[v] > best_act:
                best = v
                best_act = self.activity[v]
        if best < 0:
            return False
        self.trail_lim.append(len(self.trail))
        self._enqueue(2 * best if self.phase[best] else 2 * best + 1, None)
        return True

    def solve(self):
        for lit in self.units:
            val = self._value(lit)
            if val == -1:
                return None
            if val == 0:
                self._enqueue(lit, None)
        restart_limit = float(_RESTART_FIRST)
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self.trail_lim:
                    return None
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    ci = self._attach(learnt)
                    self._enqueue(learnt[0], ci)
                self.var_inc *= _DECAY
                since_restart += 1
                if since_restart >= restart_limit:
                    since_restart = 0
                    restart_limit *= _RESTART_GROWTH
                    self._cancel_until(0)
            elif not self._decide():
                return {
                    v: self.assign[self.index[v]] > 0 for v in self.universe
                }
