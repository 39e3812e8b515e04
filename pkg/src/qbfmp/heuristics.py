"""Decision heuristics: bias extraction, BPH / BPDH static orders, VSIDS.

BPH ranks all variables once by the bias of a single BP run on the full
matrix.  BPDH interleaves BP with conditioning: fix the most biased variable
of the outermost open block, simplify, rerun BP.  Universal variables take
the sign opposite to their bias (trying to break the formula), existential
variables follow their bias.  VSIDS is the occurrence-count baseline scorer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .formula import QbfFormula, condition
from .mp_core import BpParams, FactorGraph, bp_marginals, bp_run

POSITIVE = "positive"
NEGATIVE = "negative"
NONE = "none"


@dataclass(frozen=True)
class Bias:
    """Per-variable preference extracted from marginals."""

    variable: int
    favored_sign: str  # positive, negative, or none
    magnitude: float   # in [1/2, 1]


class OrderEntry(NamedTuple):
    variable: int
    first_sign: bool
    bias: float


# A static decision order: each variable exactly once, most decisive first.
DecisionOrder = list


def compute_bias(marginals: dict, tie_epsilon: float = 1e-6) -> list:
    """Turn BP marginals (floats psi_plus) or SP triples into Bias records.

    SP triples are (psi_plus, psi_star, psi_minus); the magnitude is taken on
    the pair renormalized without the joker weight.  An all-joker variable is
    unbiased with magnitude 1/2.
    """
    out = []
    for v in sorted(marginals):
        value = marginals[v]
        if isinstance(value, tuple):
            plus, _star, minus = value
            tot = plus + minus
            if tot == 0.0:
                out.append(Bias(v, NONE, 0.5))
                continue
            gap = abs(plus - minus)
            p = plus / tot
            m = minus / tot
        else:
            p = float(value)
            m = 1.0 - p
            gap = abs(p - m)
        if gap < tie_epsilon:
            out.append(Bias(v, NONE, max(p, m)))
        elif p > m:
            out.append(Bias(v, POSITIVE, p))
        else:
            out.append(Bias(v, NEGATIVE, m))
    return out


def _first_sign(bias: Bias, universal: bool) -> bool:
    if bias.favored_sign == NONE:
        return False
    favored = bias.favored_sign == POSITIVE
    return (not favored) if universal else favored


def bph_order(f: QbfFormula, params: Optional[BpParams] = None) -> DecisionOrder:
    """One-shot BP ranking of all variables by descending bias magnitude."""
    graph = FactorGraph(f.matrix, variables=f.variables())
    result = bp_run(graph, params)
    biases = compute_bias(bp_marginals(graph, result.state))
    ranked = sorted(biases, key=lambda b: (-b.magnitude, b.variable))
    return [
        OrderEntry(b.variable, _first_sign(b, f.is_universal(b.variable)), b.magnitude)
        for b in ranked
    ]


def bpdh_order(f: QbfFormula, params: Optional[BpParams] = None) -> DecisionOrder:
    """Decimation ranking: repeatedly fix the most biased variable of the
    outermost open block, condition the matrix, and rerun BP.

    An empty matrix or an empty clause stops the BP reruns; leftover
    variables are appended block by block in ascending index order with
    first_sign false.
    """
    order: DecisionOrder = []
    matrix = f.matrix
    blocks = [list(b.variables) for b in f.prefix]
    halted = False
    for block_idx, block in enumerate(blocks):
        universal = f.prefix[block_idx].quantifier == "a"
        remaining = sorted(block)
        while remaining:
            if halted or not matrix:
                for v in remaining:
                    order.append(OrderEntry(v, False, 0.5))
                break
            in_matrix = {abs(lit) for clause in matrix for lit in clause}
            graph = FactorGraph(matrix, variables=tuple(sorted(in_matrix | set(remaining))))
            result = bp_run(graph, params)
            biases = {
                b.variable: b for b in compute_bias(bp_marginals(graph, result.state))
            }
            pick = max(remaining, key=lambda v: (biases[v].magnitude, -v))
            bias = biases[pick]
            sign = _first_sign(bias, universal)
            order.append(OrderEntry(pick, sign, bias.magnitude))
            remaining.remove(pick)
            matrix, emptied = condition(matrix, {pick: sign})
            if emptied:
                halted = True
    return order


def check_order(order: DecisionOrder, f: QbfFormula) -> None:
    """Raise if the order does not cover each variable exactly once."""
    seen = [entry.variable for entry in order]
    if sorted(seen) != sorted(f.variables()):
        raise ValueError("decision order does not cover the variables exactly once")


def index_order(f: QbfFormula) -> DecisionOrder:
    """Prefix-order baseline: ascending index inside each block, sign false."""
    return [
        OrderEntry(v, False, 0.5)
        for block in f.prefix
        for v in sorted(block.variables)
    ]


class VsidsScorer:
    """Static literal-occurrence scores with periodic decay.

    Without clause learning no score is ever bumped, so decay (halving every
    decay_interval conflicts) never changes the argmax; it is kept for
    fidelity to the usual scheme.
    """

    def __init__(self, f: QbfFormula, decay_interval: int = 256,
                 decay_factor: float = 0.5):
        self.scores: dict = {}
        for v in f.variables():
            self.scores[v] = 0.0
            self.scores[-v] = 0.0
        for clause in f.matrix:
            for lit in clause:
                self.scores[lit] += 1.0
        self.decay_interval = decay_interval
        self.decay_factor = decay_factor
        self._conflicts = 0

    def notify_conflict(self) -> None:
        self._conflicts += 1
        if self._conflicts % self.decay_interval == 0:
            for lit in self.scores:
                self.scores[lit] *= self.decay_factor

    def pick(self, candidates) -> tuple:
        """Best literal among unassigned candidate variables.

        Max score wins; ties prefer the lower variable index, then the
        positive literal.
        """
        best = None
        for v in candidates:
            for lit, sign in ((v, True), (-v, False)):
                s = self.scores[lit]
                if best is None or s > best[0] or (s == best[0] and v < best[1]):
                    best = (s, v, sign)
        if best is None:
            raise ValueError("no candidates to pick from")
        return best[1], best[2]


def vsids_order(f: QbfFormula) -> VsidsScorer:
    """Dynamic scoring callback for the QBF solver."""
    return VsidsScorer(f)


def make_heuristic(name: str, f: QbfFormula,
                   params: Optional[BpParams] = None) -> Union[DecisionOrder, VsidsScorer]:
    """Resolve a heuristic name (vsids, bph, bpdh, index) for a formula."""
    if name == "vsids":
        return vsids_order(f)
    if name == "bph":
        return bph_order(f, params)
    if name == "bpdh":
        return bpdh_order(f, params)
    if name == "index":
        return index_order(f)
    raise ValueError(f"unknown heuristic {name!r}")
