"""Prenex-CNF quantified Boolean formulas: data model, QDIMACS I/O, conditioning.

Literals are nonzero signed integers in the DIMACS convention: ``v`` denotes
the positive literal of variable ``v >= 1`` and ``-v`` its negation.  A clause
is a tuple of literals, a matrix is a tuple of clauses, and an assignment is a
plain ``dict`` mapping variable index to bool.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Union

UNIVERSAL = "a"
EXISTENTIAL = "e"

Clause = tuple[int, ...]
Matrix = tuple[Clause, ...]
Assignment = dict


class FormulaError(ValueError):
    """Malformed QDIMACS input or a violated structural invariant."""


@dataclass(frozen=True)
class QuantBlock:
    """A maximal run of equally quantified variables in the prefix."""

    quantifier: str
    variables: tuple[int, ...]

    def __post_init__(self):
        if self.quantifier not in (UNIVERSAL, EXISTENTIAL):
            raise FormulaError(f"unknown quantifier {self.quantifier!r}")


@dataclass(frozen=True)
class QbfFormula:
    """A prenex-CNF formula: quantifier prefix plus clause matrix."""

    prefix: tuple[QuantBlock, ...]
    matrix: Matrix

    @cached_property
    def _quantifier_of(self) -> dict:
        out = {}
        for block in self.prefix:
            for v in block.variables:
                out[v] = block.quantifier
        return out

    @property
    def num_clauses(self) -> int:
        return len(self.matrix)

    @property
    def num_universal(self) -> int:
        return sum(len(b.variables) for b in self.prefix if b.quantifier == UNIVERSAL)

    @property
    def num_existential(self) -> int:
        return sum(len(b.variables) for b in self.prefix if b.quantifier == EXISTENTIAL)

    @property
    def num_alternations(self) -> int:
        """Number of blocks in the prefix (adjacent blocks always differ)."""
        return len(self.prefix)

    @property
    def alpha_e(self) -> float:
        """Clause density per existential variable, M / N_e."""
        return self.num_clauses / self.num_existential

    @property
    def alpha_u(self) -> float:
        return self.num_clauses / self.num_universal

    def variables(self) -> tuple[int, ...]:
        """All quantified variables in prefix order."""
        return tuple(v for b in self.prefix for v in b.variables)

    def universal_variables(self) -> tuple[int, ...]:
        return tuple(
            v for b in self.prefix if b.quantifier == UNIVERSAL for v in b.variables
        )

    def existential_variables(self) -> tuple[int, ...]:
        return tuple(
            v for b in self.prefix if b.quantifier == EXISTENTIAL for v in b.variables
        )

    def quantifier_of(self, var: int) -> str:
        try:
            return self._quantifier_of[var]
        except KeyError:
            raise FormulaError(f"variable {var} is not quantified") from None

    def is_universal(self, var: int) -> bool:
        return self.quantifier_of(var) == UNIVERSAL

    def validate(self) -> None:
        """Raise FormulaError if a structural invariant is violated."""
        seen = set()
        for idx, block in enumerate(self.prefix):
            if not block.variables:
                raise FormulaError("empty quantifier block")
            if idx and block.quantifier == self.prefix[idx - 1].quantifier:
                raise FormulaError("adjacent blocks share a quantifier")
            for v in block.variables:
                if v < 1:
                    raise FormulaError(f"bad variable index {v}")
                if v in seen:
                    raise FormulaError(f"variable {v} quantified twice")
                seen.add(v)
        for clause in self.matrix:
            if not clause:
                raise FormulaError("empty clause in matrix")
            cvars = set()
            for lit in clause:
                if lit == 0:
                    raise FormulaError("zero literal in clause")
                v = abs(lit)
                if v not in seen:
                    raise FormulaError(f"variable {v} occurs but is not quantified")
                if v in cvars:
                    raise FormulaError(f"variable {v} repeated within a clause")
                cvars.add(v)


def _normalize_clause(lits: list) -> Union[Clause, None]:
    """Drop duplicate literals; return None for tautological clauses."""
    out = []
    seen = set()
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def parse_qdimacs(source) -> QbfFormula:
    """Parse QDIMACS text (a string or a readable file object)."""
    text = source.read() if hasattr(source, "read") else source
    header = None
    blocks: list[tuple[str, list]] = []
    clauses: list[Clause] = []
    pending: list[int] = []
    quantified: set = set()
    clauses_started = False

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise FormulaError("duplicate header line")
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise FormulaError(f"malformed header: {line!r}")
            try:
                header = (int(fields[2]), int(fields[3]))
            except ValueError:
                raise FormulaError(f"malformed header: {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise FormulaError(f"malformed header: {line!r}")
            continue
        if header is None:
            raise FormulaError("clause or quantifier line before header")
        if line[0] in (UNIVERSAL, EXISTENTIAL):
            if clauses_started:
                raise FormulaError("quantifier line after first clause")
            fields = line.split()
            try:
                nums = [int(t) for t in fields[1:]]
            except ValueError:
                raise FormulaError(f"bad quantifier line: {line!r}") from None
            if not nums or nums[-1] != 0:
                raise FormulaError("quantifier line missing 0 terminator")
            variables = nums[:-1]
            for v in variables:
                if v < 1 or v > header[0]:
                    raise FormulaError(f"variable {v} out of range")
                if v in quantified:
                    raise FormulaError(f"variable {v} quantified twice")
                quantified.add(v)
            if variables:
                blocks.append((fields[0], variables))
            continue
        # clause tokens; a clause may span lines, 0 terminates
        clauses_started = True
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise FormulaError(f"bad clause line: {line!r}") from None
        for n in nums:
            if n == 0:
                if not pending:
                    raise FormulaError("empty clause in input")
                clause = _normalize_clause(pending)
                pending = []
                if clause is not None:
                    clauses.append(clause)
            else:
                if abs(n) > header[0]:
                    raise FormulaError(f"literal {n} out of range")
                pending.append(n)

    if header is None:
        raise FormulaError("missing header line")
    if pending:
        raise FormulaError("clause missing 0 terminator")

    # free variables go into a trailing existential block
    free = sorted({abs(l) for c in clauses for l in c} - quantified)
    if free:
        blocks.append((EXISTENTIAL, free))

    merged: list[QuantBlock] = []
    for quant, variables in blocks:
        if merged and merged[-1].quantifier == quant:
            merged[-1] = QuantBlock(quant, merged[-1].variables + tuple(variables))
        else:
            merged.append(QuantBlock(quant, tuple(variables)))

    formula = QbfFormula(tuple(merged), tuple(clauses))
    formula.validate()
    return formula


def load_qdimacs(path) -> QbfFormula:
    with open(path, "r", encoding="ascii") as fh:
        return parse_qdimacs(fh)


def write_qdimacs(formula: QbfFormula) -> str:
    """Render the canonical QDIMACS text of a formula."""
    nvars = 0
    for block in formula.prefix:
        nvars = max(nvars, max(block.variables, default=0))
    for clause in formula.matrix:
        nvars = max(nvars, max((abs(l) for l in clause), default=0))
    lines = [f"p cnf {nvars} {formula.num_clauses}"]
    for block in formula.prefix:
        lines.append(f"{block.quantifier} {' '.join(map(str, block.variables))} 0")
    for clause in formula.matrix:
        lines.append(f"{' '.join(map(str, clause))} 0")
    return "\n".join(lines) + "\n"


def save_qdimacs(formula: QbfFormula, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_qdimacs(formula))


def condition(matrix: Iterable, assignment: Assignment) -> tuple[Matrix, bool]:
    """Fix variables in a matrix.

    Satisfied clauses are dropped, false literals are removed, and clauses
    that lose all their literals are dropped as well but reported through the
    returned flag.
    """
    out = []
    produced_empty = False
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
        if satisfied:
            continue
        if not kept:
            produced_empty = True
            continue
        out.append(tuple(kept))
    return tuple(out), produced_empty


def residual_existential(formula: QbfFormula, sigma_x: Assignment) -> Matrix:
    """Existential CNF left after playing sigma_x for the universal block.

    The formula must have the two-block shape (universal outer, existential
    inner) and sigma_x must assign exactly the universal variables.  Unlike
    condition(), clauses falsified outright are kept as empty clauses so the
    caller can see the contradiction.
    """
    if (
        len(formula.prefix) != 2
        or formula.prefix[0].quantifier != UNIVERSAL
        or formula.prefix[1].quantifier != EXISTENTIAL
    ):
        raise FormulaError("formula is not in universal-then-existential form")
    universals = set(formula.prefix[0].variables)
    if set(sigma_x) != universals:
        raise FormulaError("assignment does not cover exactly the universal block")
    out = []
    for clause in formula.matrix:
        kept = []
        satisfied = False
        for lit in clause:
            v = abs(lit)
            if v in universals:
                if sigma_x[v] == (lit > 0):
                    satisfied = True
                    break
            else:
                kept.append(lit)
        if not satisfied:
            out.append(tuple(kept))
    return tuple(out)


def to_two_alternation(formula: QbfFormula) -> QbfFormula:
    """Collapse the prefix to a single universal block followed by a single
    existential block, keeping the matrix unchanged.

    Evaluating the result under game semantics can only move the verdict
    toward unsatisfiability, so refuting it refutes the original.  Formulas
    with no universal variable are returned unchanged.
    """
    if formula.num_universal == 0:
        return formula
    if (
        len(formula.prefix) == 2
        and formula.prefix[0].quantifier == UNIVERSAL
        and formula.prefix[1].quantifier == EXISTENTIAL
    ):
        return formula
    uni = formula.universal_variables()
    exi = formula.existential_variables()
    blocks = [QuantBlock(UNIVERSAL, uni)]
    if exi:
        blocks.append(QuantBlock(EXISTENTIAL, exi))
    return QbfFormula(tuple(blocks), formula.matrix)
