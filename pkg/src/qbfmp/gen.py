"""Seeded random QBF generators: the (L,K) two-block model and model-B.

All randomness comes from numpy's PCG64 generator seeded with spec.seed.
Per clause the draw sequence is: variable indices first (uniform draws into
the pool, rejecting repeats, in literal order), then one fair-coin sign per
literal.  That stream derivation plus the seed reproduces any instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formula import EXISTENTIAL, QbfFormula, QuantBlock, UNIVERSAL


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one random ensemble point.

    model "lk": two blocks, clauses with l universal + k existential
    literals over n_u + n_e variables.  model "model_b": t alternating
    blocks (outermost universal) of n variables, clauses with u universal +
    v existential literals drawn from the matching pools.
    """

    model: str
    m: int
    seed: int = 0
    l: int = 0
    k: int = 0
    n_u: int = 0
    n_e: int = 0
    t: int = 0
    n: int = 0
    u: int = 0
    v: int = 0

    def validate(self) -> None:
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if self.model == "lk":
            if not 1 <= self.l <= self.n_u:
                raise ValueError("need 1 <= l <= n_u")
            if not 1 <= self.k <= self.n_e:
                raise ValueError("need 1 <= k <= n_e")
        elif self.model == "model_b":
            if self.t < 2:
                raise ValueError("need t >= 2 blocks")
            if self.n < 1:
                raise ValueError("need n >= 1 variables per block")
            if self.v < 1:
                raise ValueError("need v > 0 existential literals per clause")
            if self.u < 0:
                raise ValueError("need u >= 0")
            if self.u > self.n * ((self.t + 1) // 2):
                raise ValueError("u exceeds the universal pool")
            if self.v > self.n * (self.t // 2):
                raise ValueError("v exceeds the existential pool")
        else:
            raise ValueError(f"unknown model {self.model!r}")

    @property
    def existential_count(self) -> int:
        return self.n_e if self.model == "lk" else self.n * (self.t // 2)


def _sample_distinct(rng, n_items: int, count: int) -> list:
    """Uniform draw of `count` distinct indices in [0, n_items), draw order."""
    out: list = []
    while len(out) < count:
        x = int(rng.integers(n_items))
        if x not in out:
            out.append(x)
    return out


def _clause(rng, pools, counts) -> tuple:
    lits = []
    for pool, count in zip(pools, counts):
        for idx in _sample_distinct(rng, len(pool), count):
            lits.append(pool[idx])
    signs = rng.integers(2, size=len(lits))
    return tuple(v if s else -v for v, s in zip(lits, signs))


def gen_lk(spec: GeneratorSpec) -> QbfFormula:
    """Two-block instance: universals 1..n_u, existentials n_u+1..n_u+n_e."""
    spec.validate()
    if spec.model != "lk":
        raise ValueError("spec.model must be lk")
    rng = np.random.default_rng(spec.seed)
    universals = tuple(range(1, spec.n_u + 1))
    existentials = tuple(range(spec.n_u + 1, spec.n_u + spec.n_e + 1))
    matrix = tuple(
        _clause(rng, (universals, existentials), (spec.l, spec.k))
        for _ in range(spec.m)
    )
    prefix = (QuantBlock(UNIVERSAL, universals), QuantBlock(EXISTENTIAL, existentials))
    f = QbfFormula(prefix, matrix)
    f.validate()
    return f


def gen_model_b(spec: GeneratorSpec) -> QbfFormula:
    """t alternating blocks of n variables; block j holds j*n+1 .. (j+1)*n."""
    spec.validate()
    if spec.model != "model_b":
        raise ValueError("spec.model must be model_b")
    rng = np.random.default_rng(spec.seed)
    blocks = []
    uni_pool: list = []
    exi_pool: list = []
    for j in range(spec.t):
        variables = tuple(range(j * spec.n + 1, (j + 1) * spec.n + 1))
        if j % 2 == 0:
            blocks.append(QuantBlock(UNIVERSAL, variables))
            uni_pool.extend(variables)
        else:
            blocks.append(QuantBlock(EXISTENTIAL, variables))
            exi_pool.extend(variables)
    matrix = tuple(
        _clause(rng, (tuple(uni_pool), tuple(exi_pool)), (spec.u, spec.v))
        for _ in range(spec.m)
    )
    f = QbfFormula(tuple(blocks), matrix)
    f.validate()
    return f


def gen_formula(spec: GeneratorSpec) -> QbfFormula:
    return gen_lk(spec) if spec.model == "lk" else gen_model_b(spec)


def random_ksat(n: int, m: int, k: int, seed: int = 0) -> tuple:
    """Plain random k-SAT matrix over variables 1..n (no quantifiers).

    Same per-clause draw sequence as the QBF models; used by the SP regime
    tests and the kernel benchmark.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    rng = np.random.default_rng(seed)
    pool = tuple(range(1, n + 1))
    return tuple(_clause(rng, (pool,), (k,)) for _ in range(m))
