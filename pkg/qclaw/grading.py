"""
Z-gradings compatible with an exchange matrix.

A vector d in Z^m is a grading vector when d^T B~ = 0, i.e. for every exchangeable k
the two monomials of the k-th exchange relation have the same degree. The set of such
vectors is a lattice, returned in row Hermite normal form.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

from .errors import (
    DimensionMismatch,
    HomogeneityViolation,
    NotHomogeneous,
    NotInLattice,
    ZeroElement,
)
from .laurent import LaurentPolynomial
from .qtorus import Matrix, TorusElement, as_matrix
from .seedcore import (
    CompatiblePair,
    PairedSeed,
    exchange_binomial,
    explore_paired,
    format_path,
)

logger = logging.getLogger(__name__)

GradingVector = Tuple[int, ...]


@dataclass(frozen=True)
class GradingLattice:
    basis: Tuple[GradingVector, ...]
    m: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis


def _row_echelon(rows: List[List[int]], ncols: int) -> int:
    """
    Integer row reduction of the first `ncols` columns using only unimodular row
    operations (swaps and adding integer multiples). Returns the number of pivots.
    """
    r = 0
    for c in range(ncols):
        while True:
            candidates = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not candidates:
                break
            pivot = min(candidates, key=lambda i: abs(rows[i][c]))
            rows[r], rows[pivot] = rows[pivot], rows[r]
            cleared = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    f = rows[i][c] // rows[r][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        cleared = False
            if cleared:
                r += 1
                break
    return r


def hermite_rows(vectors: Sequence[Sequence[int]]) -> Tuple[GradingVector, ...]:
    """Row Hermite normal form: positive pivots, entries above each pivot reduced mod the pivot."""
    rows = [list(v) for v in vectors]
    if not rows:
        return ()
    ncols = len(rows[0])
    rank = _row_echelon(rows, ncols)
    rows = rows[:rank]
    for r, row in enumerate(rows):
        c = next(j for j, x in enumerate(row) if x)
        if row[c] < 0:
            rows[r] = row = [-x for x in row]
        for u in range(r):
            f = rows[u][c] // row[c]
            if f:
                rows[u] = [a - f * b for a, b in zip(rows[u], row)]
    return tuple(tuple(row) for row in rows)


def grading_lattice(b_tilde: Sequence[Sequence[int]]) -> GradingLattice:
    bt = as_matrix(b_tilde)
    m = len(bt)
    n_ex = len(bt[0]) if bt else 0
    # Reduce [B~ | I]: rows whose B~ part vanishes carry a Z-basis of the left kernel in the I part
    rows = [list(bt[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    rank = _row_echelon(rows, n_ex)
    kernel = [row[n_ex:] for row in rows[rank:]]
    basis = hermite_rows(kernel)
    logger.debug("grading lattice of rank %d for a %dx%d exchange matrix", len(basis), m, n_ex)
    return GradingLattice(basis=basis, m=m)


def is_in_lattice(d: Sequence[int], b_tilde: Sequence[Sequence[int]]) -> bool:
    bt = as_matrix(b_tilde)
    if len(d) != len(bt):
        raise DimensionMismatch(f"grading vector has {len(d)} entries, expected {len(bt)}")
    return all(sum(di * row[k] for di, row in zip(d, bt)) == 0 for k in range(len(bt[0])))


def check_grading(d: Sequence[int], b_tilde: Matrix) -> GradingVector:
    d = tuple(int(x) for x in d)
    if not is_in_lattice(d, b_tilde):
        raise NotInLattice(f"d={d} does not satisfy d^T B~ = 0")
    return d


def _dot(d: Sequence[int], c: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(d, c))


def degree_of(x: Union[TorusElement, LaurentPolynomial], d: Sequence[int]) -> int:
    exponents = x.exponents()
    if not exponents:
        raise ZeroElement("the zero element has no degree")
    if len(exponents[0]) != len(d):
        raise DimensionMismatch(f"grading vector has {len(d)} entries, expected {len(exponents[0])}")
    degrees = {_dot(d, c) for c in exponents}
    if len(degrees) > 1:
        raise NotHomogeneous(sorted(degrees))
    return degrees.pop()


def degree_vector(variables: Sequence[Union[TorusElement, LaurentPolynomial]], d: Sequence[int]) -> GradingVector:
    """Degrees of a seed's variables: the grading vector d induces on that seed."""
    return tuple(degree_of(v, d) for v in variables)


@dataclass
class HomogeneityReport:
    d: GradingVector
    seeds_checked: int = 0
    relations_checked: int = 0
    degrees: Dict[str, int] = field(default_factory=dict)
    complete: bool = False


def check_homogeneous_mutation(pair: CompatiblePair, d: Sequence[int], max_depth: int) -> HomogeneityReport:
    d = check_grading(d, pair.b_tilde)
    report = HomogeneityReport(d=d)

    def fail(message: str, seed: PairedSeed, **extra) -> None:
        witness = {"path": format_path(seed.path), **extra}
        raise HomogeneityViolation(message, [witness])

    def induced(seed: PairedSeed) -> GradingVector:
        try:
            quantum = degree_vector(seed.quantum.vars, d)
            classical = degree_vector(seed.classical.vars, d)
        except NotHomogeneous as e:
            fail(f"cluster variable is not homogeneous along path [{format_path(seed.path)}]", seed, degrees=e.degrees)
        if quantum != classical:
            fail("quantum and classical degrees differ", seed, quantum=list(quantum), classical=list(classical))
        if not is_in_lattice(quantum, seed.classical.b_tilde):
            fail("induced degree vector leaves the grading lattice", seed, induced=list(quantum))
        return quantum

    def on_edge(parent: PairedSeed, k: int, child: PairedSeed) -> None:
        g = induced(parent)
        binomial = exchange_binomial(parent.quantum, k)
        plus, minus = _dot(g, binomial.b_plus), _dot(g, binomial.b_minus)
        new_degree = induced(child)[k - 1]
        if plus != minus or g[k - 1] + new_degree != plus:
            fail(
                f"exchange relation in direction {k} does not balance",
                parent,
                k=k,
                plus=plus,
                minus=minus,
                old=g[k - 1],
                new=new_degree,
            )
        report.relations_checked += 1

    graph = explore_paired(pair, max_depth, on_edge=on_edge)
    for seed in graph.nodes:
        g = induced(seed)
        report.seeds_checked += 1
        for var, degree in zip(seed.classical.vars, g):
            report.degrees[str(var)] = degree
    report.degrees = dict(sorted(report.degrees.items()))
    report.complete = graph.complete
    return report
