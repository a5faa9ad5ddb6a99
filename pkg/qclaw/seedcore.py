"""
Compatible pairs, matrix and seed mutation, and exchange-graph exploration.

Indices are 1-based throughout: X_1, ..., X_m with exchangeable directions
1 <= k <= n_ex, where n_ex is the number of columns of B~. Quantum cluster
variables are always expressed in the frame of the seed a walk started from.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Any, Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union

from .config import get_settings
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidDepth,
    NonLaurent,
    NotCompatible,
    NotDivisible,
    NotSkewSymmetrizable,
)
from .laurent import LaurentPolynomial
from .qcoeff import QCoeff
from .qtorus import Matrix, ToricFrame, TorusElement, as_matrix, check_skew_symmetric, left_divide_exact

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]
Node = TypeVar("Node")


def _pos(x: int) -> int:
    return x if x > 0 else 0


def format_path(path: Sequence[int]) -> str:
    return ",".join(str(k) for k in path)


def parse_path(text: str) -> Path:
    text = (text or "").strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise IndexOutOfRange(f"malformed mutation sequence {text!r}") from e


def extend_path(path: Path, k: int) -> Path:
    """Append k, cancelling an immediate repeat since mu_k is an involution."""
    if path and path[-1] == k:
        return path[:-1]
    return path + (k,)


def frame_label(path: Path) -> str:
    return "mu[" + format_path(path) + "]" if path else "initial"


def skew_symmetrizer(b: Matrix) -> Tuple[Optional[Tuple[int, ...]], Optional[Tuple[int, int]]]:
    """
    Return (d, None) with d positive and d_i b_ij = -d_j b_ji, or (None, (i, j)) naming
    a 1-based entry where no such d can exist.
    """
    n = len(b)
    weights: List[Optional[Fraction]] = [None] * n
    for root in range(n):
        if weights[root] is not None:
            continue
        weights[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if b[i][j] == 0 and b[j][i] == 0:
                    continue
                if b[i][j] * b[j][i] >= 0:
                    return None, (i + 1, j + 1)
                w = -weights[i] * b[i][j] / b[j][i]
                if weights[j] is None:
                    weights[j] = w
                    stack.append(j)
                elif weights[j] != w:
                    return None, (i + 1, j + 1)
    denom = 1
    for w in weights:
        denom = denom * w.denominator // gcd(denom, w.denominator)
    ints = [int(w * denom) for w in weights]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints), None


@dataclass(frozen=True)
class CompatiblePair:
    """A validated (Lambda, B~) with B~^T Lambda = (D | 0), D = diag(d)."""

    lambda_: Matrix
    b_tilde: Matrix
    d: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.lambda_)

    @property
    def n_ex(self) -> int:
        return len(self.b_tilde[0])

    def column(self, k: int) -> Tuple[int, ...]:
        check_direction(k, self.n_ex)
        return tuple(row[k - 1] for row in self.b_tilde)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n_ex": self.n_ex,
            "lambda": [list(r) for r in self.lambda_],
            "b_tilde": [list(r) for r in self.b_tilde],
        }


def check_direction(k: int, n_ex: int) -> None:
    if not 1 <= k <= n_ex:
        raise IndexOutOfRange(f"mutation index {k} outside exchangeable range 1..{n_ex}")


def check_compatible(lambda_: Sequence[Sequence[int]], b_tilde: Sequence[Sequence[int]]) -> CompatiblePair:
    lam = as_matrix(lambda_)
    bt = as_matrix(b_tilde)
    m = len(lam)
    if m == 0:
        raise DimensionMismatch("lambda must be a nonempty square matrix")
    check_skew_symmetric(lam)
    if len(bt) != m:
        raise DimensionMismatch(f"b_tilde has {len(bt)} rows, expected m={m}")
    n_ex = len(bt[0])
    if not 1 <= n_ex <= m:
        raise DimensionMismatch(f"b_tilde must have between 1 and {m} columns, got {n_ex}")
    for i, row in enumerate(bt):
        if len(row) != n_ex:
            raise DimensionMismatch(f"b_tilde row has {len(row)} entries, expected {n_ex}", row=i + 1)

    principal = bt[:n_ex]
    symmetrizer, bad = skew_symmetrizer(principal)
    if symmetrizer is None:
        raise NotSkewSymmetrizable("principal part of b_tilde is not skew-symmetrizable", row=bad[0], col=bad[1])

    d = []
    for k in range(n_ex):
        product_row = [sum(bt[a][k] * lam[a][j] for a in range(m)) for j in range(m)]
        for j, value in enumerate(product_row):
            if j != k and value != 0:
                raise NotCompatible(f"B~^T Lambda has nonzero off-diagonal entry {value}", row=k + 1, col=j + 1)
        if product_row[k] <= 0:
            raise NotCompatible(f"B~^T Lambda has non-positive diagonal entry {product_row[k]}", row=k + 1, col=k + 1)
        d.append(product_row[k])
    return CompatiblePair(lambda_=lam, b_tilde=bt, d=tuple(d))


def mutate_matrix(b_tilde: Sequence[Sequence[int]], k: int) -> Matrix:
    bt = as_matrix(b_tilde)
    n_ex = len(bt[0])
    check_direction(k, n_ex)
    c = k - 1
    out = []
    for i, row in enumerate(bt):
        new_row = []
        for j, b in enumerate(row):
            if i == c or j == c:
                new_row.append(-b)
            else:
                b_ik, b_kj = bt[i][c], bt[c][j]
                new_row.append(b + _pos(b_ik) * _pos(b_kj) - _pos(-b_ik) * _pos(-b_kj))
        out.append(tuple(new_row))
    return tuple(out)


def e_matrix(pair: CompatiblePair, k: int, sign: int = 1) -> Matrix:
    """The m x m matrix E_k with E e_j = e_j (j != k) and column k from the chosen sign."""
    col = pair.column(k)
    c = k - 1
    m = pair.m
    rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        rows[i][c] = -1 if i == c else _pos(-sign * col[i])
    return as_matrix(rows)


def _congruence(e: Matrix, lam: Matrix) -> Matrix:
    m = len(lam)
    lam_e = [[sum(lam[i][a] * e[a][j] for a in range(m)) for j in range(m)] for i in range(m)]
    return as_matrix([[sum(e[a][i] * lam_e[a][j] for a in range(m)) for j in range(m)] for i in range(m)])


def mutate_pair(pair: CompatiblePair, k: int) -> CompatiblePair:
    check_direction(k, pair.n_ex)
    lam_plus = _congruence(e_matrix(pair, k, 1), pair.lambda_)
    lam_minus = _congruence(e_matrix(pair, k, -1), pair.lambda_)
    if lam_plus != lam_minus:
        raise NotCompatible(f"E-matrix sign choices give different mutated Lambda in direction {k}")
    mutated = check_compatible(lam_plus, mutate_matrix(pair.b_tilde, k))
    if mutated.d != pair.d:
        raise NotCompatible(f"mutation in direction {k} changed d from {pair.d} to {mutated.d}")
    return mutated


@dataclass(frozen=True)
class ExchangeBinomial:
    """b_+, b_- (k-th entry 0) and m_+- = e_k^T Lambda b_+- for one exchangeable direction."""

    k: int
    b_plus: Tuple[int, ...]
    b_minus: Tuple[int, ...]
    m_plus: int
    m_minus: int

    @property
    def degenerate(self) -> bool:
        return not any(self.b_plus) and not any(self.b_minus)

    def element(self, frame: ToricFrame, j: int = 1) -> TorusElement:
        """Q^(j m/2) = q^(j m_+/2) M(b_+) + q^(j m_-/2) M(b_-) in the given frame."""
        return frame.monomial(self.b_plus, QCoeff.q_power(j * self.m_plus)) + frame.monomial(
            self.b_minus, QCoeff.q_power(j * self.m_minus)
        )


def exchange_binomial(seed: Union["QuantumSeed", CompatiblePair], k: int) -> ExchangeBinomial:
    pair = seed.pair if isinstance(seed, QuantumSeed) else seed
    col = pair.column(k)
    c = k - 1
    b_plus = tuple(0 if i == c else _pos(b) for i, b in enumerate(col))
    b_minus = tuple(0 if i == c else _pos(-b) for i, b in enumerate(col))
    lam_row = pair.lambda_[c]
    return ExchangeBinomial(
        k=k,
        b_plus=b_plus,
        b_minus=b_minus,
        m_plus=sum(x * y for x, y in zip(lam_row, b_plus)),
        m_minus=sum(x * y for x, y in zip(lam_row, b_minus)),
    )


@dataclass(frozen=True)
class QuantumSeed:
    pair: CompatiblePair
    frame: ToricFrame
    vars: Tuple[TorusElement, ...]
    path: Path = ()

    @classmethod
    def initial(cls, pair: CompatiblePair, path: Path = ()) -> "QuantumSeed":
        """A seed whose variables are the generators of its own frame."""
        frame = ToricFrame(pair.lambda_, frame_label(path))
        return cls(pair=pair, frame=frame, vars=tuple(frame.gen(i) for i in range(1, pair.m + 1)), path=path)

    @property
    def base_frame(self) -> ToricFrame:
        return self.vars[0].frame

    @property
    def n_ex(self) -> int:
        return self.pair.n_ex

    def current_monomial(self, b: Sequence[int]) -> TorusElement:
        """M'(b) of the current frame for b >= 0, written in base-frame coordinates."""
        if any(x < 0 for x in b):
            raise ValueError("current_monomial expects a nonnegative exponent vector")
        result = self.base_frame.one().scale(QCoeff.q_power(-self.frame.ordered_exponent(b)))
        for var, e in zip(self.vars, b):
            if e:
                result = result * var**e
        return result


@dataclass(frozen=True)
class ClassicalSeed:
    b_tilde: Matrix
    vars: Tuple[LaurentPolynomial, ...]
    path: Path = ()

    @classmethod
    def initial(cls, b_tilde: Sequence[Sequence[int]]) -> "ClassicalSeed":
        bt = as_matrix(b_tilde)
        m = len(bt)
        return cls(b_tilde=bt, vars=tuple(LaurentPolynomial.variable(m, i) for i in range(1, m + 1)))

    @property
    def n_ex(self) -> int:
        return len(self.b_tilde[0])


def mutate_quantum_seed(seed: QuantumSeed, k: int) -> QuantumSeed:
    check_direction(k, seed.n_ex)
    binomial = exchange_binomial(seed, k)
    if binomial.degenerate:
        logger.warning("exchange column %d is zero along path %s; relation degenerates to 2", k, format_path(seed.path))
    numerator = seed.current_monomial(binomial.b_plus).scale(QCoeff.q_power(binomial.m_plus)) + seed.current_monomial(
        binomial.b_minus
    ).scale(QCoeff.q_power(binomial.m_minus))
    try:
        new_var = left_divide_exact(numerator, seed.vars[k - 1])
    except NotDivisible as e:
        raise NonLaurent(f"quantum exchange in direction {k} is not Laurent: {e}", extend_path(seed.path, k)) from e

    pair = mutate_pair(seed.pair, k)
    path = extend_path(seed.path, k)
    new_vars = list(seed.vars)
    new_vars[k - 1] = new_var
    logger.debug("quantum mutation mu_%d -> path [%s]", k, format_path(path))
    return QuantumSeed(pair=pair, frame=ToricFrame(pair.lambda_, frame_label(path)), vars=tuple(new_vars), path=path)


def mutate_classical_seed(seed: ClassicalSeed, k: int) -> ClassicalSeed:
    check_direction(k, seed.n_ex)
    c = k - 1
    m = len(seed.vars)
    plus = LaurentPolynomial.constant(m)
    minus = LaurentPolynomial.constant(m)
    for i, row in enumerate(seed.b_tilde):
        b = row[c]
        if i == c or b == 0:
            continue
        if b > 0:
            plus = plus * seed.vars[i] ** b
        else:
            minus = minus * seed.vars[i] ** (-b)
    try:
        new_var = (plus + minus).divide_exact(seed.vars[c])
    except NotDivisible as e:
        raise NonLaurent(f"exchange in direction {k} is not Laurent: {e}", extend_path(seed.path, k)) from e
    new_vars = list(seed.vars)
    new_vars[c] = new_var
    return replace(seed, b_tilde=mutate_matrix(seed.b_tilde, k), vars=tuple(new_vars), path=extend_path(seed.path, k))


def cluster_key(var_keys: Sequence[str], b_tilde: Matrix) -> Hashable:
    """
    Seed identity up to simultaneous permutation of exchangeable indices: the
    exchangeable variables are sorted and B~ is permuted along with them. Frozen rows
    keep their positions.
    """
    n_ex = len(b_tilde[0])
    order = sorted(range(n_ex), key=lambda i: var_keys[i])
    rows = order + list(range(n_ex, len(b_tilde)))
    return (
        tuple(var_keys[i] for i in order),
        tuple(var_keys[n_ex:]),
        tuple(tuple(b_tilde[r][c] for c in order) for r in rows),
    )


def quantum_key(seed: QuantumSeed) -> Hashable:
    return cluster_key([str(v) for v in seed.vars], seed.pair.b_tilde)


def classical_key(seed: ClassicalSeed) -> Hashable:
    return cluster_key([str(v) for v in seed.vars], seed.b_tilde)


@dataclass
class ExchangeGraph:
    nodes: List[Any]
    depths: List[int]
    edges: List[Tuple[int, int, int]]
    variables: List[str]
    complete: bool
    max_depth: int

    @property
    def cluster_count(self) -> int:
        return len(self.nodes)

    @property
    def variable_count(self) -> int:
        return len(self.variables)


def _parallel_map(fn: Callable[[Any], Any], tasks: List[Any]) -> List[Any]:
    workers = get_settings().worker_count()
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    # ex.map yields in submission order, so results do not depend on scheduling
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


def explore(
    initial: Node,
    mutate: Callable[[Node, int], Node],
    key: Callable[[Node], Hashable],
    exchangeable_vars: Callable[[Node], Sequence[str]],
    n_ex: int,
    max_depth: int,
    on_edge: Optional[Callable[[Node, int, Node], None]] = None,
) -> ExchangeGraph:
    """Breadth-first closure of `initial` under mutation, identifying equal seeds via `key`."""
    if max_depth < 0:
        raise InvalidDepth(f"max_depth must be nonnegative, got {max_depth}")
    nodes: List[Node] = [initial]
    depths = [0]
    edges: List[Tuple[int, int, int]] = []
    index: Dict[Hashable, int] = {key(initial): 0}
    variables = set(exchangeable_vars(initial))
    frontier = [0] if n_ex else []
    depth = 0
    while frontier and depth < max_depth:
        tasks = [(i, k) for i in frontier for k in range(1, n_ex + 1)]
        results = _parallel_map(lambda t: mutate(nodes[t[0]], t[1]), tasks)
        next_frontier = []
        for (i, k), child in zip(tasks, results):
            if on_edge is not None:
                on_edge(nodes[i], k, child)
            child_key = key(child)
            if child_key not in index:
                index[child_key] = len(nodes)
                nodes.append(child)
                depths.append(depth + 1)
                next_frontier.append(index[child_key])
                variables.update(exchangeable_vars(child))
            edges.append((i, k, index[child_key]))
        frontier = next_frontier
        depth += 1
        logger.info("exchange graph depth %d: %d seeds, %d new", depth, len(nodes), len(frontier))
    if frontier:
        # The last level may already be closed: mutate it once more without recording anything
        tasks = [(i, k) for i in frontier for k in range(1, n_ex + 1)]
        results = _parallel_map(lambda t: mutate(nodes[t[0]], t[1]), tasks)
        if all(key(child) in index for child in results):
            frontier = []
    return ExchangeGraph(
        nodes=nodes,
        depths=depths,
        edges=edges,
        variables=sorted(variables),
        complete=not frontier,
        max_depth=max_depth,
    )


def enumerate_exchange_graph(pair: CompatiblePair, max_depth: int, quantum: bool = True) -> ExchangeGraph:
    n_ex = pair.n_ex
    if quantum:
        return explore(
            QuantumSeed.initial(pair),
            mutate_quantum_seed,
            quantum_key,
            lambda s: [str(v) for v in s.vars[:n_ex]],
            n_ex,
            max_depth,
        )
    return explore(
        ClassicalSeed.initial(pair.b_tilde),
        mutate_classical_seed,
        classical_key,
        lambda s: [str(v) for v in s.vars[:n_ex]],
        n_ex,
        max_depth,
    )


@dataclass(frozen=True)
class PairedSeed:
    """A quantum seed and the classical seed reached along the same path."""

    quantum: QuantumSeed
    classical: ClassicalSeed

    @classmethod
    def initial(cls, pair: CompatiblePair) -> "PairedSeed":
        return cls(QuantumSeed.initial(pair), ClassicalSeed.initial(pair.b_tilde))

    @property
    def path(self) -> Path:
        return self.quantum.path


def mutate_paired(seed: PairedSeed, k: int) -> PairedSeed:
    return PairedSeed(mutate_quantum_seed(seed.quantum, k), mutate_classical_seed(seed.classical, k))


def explore_paired(
    pair: CompatiblePair,
    max_depth: int,
    on_edge: Optional[Callable[[PairedSeed, int, PairedSeed], None]] = None,
) -> ExchangeGraph:
    """Walk quantum and classical seeds together, keyed by the classical cluster."""
    n_ex = pair.n_ex
    return explore(
        PairedSeed.initial(pair),
        mutate_paired,
        lambda s: classical_key(s.classical),
        lambda s: [str(v) for v in s.classical.vars[:n_ex]],
        n_ex,
        max_depth,
        on_edge,
    )


def all_paths(n_ex: int, depth: int) -> Iterator[Path]:
    """Every mutation sequence of length 1..depth, shorter sequences first."""
    for length in range(1, depth + 1):
        yield from product(range(1, n_ex + 1), repeat=length)
