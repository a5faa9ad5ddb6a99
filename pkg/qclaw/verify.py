"""
Executable checks of the divisibility and specialization results.

Every check returns a VerificationReport. A failed case never raises: it is recorded as
a JSON-serializable witness and the report is marked "fail"; callers that want an
exception use report.raise_for_status().
"""

import json
import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ, Integer, Rational, Symbol
from sympy.polys.matrices import DomainMatrix

from .config import get_settings
from .errors import (
    FrameMismatch,
    HomogeneityViolation,
    InvalidDepth,
    NonLaurent,
    NotCompatible,
    NotDivisible,
    NotInAdjacentTorus,
)
from .grading import check_grading, check_homogeneous_mutation, degree_of
from .laurent import LaurentPolynomial
from .qcoeff import P, QCoeff
from .qtorus import ToricFrame, TorusElement, decompose_along, left_divide_exact
from .schemas import VerificationReport
from .seedcore import (
    CompatiblePair,
    QuantumSeed,
    all_paths,
    check_direction,
    exchange_binomial,
    explore_paired,
    extend_path,
    format_path,
    mutate_matrix,
    mutate_pair,
    mutate_quantum_seed,
)

logger = logging.getLogger(__name__)

Witness = Dict[str, Any]


def _valuation(v) -> Optional[int]:
    return None if v == float("inf") else int(v)


def _report(
    check_name: str,
    cases_run: int,
    witnesses: List[Witness],
    started: float,
    timing: Optional[bool],
    details: Optional[Dict[str, Any]] = None,
) -> VerificationReport:
    timed = get_settings().report_timing if timing is None else timing
    report = VerificationReport(
        check_name=check_name,
        status="fail" if witnesses else "pass",
        cases_run=cases_run,
        witnesses=sorted(witnesses, key=lambda w: json.dumps(w, sort_keys=True)),
        millis=int((time.perf_counter() - started) * 1000) if timed else None,
        details=details or {},
    )
    logger.info("%s: %s after %d cases", check_name, report.status, cases_run)
    return report


# Adjacent frames
@dataclass(frozen=True)
class AdjacentFrames:
    """
    A seed and its mutation in direction k, each viewed in its own frame.

    home_var is the adjacent seed's k-th variable written in the home frame and
    adjacent_var is the home seed's k-th variable written in the adjacent frame.
    """

    home: QuantumSeed
    adjacent: QuantumSeed
    k: int
    home_var: TorusElement
    adjacent_var: TorusElement

    def flipped(self) -> "AdjacentFrames":
        return AdjacentFrames(self.adjacent, self.home, self.k, self.adjacent_var, self.home_var)


@lru_cache(maxsize=256)
def _adjacent(pair: CompatiblePair, path: Tuple[int, ...], k: int) -> AdjacentFrames:
    home = QuantumSeed.initial(pair, path=path)
    adjacent = QuantumSeed.initial(mutate_pair(pair, k), path=extend_path(path, k))
    return AdjacentFrames(
        home=home,
        adjacent=adjacent,
        k=k,
        home_var=mutate_quantum_seed(home, k).vars[k - 1],
        adjacent_var=mutate_quantum_seed(adjacent, k).vars[k - 1],
    )


def adjacent_frames(seed: QuantumSeed, k: int) -> AdjacentFrames:
    check_direction(k, seed.n_ex)
    return _adjacent(seed.pair, seed.path, k)


def positive_chain(seed: QuantumSeed, k: int, l: int) -> TorusElement:
    """Q^((2l-1)m/2) ... Q^(3m/2) Q^(m/2) in the seed's own frame."""
    binomial = exchange_binomial(seed, k)
    result = seed.frame.one()
    for i in range(l, 0, -1):
        result = result * binomial.element(seed.frame, 2 * i - 1)
    return result


def negative_chain(seed: QuantumSeed, k: int, l: int) -> TorusElement:
    """Q^(-m/2) Q^(-3m/2) ... Q^((1-2l)m/2) in the seed's own frame."""
    binomial = exchange_binomial(seed, k)
    result = seed.frame.one()
    for i in range(1, l + 1):
        result = result * binomial.element(seed.frame, 1 - 2 * i)
    return result


def rewrite_in_adjacent_frame(seed: QuantumSeed, x: TorusElement, k: int) -> TorusElement:
    """
    Express x, given in the seed's frame, in the frame of mu_k(seed).

    With x = sum_j X_k^j c_j, a component with j >= 0 becomes X'_k^(-j) P_j c_j and a
    component with j < 0 must be left-divisible by X_k^(-j) inside the adjacent torus.
    """
    frames = adjacent_frames(seed, k)
    if x.frame != frames.home.frame:
        raise FrameMismatch(f"element lives in frame {x.frame.frame_id!r}, expected {frames.home.frame.frame_id!r}")
    target = frames.adjacent.frame
    inverse_gen = target.gen(k) ** -1
    result = target.zero()
    for j, c in sorted(decompose_along(x, k).parts.items()):
        shared = c.with_frame(target)
        if j >= 0:
            result = result + inverse_gen**j * positive_chain(frames.adjacent, k, j) * shared
        else:
            try:
                result = result + left_divide_exact(shared, frames.adjacent_var ** (-j))
            except NotDivisible:
                raise NotInAdjacentTorus(j, str(c)) from None
    return result


def _component_mismatch(frames: AdjacentFrames, x: TorusElement, rewritten: TorusElement) -> Optional[str]:
    """Compare the X_k-components of x with the X'_k-components of its rewriting."""
    k = frames.k
    src = decompose_along(x, k).parts
    dst = decompose_along(rewritten, k).parts
    home, adjacent = frames.home.frame, frames.adjacent.frame
    for j in sorted(set(src) | {-l for l in dst}):
        if j >= 0:
            expected = positive_chain(frames.adjacent, k, j) * src.get(j, home.zero()).with_frame(adjacent)
            if dst.get(-j, adjacent.zero()) != expected:
                return f"d_{-j} != P_{j} c_{j}"
        else:
            expected = positive_chain(frames.home, k, -j) * dst.get(-j, adjacent.zero()).with_frame(home)
            if src.get(j, home.zero()) != expected:
                return f"c_{j} != P_{-j} d_{-j}"
    return None


# Random elements
def random_coeff(rng: random.Random, span: int = 4) -> QCoeff:
    """Nonzero integer Laurent polynomial in q^(1/2) with at most `span` consecutive exponents."""
    low = rng.randint(-2, 2)
    c = QCoeff({e: rng.randint(-3, 3) for e in range(low, low + rng.randint(1, span))})
    return c if c else QCoeff.constant(1)


def random_element(frame: ToricFrame, rng: random.Random, max_terms: int = 3, box: int = 3) -> TorusElement:
    total = frame.zero()
    for _ in range(rng.randint(1, max_terms)):
        exponent = [rng.randint(-box, box) for _ in range(frame.rank)]
        total = total + frame.monomial(exponent, random_coeff(rng))
    return total if total else frame.one()


def sample_intersection(frames: AdjacentFrames, rng: random.Random, max_power: int = 3) -> TorusElement:
    """A random element of T_qM and T_qM_k, written in the home frame."""
    frame = frames.home.frame
    k = frames.k
    total = frame.zero()
    for _ in range(rng.randint(1, 3)):
        r = [0 if i == k - 1 else rng.randint(-3, 3) for i in range(frame.rank)]
        base = frame.monomial(r, random_coeff(rng))
        power = rng.randint(0, max_power)
        var = frame.gen(k) if rng.random() < 0.5 else frames.home_var
        total = total + base * var**power
    return total if total else frame.one()


# Checks
def verify_power_identities(seed: QuantumSeed, k: int, l_max: int = 4, timing: Optional[bool] = None) -> VerificationReport:
    """
    In each of the two frames along direction k, with Z the frame's k-th generator, W the
    adjacent variable and Q the frame's exchange binomial:
      Q^(jm/2) Z^-1 = Z^-1 Q^((j+2)m/2) for -3 <= j <= 3,
      Z^-1 M(b_+-) = q^(-m_+-) M(b_+-) Z^-1,
      W^l = Q^(-m/2) ... Q^((1-2l)m/2) Z^-l = Z^-l Q^((2l-1)m/2) ... Q^(m/2) for 0 <= l <= l_max.
    """
    started = time.perf_counter()
    frames = adjacent_frames(seed, k)
    witnesses: List[Witness] = []
    cases = 0
    for role in (frames, frames.flipped()):
        frame = role.home.frame
        z_inv = frame.gen(k) ** -1
        binomial = exchange_binomial(role.home, k)

        def record(ok: bool, identity: str, **where) -> None:
            nonlocal cases
            cases += 1
            if not ok:
                witnesses.append({"frame": frame.frame_id, "k": k, "identity": identity, **where})

        for j in range(-3, 4):
            lhs = binomial.element(frame, j) * z_inv
            rhs = z_inv * binomial.element(frame, j + 2)
            record(lhs == rhs, "commutation", j=j)
        for side, b, m in (("plus", binomial.b_plus, binomial.m_plus), ("minus", binomial.b_minus, binomial.m_minus)):
            lhs = z_inv * frame.monomial(b)
            rhs = frame.monomial(b, QCoeff.q_power(-2 * m)) * z_inv
            record(lhs == rhs, "monomial-commutation", side=side)
        w_power = frame.one()
        z_inv_power = frame.one()
        for l in range(0, l_max + 1):
            record(w_power == negative_chain(role.home, k, l) * z_inv_power, "power-left", l=l)
            record(w_power == z_inv_power * positive_chain(role.home, k, l), "power-right", l=l)
            w_power = w_power * role.home_var
            z_inv_power = z_inv_power * z_inv
    return _report("powerids", cases, witnesses, started, timing, {"k": k, "l_max": l_max})


def verify_prop_key(
    seed: QuantumSeed, k: int, n_samples: int = 100, seed_rng: int = 0, timing: Optional[bool] = None
) -> VerificationReport:
    """
    Sample elements t of both tori, scale them by p^e with e in 0..2 and rewrite them in
    the other frame. The p-valuation must survive the rewriting unchanged (so p-divisible
    exactly when the original is), rewriting back must give the original, and the
    components must be related by d_-l = P_l c_l. The k-th generator itself is checked
    first in each direction as an element with no p factor.
    """
    started = time.perf_counter()
    rng = random.Random(seed_rng)
    frames = adjacent_frames(seed, k)
    witnesses: List[Witness] = []
    cases = 0
    undivisible = 0
    for role, direction in ((frames, "home->adjacent"), (frames.flipped(), "adjacent->home")):
        samples = [("generator", role.home.frame.gen(k), 0)]
        for i in range(n_samples):
            e = rng.randint(0, 2)
            samples.append((i, sample_intersection(role, rng).scale(P**e), e))
        for i, y, e in samples:
            cases += 1
            witness = {"direction": direction, "k": k, "sample": i, "p_power": e, "element": str(y)}
            try:
                rewritten = rewrite_in_adjacent_frame(role.home, y, k)
            except NotInAdjacentTorus as err:
                witnesses.append({**witness, "reason": str(err)})
                continue
            before, after = y.p_valuation(), rewritten.p_valuation()
            if before != after or after < e:
                witnesses.append(
                    {**witness, "reason": "p-valuation", "before": _valuation(before), "after": _valuation(after)}
                )
                continue
            undivisible += before == 0
            if rewrite_in_adjacent_frame(role.adjacent, rewritten, k) != y:
                witnesses.append({**witness, "reason": "inverse rewrite differs"})
                continue
            mismatch = _component_mismatch(role, y, rewritten)
            if mismatch:
                witnesses.append({**witness, "reason": mismatch})
    details = {"k": k, "samples": n_samples, "rng_seed": seed_rng, "undivisible": undivisible}
    return _report("propkey", cases, witnesses, started, timing, details)


def specialization_check(pair: CompatiblePair, max_depth: int, timing: Optional[bool] = None) -> VerificationReport:
    started = time.perf_counter()
    graph = explore_paired(pair, max_depth)
    witnesses: List[Witness] = []
    cases = 0
    forward: Dict[str, str] = {}
    backward: Dict[str, str] = {}
    for seed in graph.nodes:
        for i, (qv, cv) in enumerate(zip(seed.quantum.vars, seed.classical.vars), start=1):
            cases += 1
            q_text, c_text = str(qv), str(cv)
            if qv.specialize() != cv:
                witnesses.append({"path": format_path(seed.path), "index": i, "quantum": q_text, "classical": c_text})
                continue
            if forward.setdefault(q_text, c_text) != c_text or backward.setdefault(c_text, q_text) != q_text:
                witnesses.append({"path": format_path(seed.path), "index": i, "reason": "not a bijection"})
    details = {"seeds": graph.cluster_count, "variables": len(forward), "complete": graph.complete}
    return _report("specialization", cases, witnesses, started, timing, details)


def verify_laurent(pair: CompatiblePair, depth: int, timing: Optional[bool] = None) -> VerificationReport:
    """Mutate along every sequence of length <= depth; each step is one exact quantum division."""
    if depth < 0:
        raise InvalidDepth(f"depth must be nonnegative, got {depth}")
    started = time.perf_counter()
    seeds: Dict[Tuple[int, ...], QuantumSeed] = {(): QuantumSeed.initial(pair)}
    witnesses: List[Witness] = []
    cases = 0
    for path in all_paths(pair.n_ex, depth):
        parent = seeds.get(path[:-1])
        if parent is None:
            continue
        cases += 1
        try:
            seeds[path] = mutate_quantum_seed(parent, path[-1])
        except NonLaurent as e:
            witnesses.append({"path": format_path(path), "reason": str(e)})
    return _report("laurent", cases, witnesses, started, timing, {"depth": depth})


def verify_homogeneity(
    pair: CompatiblePair, d: Sequence[int], depth: int, timing: Optional[bool] = None
) -> VerificationReport:
    started = time.perf_counter()
    try:
        report = check_homogeneous_mutation(pair, d, depth)
    except HomogeneityViolation as e:
        return _report("homogeneity", 1, e.witnesses, started, timing, {"d": list(d)})
    details = {"d": list(report.d), "degrees": report.degrees, "complete": report.complete}
    return _report("homogeneity", report.seeds_checked + report.relations_checked, [], started, timing, details)


def verify_mutation_invariants(
    pair: CompatiblePair, n_samples: int = 200, seed_rng: int = 0, max_length: int = 8, timing: Optional[bool] = None
) -> VerificationReport:
    """Random mutation walks keep d and every mu_k is an involution on pairs and matrices."""
    started = time.perf_counter()
    rng = random.Random(seed_rng)
    witnesses: List[Witness] = []
    for i in range(n_samples):
        sequence = [rng.randint(1, pair.n_ex) for _ in range(rng.randint(1, max_length))]
        current = pair
        for step, k in enumerate(sequence):
            witness = {"sample": i, "sequence": format_path(sequence[: step + 1])}
            try:
                mutated = mutate_pair(current, k)
            except NotCompatible as e:
                witnesses.append({**witness, "reason": str(e)})
                break
            if mutated.d != pair.d or mutate_pair(mutated, k) != current:
                witnesses.append({**witness, "reason": "mutation is not an involution preserving d"})
                break
            if mutate_matrix(mutate_matrix(current.b_tilde, k), k) != current.b_tilde:
                witnesses.append({**witness, "reason": "matrix mutation is not an involution"})
                break
            current = mutated
    return _report("mutation", n_samples, witnesses, started, timing, {"samples": n_samples, "rng_seed": seed_rng})


def verify_domain_property(
    pair: CompatiblePair, n_samples: int = 500, seed_rng: int = 0, timing: Optional[bool] = None
) -> VerificationReport:
    """
    T/pT is a domain: p-valuations add under multiplication, so a p-divisible product
    always has a p-divisible factor.
    """
    started = time.perf_counter()
    rng = random.Random(seed_rng)
    frame = ToricFrame(pair.lambda_)
    witnesses: List[Witness] = []
    for i in range(n_samples):
        x = random_element(frame, rng, box=2).scale(P ** rng.randint(0, 2))
        y = random_element(frame, rng, box=2).scale(P ** rng.randint(0, 2))
        vx, vy, vxy = x.p_valuation(), y.p_valuation(), (x * y).p_valuation()
        if vxy != vx + vy or (vxy >= 1 and vx == 0 and vy == 0):
            witnesses.append(
                {"sample": i, "x": str(x), "y": str(y), "valuations": [_valuation(vx), _valuation(vy), _valuation(vxy)]}
            )
    return _report("domain", n_samples, witnesses, started, timing, {"samples": n_samples, "rng_seed": seed_rng})


def sample_upper_membership(
    seed: QuantumSeed, n_samples: int = 100, seed_rng: int = 0, timing: Optional[bool] = None
) -> VerificationReport:
    """
    Exploratory: count random elements of the seed's torus that also lie in every adjacent
    torus. There is no failure criterion.
    """
    started = time.perf_counter()
    rng = random.Random(seed_rng)
    local = QuantumSeed.initial(seed.pair, path=seed.path)
    per_direction = {k: 0 for k in range(1, seed.n_ex + 1)}
    members = 0
    for _ in range(n_samples):
        x = random_element(local.frame, rng)
        inside = True
        for k in per_direction:
            try:
                rewrite_in_adjacent_frame(local, x, k)
            except NotInAdjacentTorus:
                inside = False
                continue
            per_direction[k] += 1
        members += inside
    details = {"samples": n_samples, "members": members, "per_direction": {str(k): v for k, v in per_direction.items()}}
    return _report("upper", n_samples, [], started, timing, details)


# Graded ranks
_T = Symbol("t")  # t = q^(1/2)
_FRAC_R = QQ.frac_field(_T)


def _to_frac_r(c: QCoeff):
    expr = sum((Rational(v.numerator, v.denominator) * _T**e for e, v in c.items()), Integer(0))
    return _FRAC_R.from_sympy(expr)


def _rank(vectors: Sequence[Mapping[Any, Any]], domain, convert) -> int:
    columns = sorted({key for v in vectors for key in v})
    if not vectors or not columns:
        return 0
    rows = [[convert(v[c]) if c in v else domain.zero for c in columns] for v in vectors]
    return DomainMatrix(rows, (len(rows), len(columns)), domain).rank()


def rank_over_q(vectors: Sequence[Mapping[Any, Fraction]]) -> int:
    return _rank(vectors, QQ, lambda c: QQ(c.numerator, c.denominator))


def rank_over_frac_r(vectors: Sequence[Mapping[Any, QCoeff]]) -> int:
    return _rank(vectors, _FRAC_R, _to_frac_r)


def graded_dimension_report(
    pair: CompatiblePair,
    d: Sequence[int],
    g_range: Sequence[int],
    max_depth: int,
    max_factors: int = 2,
    timing: Optional[bool] = None,
) -> VerificationReport:
    """
    For each degree g, compare dim_Q of the span of classical products of at most
    `max_factors` enumerated cluster variables with the rank over Frac(R) of the matching
    quantum products (factors in canonical order), and with the rank of their q = 1 images.
    """
    started = time.perf_counter()
    d = check_grading(d, pair.b_tilde)
    graph = explore_paired(pair, max_depth)
    variables: Dict[str, Tuple[LaurentPolynomial, TorusElement]] = {}
    for seed in graph.nodes:
        for qv, cv in zip(seed.quantum.vars, seed.classical.vars):
            variables.setdefault(str(cv), (cv, qv))
    names = sorted(variables)
    degree = {name: degree_of(variables[name][0], d) for name in names}
    wanted = set(g_range)

    products: Dict[int, List[Tuple[str, ...]]] = {g: [] for g in wanted}
    for size in range(max_factors + 1):
        for combo in combinations_with_replacement(names, size):
            g = sum(degree[name] for name in combo)
            if g in wanted:
                products[g].append(combo)

    m = pair.m
    frame = ToricFrame(pair.lambda_)
    rows = []
    witnesses: List[Witness] = []
    for g in g_range:
        classical, quantum = [], []
        for combo in products[g]:
            c_prod = LaurentPolynomial.constant(m)
            q_prod = frame.one()
            for name in combo:
                c_prod = c_prod * variables[name][0]
                q_prod = q_prod * variables[name][1]
            classical.append(c_prod)
            quantum.append(q_prod)
        row = {
            "degree": g,
            "products": len(classical),
            "classical_dim": rank_over_q([c.terms for c in classical]),
            "quantum_rank": rank_over_frac_r([q.terms for q in quantum]),
            "specialized_rank": rank_over_q([q.specialize().terms for q in quantum]),
        }
        rows.append(row)
        if not row["classical_dim"] == row["quantum_rank"] == row["specialized_rank"]:
            witnesses.append(row)
    details = {
        "d": list(d),
        "max_depth": max_depth,
        "max_factors": max_factors,
        "variables": len(names),
        "complete": graph.complete,
        "degrees": rows,
    }
    return _report("graded", len(rows), witnesses, started, timing, details)


def merge_reports(check_name: str, reports: Sequence[VerificationReport]) -> VerificationReport:
    """Combine per-direction reports of one check into a single report."""
    witnesses = [w for r in reports for w in r.witnesses]
    timed = [r.millis for r in reports if r.millis is not None]
    return VerificationReport(
        check_name=check_name,
        status="fail" if witnesses else "pass",
        cases_run=sum(r.cases_run for r in reports),
        witnesses=sorted(witnesses, key=lambda w: json.dumps(w, sort_keys=True)),
        millis=sum(timed) if timed else None,
        details={"parts": [r.details for r in reports]},
    )
