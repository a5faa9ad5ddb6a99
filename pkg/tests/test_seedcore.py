import random

import pytest

from qclaw.config import get_settings
from qclaw.errors import IndexOutOfRange, InvalidDepth, NotCompatible, NotSkewSymmetric, NotSkewSymmetrizable
from qclaw.laurent import LaurentPolynomial
from qclaw.qtorus import ToricFrame
from qclaw.seedcore import (
    ClassicalSeed,
    ExchangeBinomial,
    QuantumSeed,
    all_paths,
    check_compatible,
    e_matrix,
    enumerate_exchange_graph,
    exchange_binomial,
    extend_path,
    format_path,
    mutate_classical_seed,
    mutate_matrix,
    mutate_pair,
    mutate_quantum_seed,
    parse_path,
    skew_symmetrizer,
)


def test_check_compatible_examples(rank1, a2):
    assert rank1.d == (1,)
    assert (rank1.m, rank1.n_ex) == (2, 1)
    assert a2.d == (1, 1)


def test_check_compatible_errors():
    with pytest.raises(NotCompatible):
        check_compatible([[0, 0], [0, 0]], [[0], [1]])
    with pytest.raises(NotSkewSymmetric) as err:
        check_compatible([[0, 1], [1, 0]], [[0], [1]])
    assert (err.value.row, err.value.col) == (1, 2)
    with pytest.raises(NotSkewSymmetrizable):
        check_compatible([[0, 1], [-1, 0]], [[0, 1], [1, 0]])


def test_skew_symmetrizer():
    assert skew_symmetrizer(((0, 2), (-1, 0))) == ((1, 2), None)
    assert skew_symmetrizer(((0, 1), (-1, 0))) == ((1, 1), None)
    d, bad = skew_symmetrizer(((0, 1), (0, 0)))
    assert d is None and bad == (1, 2)


def test_mutate_matrix_examples():
    assert mutate_matrix([[0, 2], [-2, 0]], 1) == ((0, -2), (2, 0))
    assert mutate_matrix([[0], [1]], 1) == ((0,), (-1,))
    with pytest.raises(IndexOutOfRange):
        mutate_matrix([[0], [1]], 2)


def test_mutate_matrix_is_involutive():
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(1, 3)
        b = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                b[i][j] = rng.randint(-2, 2)
                b[j][i] = -b[i][j]
        b += [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, 2))]
        k = rng.randint(1, n)
        assert mutate_matrix(mutate_matrix(b, k), k) == tuple(tuple(r) for r in b)


def test_mutate_pair_examples(rank1, a2):
    mutated = mutate_pair(rank1, 1)
    assert mutated.lambda_ == ((0, 1), (-1, 0))
    assert mutated.b_tilde == ((0,), (-1,))
    assert mutated.d == (1,)

    mutated = mutate_pair(a2, 1)
    assert mutated.lambda_ == ((0, -1), (1, 0))
    assert mutated.b_tilde == ((0, -1), (1, 0))
    assert mutate_pair(mutated, 1) == a2


def test_e_matrix_sign_choices_agree(pairs):
    for pair in pairs.values():
        for k in range(1, pair.n_ex + 1):
            assert e_matrix(pair, k, 1)[k - 1][k - 1] == -1
            assert mutate_pair(mutate_pair(pair, k), k) == pair


def test_exchange_binomial_examples(rank1, a2):
    b = exchange_binomial(rank1, 1)
    assert (b.b_plus, b.b_minus, b.m_plus, b.m_minus) == ((0, 1), (0, 0), -1, 0)
    b = exchange_binomial(a2, 1)
    assert (b.b_plus, b.b_minus, b.m_plus, b.m_minus) == ((0, 0), (0, 1), 0, 1)


def test_degenerate_binomial_is_two():
    frame = ToricFrame(((0, 1), (-1, 0)))
    binomial = ExchangeBinomial(k=1, b_plus=(0, 0), b_minus=(0, 0), m_plus=0, m_minus=0)
    assert binomial.degenerate
    assert binomial.element(frame) == frame.one().scale(2)


def test_quantum_mutation_examples(rank1, a2):
    seed = mutate_quantum_seed(QuantumSeed.initial(rank1), 1)
    frame = seed.base_frame
    assert seed.vars[0] == frame.monomial((-1, 1)) + frame.monomial((-1, 0))
    assert seed.vars[1] == frame.gen(2)
    assert seed.path == (1,)

    seed = mutate_quantum_seed(QuantumSeed.initial(a2), 1)
    frame = seed.base_frame
    assert seed.vars[0] == frame.monomial((-1, 0)) + frame.monomial((-1, 1))


def test_quantum_mutation_is_involutive(pairs):
    for pair in pairs.values():
        initial = QuantumSeed.initial(pair)
        for k in range(1, pair.n_ex + 1):
            assert mutate_quantum_seed(mutate_quantum_seed(initial, k), k) == initial


def test_frozen_variables_never_change(a3_principal):
    seed = QuantumSeed.initial(a3_principal)
    frozen = seed.vars[3:]
    for k in (1, 2, 3, 2, 1, 3):
        seed = mutate_quantum_seed(seed, k)
        assert seed.vars[3:] == frozen


def test_classical_mutation_examples(rank1, a2):
    x1, x2 = (LaurentPolynomial.variable(2, i) for i in (1, 2))
    seed = mutate_classical_seed(ClassicalSeed.initial(rank1.b_tilde), 1)
    assert str(seed.vars[0]) == "x1^-1*x2 + x1^-1"

    seed = mutate_classical_seed(ClassicalSeed.initial(a2.b_tilde), 1)
    assert seed.vars[0] == (x2 + 1) * x1**-1
    seed = mutate_classical_seed(seed, 2)
    assert seed.vars[1] == (x1 + x2 + 1) * (x1 * x2) ** -1
    assert mutate_classical_seed(seed, 2).vars == (seed.vars[0], x2)


def test_paths():
    assert extend_path((1, 2), 2) == (1,)
    assert extend_path((1, 2), 1) == (1, 2, 1)
    assert parse_path("1,2,1") == (1, 2, 1)
    assert parse_path("") == ()
    assert format_path((3, 1)) == "3,1"
    with pytest.raises(IndexOutOfRange):
        parse_path("1,x")
    assert len(list(all_paths(2, 3))) == 14


def test_mutation_index_out_of_range(rank1):
    with pytest.raises(IndexOutOfRange):
        mutate_quantum_seed(QuantumSeed.initial(rank1), 2)
    with pytest.raises(IndexOutOfRange):
        exchange_binomial(rank1, 0)


def test_exchange_graph_counts(rank1, a2):
    graph = enumerate_exchange_graph(a2, 6)
    assert (graph.cluster_count, graph.variable_count, graph.complete) == (5, 5, True)
    classical = enumerate_exchange_graph(a2, 6, quantum=False)
    assert (classical.cluster_count, classical.variable_count) == (5, 5)
    graph = enumerate_exchange_graph(rank1, 3)
    assert (graph.cluster_count, graph.complete) == (2, True)
    graph = enumerate_exchange_graph(a2, 0)
    assert graph.cluster_count == 1
    assert not graph.complete


def test_exchange_graph_truncation_is_reported(a2):
    graph = enumerate_exchange_graph(a2, 1)
    assert graph.cluster_count == 3
    assert not graph.complete


def test_exchange_graph_closed_at_depth_limit(rank1, a2):
    graph = enumerate_exchange_graph(rank1, 1)
    assert (graph.cluster_count, graph.complete) == (2, True)
    graph = enumerate_exchange_graph(a2, 2)
    assert (graph.cluster_count, graph.complete) == (5, True)
    assert max(graph.depths) == 2


def test_negative_depth_is_rejected(a2):
    with pytest.raises(InvalidDepth):
        enumerate_exchange_graph(a2, -1)


def test_exchange_graph_independent_of_threads(monkeypatch, a2_principal):
    serial = enumerate_exchange_graph(a2_principal, 4)
    monkeypatch.setenv("QCLAW_THREADS", "4")
    get_settings.cache_clear()
    threaded = enumerate_exchange_graph(a2_principal, 4)
    assert [s.vars for s in threaded.nodes] == [s.vars for s in serial.nodes]
    assert threaded.edges == serial.edges
    assert threaded.variables == serial.variables
