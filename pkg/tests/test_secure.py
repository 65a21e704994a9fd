import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wiretapnet.gf import field_for_order, field_new, smallest_prime_power_above
from wiretapnet.matrix import Matrix, rank, stack
from wiretapnet.netcode import ConstructionError, evaluate, lif_construct, observation_matrix, receiver_decode
from wiretapnet.network import extract_flows, multicast_capacity, random_dag, wiretap_sets
from wiretapnet.secure import (check_theorem1, combination_secure_code, corollary_bound,
                               max_rank_wiretap_set, passes, secure_lif_construct, theorem2_bound,
                               two_source_alphabet, two_source_colors)
from wiretapnet.wiretap import from_parity_check, leakage

from conftest import BE, ED, EF


def multiple_of(v, u, f):
    return any(all(f.mul_codes(c, int(a)) == int(b) for a, b in zip(u, v)) for c in range(f.order))


def test_bfly_secure_construction(bfly_secure, gf3):
    G = bfly_secure.network_code.global_vectors.data
    for e in range(9):
        assert not multiple_of(G[e], [1, 1], gf3)
    assert G[BE].tolist() == G[ED].tolist() == G[EF].tolist() == [1, 2]
    reports = check_theorem1(bfly_secure)
    assert len(reports) == 9 and passes(reports)


def test_gf2_fails_at_bottleneck(gf2, bfly):
    with pytest.raises(ConstructionError) as err:
        secure_lif_construct(bfly, 2, 1, 1, gf2, H=[[1, 1]])
    assert err.value.edge == BE
    assert err.value.subset == (BE,)
    assert "B->E" in str(err.value)


def test_gf2_bottleneck_exhaustively(gf2):
    # BE mixes AB = [1,0] and CB = [0,1]; D also sees AD = [1,0], F sees CF = [0,1]
    H = from_parity_check(gf2, [[1, 1]])
    decodable = []
    for a, b in itertools.product(range(2), repeat=2):
        g = [a, b]
        if rank(Matrix(gf2, [[1, 0], g])) == 2 and rank(Matrix(gf2, [[0, 1], g])) == 2:
            decodable.append(g)
    assert decodable == [[1, 1]]
    assert leakage(H, Matrix(gf2, decodable)).leakage_qary == 1


def test_mu_zero_is_plain_lif(gf3, bfly):
    b = secure_lif_construct(bfly, 2, 2, 0, gf3, H=[[1, 0], [0, 1]])
    assert b.network_code.local == lif_construct(bfly, 2, gf3).local
    reps = check_theorem1(b)
    assert len(reps) == 1 and reps[0].wiretap_set == () and reps[0].leakage_qary == 0


def test_preconditions(gf3, bfly):
    with pytest.raises(ValueError):
        secure_lif_construct(bfly, 2, 2, 1, gf3)
    with pytest.raises(ValueError):
        secure_lif_construct(bfly, 2, 1, 1, gf3, H=[[1, 1, 1]])
    with pytest.raises(ValueError):
        secure_lif_construct(bfly, 2, 1, 1, gf3, tappable=[12])


def test_insecure_pairing_report(bfly_insecure):
    leaks = {r.wiretap_set: r.leakage_qary for r in check_theorem1(bfly_insecure)}
    assert {w for w, v in leaks.items() if v} == {(BE,), (ED,), (EF,)}
    assert all(v in (0, 1) for v in leaks.values())


def test_tappable_restriction(gf2, bfly):
    # excluding the bottleneck class lets GF(2) succeed
    taps = [e for e in range(9) if e not in (BE, ED, EF)]
    b = secure_lif_construct(bfly, 2, 1, 1, gf2, H=[[1, 1]], tappable=taps)
    assert passes(check_theorem1(b))
    assert b.tappable == frozenset(taps)


# --- bounds ---

def test_theorem2_examples():
    assert theorem2_bound(9, 1, 2) == 3
    assert theorem2_bound(10, 3, 2) == 38
    assert all(theorem2_bound(E, 1, t) == 1 + t for E in range(1, 30) for t in range(1, 5))
    with pytest.raises(ValueError):
        theorem2_bound(9, 0, 2)


def test_corollary_examples():
    assert corollary_bound(1, 2, 2, 1) == 3
    assert corollary_bound(2, 2, 3, 2) == 37
    assert corollary_bound(2, 2, 3, 1) == 3
    assert corollary_bound(1, 2, 3, 2, cube_base=2) == math.comb(8 * 4 + 3, 1) + 2


def test_two_source_examples():
    assert [two_source_alphabet(t) for t in (2, 3, 10)] == [3, 3, 5]
    with pytest.raises(ValueError):
        two_source_alphabet(1)


@given(st.integers(2, 10**6))
def test_two_source_matches_scan(t):
    # floor(sqrt(2t - 7/4) + 1/2) = largest j with (j - 1/2)^2 <= 2t - 7/4, i.e. (2j-1)^2 <= 8t - 7
    j = 0
    while (2 * (j + 1) - 1) ** 2 <= 8 * t - 7:
        j += 1
    assert two_source_alphabet(t) == j + 1


# --- two-source colors ---

@pytest.mark.parametrize("pm", [(3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_two_source_colors(pm):
    f = field_new(*pm)
    cols = two_source_colors(f)
    codes = [tuple(x.code for x in c) for c in cols]
    assert len(codes) == f.order == len(set(codes))
    assert (1, 1) not in codes
    H = from_parity_check(f, [[1, 1]])
    for c in codes:
        assert leakage(H, Matrix(f, [list(c)])).leakage_qary == 0
    for a, b in itertools.combinations(codes, 2):
        assert rank(Matrix(f, [list(a), list(b)])) == 2


def test_two_source_colors_gf3(gf3):
    assert sorted(tuple(x.value for x in c) for c in two_source_colors(gf3)) == [(0, 1), (1, 0), (1, 2)]
    with pytest.raises(ValueError):
        two_source_colors(field_new(2))


# --- combination networks ---

@pytest.mark.parametrize("n,M,k,q", [(2, 3, 1, 5), (2, 3, 1, 4), (3, 4, 1, 7), (3, 4, 2, 7), (2, 4, 2, 7),
                                     (3, 5, 2, 7), (2, 2, 2, 4)])
def test_combination_secure(n, M, k, q):
    f = field_for_order(q)
    b = combination_secure_code(n, M, k, f)
    assert b.mu == n - k
    assert passes(check_theorem1(b))
    src = [e for e, (t, _) in enumerate(b.network.edges) if t == b.network.source]
    G = b.network_code.global_vectors.data
    for size in range(n - k + 1):
        for w in itertools.combinations(src, size):
            assert rank(stack(b.H, Matrix(f, G[list(w)].reshape(size, n)))) == k + size
    flows = extract_flows(b.network, n)
    for y in itertools.product(range(q), repeat=n):
        out = receiver_decode(b.network_code, flows, evaluate(b.network_code, y))
        assert all(v.tolist() == list(y) for v in out.values())


def test_combination_errors():
    with pytest.raises(ValueError):
        combination_secure_code(2, 3, 1, field_new(3))
    with pytest.raises(ValueError):
        combination_secure_code(3, 2, 1, field_new(7))


def test_b22_plain_multicast():
    b = combination_secure_code(2, 2, 2, field_new(5))
    assert b.mu == 0
    src = b.network_code.global_vectors.select_rows([0, 1])
    assert rank(src) == 2


# --- invariants over a corpus ---

def random_bundle(seed):
    rng = np.random.default_rng(seed)
    t = int(rng.integers(1, 4))
    net = random_dag(int(rng.integers(5, 11)), seed, num_receivers=t)
    n = multicast_capacity(net)
    mu = int(rng.integers(1, n)) if n > 1 else 0
    k = n - mu
    bound = theorem2_bound(net.num_edges, mu, t) if mu else t
    f = field_for_order(smallest_prime_power_above(max(bound, n - 1)))
    return secure_lif_construct(net, n, k, mu, f, rng=rng if seed % 2 else None)


@pytest.mark.parametrize("seed", range(30))
def test_secure_bundles_pass_and_witness_rate(seed):
    b = random_bundle(seed)
    for size in range(b.mu + 1):
        for w in wiretap_sets(b.network, size):
            assert leakage(b.wiretap_code, observation_matrix(b.network_code, w)).leakage_qary == 0
    flows = extract_flows(b.network, b.n)
    for y in itertools.islice(itertools.product(range(b.field.order), repeat=b.n), 50):
        out = receiver_decode(b.network_code, flows, evaluate(b.network_code, y))
        assert all(v.tolist() == list(y) for v in out.values())
    if b.mu:
        w = max_rank_wiretap_set(b.network_code, b.mu)
        assert w is not None and rank(observation_matrix(b.network_code, w)) == b.mu


def test_check_theorem1_mu_override(bfly_secure):
    reps = check_theorem1(bfly_secure, mu=2)
    assert len(reps) == math.comb(9, 2)
    assert not passes(reps)
    assert all(r.leakage_qary <= 1 for r in reps)
