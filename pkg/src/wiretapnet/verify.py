"""Brute-force secrecy oracles.

The entropy audit never looks at ranks: it pushes every (secret,
randomness) pair through the encoder and the network, counts the joint
outcomes of (S, Z_W), and reads the entropies off those counts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .gf import Field
from .matrix import Matrix, SingularMatrixError, invert, rank, stack
from .netcode import NetworkCode, observation_matrix, receiver_decoders
from .network import Flow
from .secure import SecureCodeBundle
from .wiretap import WiretapCode, _all_vectors, leakage

ENUMERATION_CEILING = 2**16


class CeilingError(ValueError):
    """The enumeration would exceed :data:`ENUMERATION_CEILING` words."""


class AuditError(AssertionError):
    """A conditional distribution was not uniform over a power-of-q support."""


@dataclass(frozen=True)
class EntropyAudit:
    """Exact entropies in q-ary units."""

    wiretap_set: tuple[int, ...]
    h_S: Fraction
    h_S_given_Z: Fraction
    decodable: bool

    @property
    def leakage(self) -> Fraction:
        return self.h_S - self.h_S_given_Z

    def to_line(self) -> str:
        ids = ",".join(map(str, self.wiretap_set))
        return (f"W={{{ids}}} H(S)={self.h_S} H(S|Z)={self.h_S_given_Z} "
                f"leak={self.leakage} decodable={str(self.decodable).lower()}")


def _log_q(count: int, q: int) -> int:
    j = 0
    while count % q == 0 and count > 1:
        count //= q
        j += 1
    if count != 1:
        raise AuditError(f"support size is not a power of {q}")
    return j


def _check_ceiling(q: int, n: int):
    if q**n > ENUMERATION_CEILING:
        raise CeilingError(f"q^n = {q}^{n} exceeds the enumeration ceiling {ENUMERATION_CEILING}")


def _conditional_entropy(s_keys: np.ndarray, z_rows: np.ndarray, q: int) -> Fraction:
    """H(S | Z) from equiprobable samples of (S, Z)."""
    total = len(s_keys)
    if z_rows.shape[1] == 0:
        z_ids = np.zeros(total, dtype=np.int64)
    else:
        _, z_ids = np.unique(z_rows, axis=0, return_inverse=True)
        z_ids = z_ids.reshape(-1)
    pairs, pair_counts = np.unique(np.stack([z_ids, s_keys], axis=1), axis=0, return_counts=True)
    h = Fraction(0)
    for z in np.unique(pairs[:, 0]):
        counts = pair_counts[pairs[:, 0] == z]
        if np.any(counts != counts[0]):
            raise AuditError("S given Z is not uniform")
        h += Fraction(int(counts.sum()), total) * _log_q(len(counts), q)
    return h


def entropy_audit(bundle: SecureCodeBundle, wiretap_set: Iterable[int],
                  flows: Sequence[Flow] | None = None) -> EntropyAudit:
    """Enumerate all q^k secrets x q^(n-k) coset choices for one tap set."""
    code, net = bundle.wiretap_code, bundle.network_code
    f = code.field
    q, n, k = f.order, code.n, code.k
    _check_ceiling(q, n)
    W = tuple(sorted(set(int(e) for e in wiretap_set)))
    X = _all_vectors(q, n)  # rows [s | r]
    S = X[:, :k]
    Y = kernels.matmul(X, code.generator.data.T, *f.ctx)
    if len({tuple(y) for y in Y.tolist()}) != q**n:
        raise AuditError("encoder is not a bijection onto F_q^n")
    s_keys = S @ (q ** np.arange(k, dtype=np.int64))
    h_s = _conditional_entropy(s_keys, np.zeros((len(S), 0), np.int64), q)
    C = observation_matrix(net, W)
    Z = kernels.matmul(Y, C.data.T, *f.ctx) if W else np.zeros((len(Y), 0), np.int64)
    h_s_z = _conditional_entropy(s_keys, Z, q)

    try:
        decoders = receiver_decoders(net, flows)
        decodable = True
    except (SingularMatrixError, ValueError):
        decoders, decodable = [], False
    G = net.global_vectors.data
    for dec in decoders:
        packets = kernels.matmul(Y, G[list(dec.terminal_edges)].T, *f.ctx)
        y_hat = kernels.matmul(packets, dec.inverse.data.T, *f.ctx)
        s_hat = kernels.matmul(y_hat, code.H.data.T, *f.ctx)
        decodable &= bool(np.array_equal(s_hat, S))
    return EntropyAudit(W, h_s, h_s_z, decodable)


def audit_equals_rank_formula(bundle: SecureCodeBundle, wiretap_set: Iterable[int]) -> bool:
    audit = entropy_audit(bundle, wiretap_set)
    report = leakage(bundle.wiretap_code, observation_matrix(bundle.network_code, audit.wiretap_set))
    return audit.leakage == report.leakage_qary


# --- Cai-Yeung scheme ---

def cai_yeung_encode(T: Matrix, s: Sequence, rng: np.random.Generator | None = None,
                     r: Sequence | None = None) -> np.ndarray:
    """Y = T [s; r] with r uniform of length n - k (or given explicitly)."""
    f = T.field
    n = T.rows
    if T.cols != n or rank(T) != n:
        raise SingularMatrixError("T must be invertible")
    s = [f.code(x) for x in s]
    if r is None:
        if rng is None:
            raise ValueError("need rng or explicit randomness")
        r = rng.integers(0, f.order, size=n - len(s)).tolist()
    x = np.array(s + [f.code(v) for v in r], dtype=np.int64)
    if x.shape != (n,):
        raise ValueError(f"len(s) + len(r) must equal n = {n}")
    return kernels.matmul(T.data, x[:, None], *f.ctx)[:, 0]


def t_star(T: Matrix, k: int) -> Matrix:
    """First k rows of T^-1."""
    return invert(T).select_rows(range(k))


def claim1_equivalence(T: Matrix, k: int) -> bool:
    """For every s, {T [s; r] : r} equals the coset {y : T* y = s}."""
    f = T.field
    q, n = f.order, T.rows
    _check_ceiling(q, n)
    H = t_star(T, k)
    Y_all = _all_vectors(q, n)
    synd = kernels.matmul(Y_all, H.data.T, *f.ctx)
    R = _all_vectors(q, n - k)
    for s in _all_vectors(q, k):
        X = np.hstack([np.tile(s, (len(R), 1)), R])
        image = {tuple(y) for y in kernels.matmul(X, T.data.T, *f.ctx).tolist()}
        coset = {tuple(y) for y in Y_all[np.all(synd == s, axis=1)].tolist()}
        if len(image) != q ** (n - k) or image != coset:
            return False
    return True


def feldman_condition(T: Matrix, code: NetworkCode, mu: int, k: int,
                      tappable: Iterable[int] | None = None) -> bool:
    """Every independent set of <= mu edge vectors stays independent with the rows of T*.

    Taking all k rows of T* is enough: subsets of an independent set are
    independent.
    """
    Ts = t_star(T, k)
    if rank(Ts) != k:
        return False
    edges = sorted(range(code.network.num_edges) if tappable is None else set(tappable))
    for size in range(1, mu + 1):
        for w in itertools.combinations(edges, size):
            C = observation_matrix(code, w)
            if rank(C) != size:
                continue
            if rank(stack(Ts, C)) != k + size:
                return False
    return True


def bundle_from_t(T: Matrix, code: NetworkCode, mu: int, k: int,
                  tappable: Iterable[int] | None = None) -> SecureCodeBundle:
    """Pair a network code with the coset code H = T*."""
    taps = frozenset(range(code.network.num_edges) if tappable is None else tappable)
    return SecureCodeBundle(WiretapCode(T.field, t_star(T, k)), code, mu, taps)
