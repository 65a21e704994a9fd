"""Secure multicast: coset code at the source plus a constrained network code.

A pair (H, network code) is secure against mu taps when, for every tapped
set W of at most mu edges, rowspace(H) and rowspace(C_W) meet only in zero.
:func:`secure_lif_construct` enforces this edge by edge during LIF.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .gf import Field, FieldElement
from .matrix import Matrix, rank, vandermonde
from .netcode import NetworkCode, _build, from_local, observation_matrix
from .network import Flow, Network, combination, extract_flows, wiretap_sets
from .wiretap import SecrecyReport, WiretapCode, from_parity_check, leakage, mds_parity_check


@dataclass(frozen=True, eq=False)
class SecureCodeBundle:
    wiretap_code: WiretapCode
    network_code: NetworkCode
    mu: int
    tappable: frozenset[int]

    @property
    def field(self) -> Field:
        return self.network_code.field

    @property
    def network(self) -> Network:
        return self.network_code.network

    @property
    def n(self) -> int:
        return self.network_code.n

    @property
    def k(self) -> int:
        return self.wiretap_code.k

    @property
    def H(self) -> Matrix:
        return self.wiretap_code.H


def _tappable(net: Network, tappable: Iterable[int] | None) -> frozenset[int]:
    if tappable is None:
        return frozenset(range(net.num_edges))
    out = frozenset(int(e) for e in tappable)
    bad = [e for e in out if not 0 <= e < net.num_edges]
    if bad:
        raise ValueError(f"unknown edge ids in tappable set: {sorted(bad)}")
    return out


def _wiretap_constraint(H: np.ndarray, k: int, mu: int, tappable: frozenset[int], ctx):
    def check(e, g, processed, G):
        if e not in tappable:
            return None
        prior = [w for w in processed if w in tappable]
        size = min(mu - 1, len(prior))
        for subset in itertools.combinations(prior, size):
            obs = np.vstack([G[list(subset)].reshape(len(subset), G.shape[1]), g[None, :]])
            # rank additivity <=> trivial row-space intersection
            if kernels.rank(np.vstack([H, obs]), *ctx) != k + kernels.rank(obs, *ctx):
                return tuple(sorted((*subset, e)))
        return None
    return check


def secure_lif_construct(net: Network, n: int, k: int, mu: int, field: Field,
                         H: Matrix | WiretapCode | Sequence | None = None,
                         rng: np.random.Generator | None = None,
                         tappable: Iterable[int] | None = None,
                         flows: Sequence[Flow] | None = None) -> SecureCodeBundle:
    """LIF with the extra invariant that no set of at most mu tappable edges leaks.

    Without ``H`` the MDS parity check of :func:`mds_parity_check` is used.
    Raises :class:`~wiretapnet.netcode.ConstructionError` naming the edge
    (and the last violated wiretap set) when the search is exhausted.
    """
    if mu < 0 or k < 1 or k + mu > n:
        raise ValueError(f"need k >= 1, mu >= 0 and k + mu <= n (k={k}, mu={mu}, n={n})")
    if H is None:
        code = mds_parity_check(field, n, k)
    elif isinstance(H, WiretapCode):
        code = H
    else:
        code = from_parity_check(field, H)
    if code.field != field or code.k != k or code.n != n:
        raise ValueError(f"parity check must be {k}x{n} over {field.token}")
    taps = _tappable(net, tappable)
    flows = extract_flows(net, n) if flows is None else flows
    constraint = _wiretap_constraint(code.H.data, k, mu, taps, field.ctx) if mu > 0 else None
    netcode = _build(net, n, field, flows, constraint=constraint, rng=rng)
    return SecureCodeBundle(code, netcode, mu, taps)


def check_theorem1(bundle: SecureCodeBundle, mu: int | None = None) -> list[SecrecyReport]:
    """Leakage of every tappable set of size mu (capped at the tappable count).

    Smaller sets need no separate report: leakage never decreases when
    edges are added to a tap set.
    """
    mu = bundle.mu if mu is None else mu
    size = min(mu, len(bundle.tappable))
    return [leakage(bundle.wiretap_code, observation_matrix(bundle.network_code, w), w)
            for w in wiretap_sets(bundle.network, size, bundle.tappable)]


def passes(reports: Iterable[SecrecyReport]) -> bool:
    return all(r.secure for r in reports)


def max_rank_wiretap_set(code: NetworkCode, mu: int, tappable: Iterable[int] | None = None) -> tuple[int, ...] | None:
    """First size-mu tap set (lexicographic) whose observation has rank mu."""
    for w in wiretap_sets(code.network, mu, tappable):
        if rank(observation_matrix(code, w)) == mu:
            return w
    return None


# --- alphabet-size bounds ---

def theorem2_bound(num_edges: int, mu: int, t: int) -> int:
    """C(|E|-1, mu-1) + t; any field with q strictly above it suffices."""
    if mu < 1:
        raise ValueError("mu must be >= 1")
    return math.comb(num_edges - 1, mu - 1) + t


def corollary_bound(k: int, t: int, delta: int, mu: int, cube_base: int | None = None) -> int:
    """C(k^3 t^2 + delta, mu-1) + t, with delta the source out-degree.

    ``cube_base`` replaces k in the k^3 t^2 encoding-node count; pass n to
    get the n^3 t^2 variant.
    """
    if mu < 1:
        raise ValueError("mu must be >= 1")
    base = k if cube_base is None else cube_base
    return math.comb(base**3 * t**2 + delta, mu - 1) + t


def two_source_alphabet(t: int) -> int:
    """floor(sqrt(2t - 7/4) + 1/2) + 1, computed in exact integers."""
    if t < 2:
        raise ValueError("two-source bound needs t >= 2")
    # sqrt(2t - 7/4) = sqrt(8t - 7) / 2, so the floor is (isqrt(8t-7) + 1) // 2
    return (math.isqrt(8 * t - 7) + 1) // 2 + 1


def two_source_colors(field: Field) -> list[tuple[FieldElement, FieldElement]]:
    """Projective-line points [0 1], [1 0], [1 a^i] with [1 1] removed (q points)."""
    if field.order < 3:
        raise ValueError("need q >= 3 to leave a color after removing [1 1]")
    one, zero = field.one, field.zero
    pts = [(zero, one), (one, zero)] + [(one, a) for a in field.primitive_powers()]
    return [pt for pt in pts if pt != (one, one)]


def combination_secure_code(n: int, M: int, k: int, field: Field) -> SecureCodeBundle:
    """Closed-form secure code for B(n, M) at rate k against mu = n - k taps.

    One n x (M+k) Vandermonde matrix is split by columns: the first k,
    transposed, form H; column k+i becomes the vector of source edge i,
    which its middle node forwards unchanged.
    """
    if not 1 <= k <= n <= M:
        raise ValueError(f"need 1 <= k <= n <= M, got k={k}, n={n}, M={M}")
    if field.order < M + k:
        raise ValueError(f"{field.token} is too small: need q >= M + k = {M + k}")
    points = [int(c) for c in field.exp[: min(M + k, field.order - 1)]]
    if M + k == field.order:
        points.append(0)
    V = vandermonde(field, n, points, allow_zero=True)
    H = V.select_cols(range(k)).T
    net = combination(n, M)
    local = []
    for tail, _ in net.edges:
        if tail == net.source:
            i = len(local)
            local.append(tuple(int(c) for c in V.data[:, k + i]))
        else:
            local.append((1,))
    code = from_local(field, net, n, local)
    return SecureCodeBundle(WiretapCode(field, H), code, n - k, frozenset(range(net.num_edges)))
