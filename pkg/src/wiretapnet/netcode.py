"""Linear network codes and the linear-information-flow (LIF) construction.

Edges are visited in topological order. A flow edge's global vector is a
combination of the global vectors of its predecessors on the receiver
flows; the first candidate (in canonical order) keeping every receiver's
flow matrix invertible is accepted. An optional constraint hook lets the
secure construction add its wiretap conditions to the same search.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .gf import Field
from .matrix import DimensionError, Matrix, SingularMatrixError, invert
from .network import Flow, Network, extract_flows


class ConstructionError(RuntimeError):
    """No admissible local encoding vector exists for ``edge``.

    ``subset`` names the wiretap set whose condition failed last, if any.
    """

    def __init__(self, message: str, edge: int, subset: tuple[int, ...] | None = None):
        super().__init__(message)
        self.edge = edge
        self.subset = subset


@dataclass(frozen=True)
class TraceStep:
    edge: int
    flow_ranks: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class NetworkCode:
    """Per-edge local coefficients and the derived global coding vectors.

    ``local[e]`` has one coefficient per incoming edge of e's tail (id
    order), or one per source symbol when e leaves the source.
    """

    field: Field
    network: Network
    n: int
    local: tuple[tuple[int, ...], ...]
    global_vectors: Matrix
    trace: tuple[TraceStep, ...] = dc_field(default=(), repr=False)

    def global_vector(self, e: int) -> np.ndarray:
        return self.global_vectors.data[e]


@dataclass(frozen=True, eq=False)
class ReceiverDecoder:
    receiver: str
    terminal_edges: tuple[int, ...]
    matrix: Matrix
    inverse: Matrix


def _inputs(net: Network, e: int) -> list[int] | None:
    tail = net.edges[e][0]
    return None if tail == net.source else net.in_edges[tail]


def rederive_global(code: NetworkCode) -> Matrix:
    """Recompute every global vector from the local coefficients."""
    net, f, n = code.network, code.field, code.n
    g = np.zeros((net.num_edges, n), dtype=np.int64)
    for e in net.topological_edges:
        coeffs = np.array(code.local[e], dtype=np.int64)[None, :]
        ins = _inputs(net, e)
        if ins is None:
            basis = np.eye(n, dtype=np.int64)
        elif ins:
            basis = g[ins]
        else:
            continue
        if coeffs.shape[1] != basis.shape[0]:
            raise DimensionError(f"edge {e}: {coeffs.shape[1]} local coefficients for {basis.shape[0]} inputs")
        g[e] = kernels.matmul(coeffs, basis, *f.ctx)[0]
    return Matrix(f, g)


def is_consistent(code: NetworkCode) -> bool:
    return rederive_global(code) == code.global_vectors


def from_local(field: Field, net: Network, n: int, local: Sequence[Sequence[int]]) -> NetworkCode:
    local = tuple(tuple(field.code(c) for c in lv) for lv in local)
    if len(local) != net.num_edges:
        raise DimensionError(f"{len(local)} local vectors for {net.num_edges} edges")
    stub = NetworkCode(field, net, n, local, Matrix.zeros(field, net.num_edges, n))
    return NetworkCode(field, net, n, local, rederive_global(stub))


def _candidates(q: int, d: int, chunk: int = 4096) -> Iterator[np.ndarray]:
    """All of F_q^d in itertools.product order, in chunks of codes."""
    total = q**d
    weights = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield (idx[:, None] // weights[None, :]) % q


# Hook signature: (edge, candidate global vector, processed edges, current
# global matrix) -> None when admissible, else the violated wiretap subset.
Constraint = Callable[[int, np.ndarray, Sequence[int], np.ndarray], "tuple[int, ...] | None"]


def _build(net: Network, n: int, field: Field, flows: Sequence[Flow], *,
           constraint: Constraint | None = None, rng: np.random.Generator | None = None,
           random_trials: int = 16) -> NetworkCode:
    f, q, E = field, field.order, net.num_edges
    ctx = f.ctx
    positions: dict[int, list[tuple[int, int]]] = defaultdict(list)
    pred: dict[int, dict[int, int]] = defaultdict(dict)  # edge -> {flow: predecessor or -1-slot}
    for j, fl in enumerate(flows):
        if len(fl.paths) != n:
            raise ValueError(f"flow to {fl.receiver} has {len(fl.paths)} paths, need {n}")
        for p, path in enumerate(fl.paths):
            prev = -1 - p
            for e in path:
                positions[e].append((j, p))
                pred[e][j] = prev
                prev = e
    B = [np.eye(n, dtype=np.int64) for _ in flows]
    G = np.zeros((E, n), dtype=np.int64)
    local: list[tuple[int, ...]] = [()] * E
    processed: list[int] = []
    trace = []

    for e in net.topological_edges:
        ins = _inputs(net, e)
        width = n if ins is None else len(ins)
        basis = np.eye(n, dtype=np.int64) if ins is None else G[ins].reshape(len(ins), n)
        on_flow = bool(positions[e])
        if on_flow and ins is not None:
            # only predecessors on the flows through e receive weight
            support = sorted({ins.index(pe) for pe in pred[e].values()})
        else:
            support = list(range(width))
        sub_basis = basis[support]

        def admissible(g) -> tuple[bool, tuple[int, ...] | None]:
            for j, p in positions[e]:
                trial = B[j].copy()
                trial[p] = g
                if kernels.rank(trial, *ctx) != n:
                    return False, None
            if constraint is not None:
                bad = constraint(e, g, processed, G)
                if bad is not None:
                    return False, bad
            return True, None

        def ordered() -> Iterator[np.ndarray]:
            d = len(support)
            if not on_flow:
                yield np.ones((1, d), dtype=np.int64)
            elif rng is not None and d:
                yield rng.integers(0, q, size=(random_trials, d))
            yield from _candidates(q, d)

        chosen, last_bad = None, None
        for block in ordered():
            gs = kernels.matmul(block, sub_basis, *ctx) if block.shape[1] else np.zeros((len(block), n), np.int64)
            for c, g in zip(block, gs):
                ok, bad = admissible(g)
                if ok:
                    chosen = (c, g)
                    break
                if bad is not None:
                    last_bad = bad
            if chosen is not None:
                break
        if chosen is None:
            label = net.edge_label(e)
            msg = f"no admissible local vector for edge {e} ({label}) over {f.token}"
            if last_bad is not None:
                msg += f"; wiretap set {list(last_bad)} leaks"
            raise ConstructionError(msg, e, last_bad)
        c, g = chosen
        lv = np.zeros(width, dtype=np.int64)
        lv[support] = c
        local[e] = tuple(int(x) for x in lv)
        G[e] = g
        for j, p in positions[e]:
            B[j][p] = g
        processed.append(e)
        trace.append(TraceStep(e, tuple(int(kernels.rank(b, *ctx)) for b in B)))

    return NetworkCode(f, net, n, tuple(local), Matrix(f, G), tuple(trace))


def lif_construct(net: Network, n: int, field: Field, rng: np.random.Generator | None = None,
                  flows: Sequence[Flow] | None = None) -> NetworkCode:
    """Multicast code delivering n symbols to every receiver.

    ``rng`` only reorders the candidate search (a few random draws are
    tried first); without it the search is fully deterministic.
    """
    flows = extract_flows(net, n) if flows is None else flows
    return _build(net, n, field, flows, rng=rng)


def evaluate(code: NetworkCode, y: Sequence) -> np.ndarray:
    """Packet carried by every edge (indexed by edge id) for source word y."""
    y = np.array([code.field.code(x) for x in y], dtype=np.int64)
    if y.shape != (code.n,):
        raise DimensionError(f"source vector must have length {code.n}")
    return kernels.matmul(code.global_vectors.data, y[:, None], *code.field.ctx)[:, 0]


def receiver_decoders(code: NetworkCode, flows: Sequence[Flow] | None = None) -> list[ReceiverDecoder]:
    flows = extract_flows(code.network, code.n) if flows is None else flows
    out = []
    for fl in flows:
        terminals = tuple(path[-1] for path in fl.paths)
        mat = code.global_vectors.select_rows(terminals)
        try:
            inverse = invert(mat)
        except SingularMatrixError:
            raise SingularMatrixError(f"terminal matrix of receiver {fl.receiver} is singular") from None
        out.append(ReceiverDecoder(fl.receiver, terminals, mat, inverse))
    return out


def receiver_decode(code: NetworkCode, flows: Sequence[Flow] | None,
                    packets: Mapping[int, int] | Sequence[int]) -> dict[str, np.ndarray]:
    """Source word recovered by each receiver from its terminal packets."""
    out = {}
    for dec in receiver_decoders(code, flows):
        z = np.array([int(packets[e]) for e in dec.terminal_edges], dtype=np.int64)
        out[dec.receiver] = kernels.matmul(dec.inverse.data, z[:, None], *code.field.ctx)[:, 0]
    return out


def observation_matrix(code: NetworkCode, wiretap_set) -> Matrix:
    """Rows are the global vectors of the tapped edges, in edge-id order."""
    ids = sorted(set(int(e) for e in wiretap_set))
    for e in ids:
        if not 0 <= e < code.network.num_edges:
            raise ValueError(f"unknown edge id {e}")
    return code.global_vectors.select_rows(ids)
