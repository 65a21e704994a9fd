"""Unit-capacity multicast DAGs.

Edges are ``(tail, head)`` pairs whose position in :attr:`Network.edges` is
their id; parallel edges are distinct. Max flow uses BFS augmenting paths
that scan edges in id order, so flows are reproducible.
"""
from __future__ import annotations

import functools
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class NetworkError(ValueError):
    """Malformed network description or invalid query."""


class CycleError(NetworkError):
    pass


@dataclass(frozen=True, eq=False)
class Network:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    source: str
    receivers: tuple[str, ...]

    def __post_init__(self):
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise NetworkError("duplicate node ids")
        for tail, head in self.edges:
            if tail not in known or head not in known:
                raise NetworkError(f"edge {tail}->{head} references an unknown node")
            if tail == head:
                raise CycleError(f"self-loop at {tail}")
        if self.source not in known:
            raise NetworkError(f"unknown source {self.source!r}")
        if not self.receivers:
            raise NetworkError("at least one receiver is required")
        if len(set(self.receivers)) != len(self.receivers):
            raise NetworkError("receivers must be distinct")
        for r in self.receivers:
            if r not in known:
                raise NetworkError(f"unknown receiver {r!r}")
            if r == self.source:
                raise NetworkError("a receiver cannot be the source")
        self.topological_nodes  # raises on cycles
        if self.in_edges[self.source]:
            raise NetworkError("the source may not have incoming edges")

    @functools.cached_property
    def out_edges(self) -> dict[str, list[int]]:
        out = {v: [] for v in self.nodes}
        for e, (tail, _) in enumerate(self.edges):
            out[tail].append(e)
        return out

    @functools.cached_property
    def in_edges(self) -> dict[str, list[int]]:
        inc = {v: [] for v in self.nodes}
        for e, (_, head) in enumerate(self.edges):
            inc[head].append(e)
        return inc

    @functools.cached_property
    def topological_nodes(self) -> tuple[str, ...]:
        indeg = {v: len(self.in_edges[v]) for v in self.nodes}
        order_index = {v: i for i, v in enumerate(self.nodes)}
        ready = sorted((v for v in self.nodes if indeg[v] == 0), key=order_index.get)
        out = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            fresh = []
            for e in self.out_edges[v]:
                w = self.edges[e][1]
                indeg[w] -= 1
                if indeg[w] == 0:
                    fresh.append(w)
            ready = sorted(ready + fresh, key=order_index.get)
        if len(out) != len(self.nodes):
            raise CycleError("network contains a cycle")
        return tuple(out)

    @functools.cached_property
    def topological_edges(self) -> tuple[int, ...]:
        """Edges ordered by the topological rank of their tail, then by id."""
        rank = {v: i for i, v in enumerate(self.topological_nodes)}
        return tuple(sorted(range(len(self.edges)), key=lambda e: (rank[self.edges[e][0]], e)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_label(self, e: int) -> str:
        tail, head = self.edges[e]
        return f"{tail}->{head}"

    def to_text(self) -> str:
        lines = [f"node {v}" for v in self.nodes]
        lines += [f"edge {t} {h}" for t, h in self.edges]
        lines.append(f"source {self.source}")
        lines += [f"receiver {r}" for r in self.receivers]
        return "\n".join(lines) + "\n"


def build(edges: Iterable[tuple[str, str]], source: str, receivers: Sequence[str],
          nodes: Sequence[str] = ()) -> Network:
    edges = tuple((str(t), str(h)) for t, h in edges)
    order = list(dict.fromkeys([*map(str, nodes), str(source)]))
    for t, h in edges:
        for v in (t, h):
            if v not in order:
                order.append(v)
    for r in receivers:
        if str(r) not in order:
            raise NetworkError(f"unknown receiver {r!r}")
    return Network(tuple(order), edges, str(source), tuple(map(str, receivers)))


def parse(text: str) -> Network:
    """Parse the line-oriented ``node/edge/source/receiver`` format."""
    nodes, edges, receivers = [], [], []
    source = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        want = {"node": 1, "edge": 2, "source": 1, "receiver": 1}.get(key)
        if want is None:
            raise NetworkError(f"line {lineno}: unknown directive {key!r}")
        if len(args) != want:
            raise NetworkError(f"line {lineno}: {key} takes {want} argument(s)")
        if key == "node":
            nodes.append(args[0])
        elif key == "edge":
            edges.append((args[0], args[1]))
        elif key == "source":
            if source is not None:
                raise NetworkError(f"line {lineno}: duplicate source")
            source = args[0]
        else:
            receivers.append(args[0])
    if source is None:
        raise NetworkError("missing source line")
    if not receivers:
        raise NetworkError("no receiver lines")
    known = set(nodes) | {v for e in edges for v in e}
    for v in [source, *receivers]:
        if v not in known:
            raise NetworkError(f"unknown node {v!r} in source/receiver line")
    return build(edges, source, receivers, nodes)


def load(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# --- flows ---

@dataclass(frozen=True)
class Flow:
    receiver: str
    paths: tuple[tuple[int, ...], ...]


def _max_flow(net: Network, sink: str, limit: int | None = None) -> set[int]:
    """Edges carrying flow after up to ``limit`` augmentations."""
    flow: set[int] = set()
    value = 0
    while limit is None or value < limit:
        # residual graph: forward on unused edges, backward on used ones
        prev: dict[str, tuple[int, bool]] = {net.source: (-1, True)}
        queue = deque([net.source])
        while queue and sink not in prev:
            v = queue.popleft()
            steps = [(e, True) for e in net.out_edges[v] if e not in flow]
            steps += [(e, False) for e in net.in_edges[v] if e in flow]
            for e, fwd in sorted(steps):
                w = net.edges[e][1] if fwd else net.edges[e][0]
                if w not in prev:
                    prev[w] = (e, fwd)
                    queue.append(w)
        if sink not in prev:
            break
        v = sink
        while v != net.source:
            e, fwd = prev[v]
            if fwd:
                flow.add(e)
                v = net.edges[e][0]
            else:
                flow.discard(e)
                v = net.edges[e][1]
        value += 1
    return flow


def _check_receiver(net: Network, receiver: str):
    if receiver not in net.receivers:
        raise NetworkError(f"{receiver!r} is not a receiver")


def min_cut(net: Network, receiver: str) -> int:
    """Maximum number of edge-disjoint source-to-receiver paths."""
    _check_receiver(net, receiver)
    flow = _max_flow(net, receiver)
    return sum(1 for e in net.out_edges[net.source] if e in flow)


def multicast_capacity(net: Network) -> int:
    return min(min_cut(net, r) for r in net.receivers)


def _decompose(net: Network, flow: set[int], sink: str) -> tuple[tuple[int, ...], ...]:
    unused = set(flow)
    paths = []
    for first in net.out_edges[net.source]:
        if first not in unused:
            continue
        path = [first]
        unused.discard(first)
        v = net.edges[first][1]
        while v != sink:
            e = next(e for e in net.out_edges[v] if e in unused)
            unused.discard(e)
            path.append(e)
            v = net.edges[e][1]
        paths.append(tuple(path))
    return tuple(paths)


def extract_flows(net: Network, n: int) -> list[Flow]:
    """n edge-disjoint paths to every receiver, paths sorted by first edge."""
    flows = []
    for r in net.receivers:
        if n == 0:
            flows.append(Flow(r, ()))
            continue
        flow = _max_flow(net, r, limit=n)
        paths = _decompose(net, flow, r)
        if len(paths) < n:
            raise NetworkError(f"min-cut to {r!r} is {len(paths)} < {n}")
        flows.append(Flow(r, paths))
    return flows


def is_valid_flow(net: Network, flow: Flow) -> bool:
    """Independent check: disjoint, directed, source-to-receiver paths."""
    seen = set()
    for path in flow.paths:
        if not path or net.edges[path[0]][0] != net.source or net.edges[path[-1]][1] != flow.receiver:
            return False
        for a, b in zip(path, path[1:]):
            if net.edges[a][1] != net.edges[b][0]:
                return False
        if seen & set(path) or len(set(path)) != len(path):
            return False
        seen |= set(path)
    return True


# --- generators and wiretap sets ---

def butterfly() -> Network:
    """The 9-edge butterfly: receivers D and F, bottleneck B->E."""
    edges = [("S", "A"), ("S", "C"), ("A", "B"), ("C", "B"), ("A", "D"),
             ("C", "F"), ("B", "E"), ("E", "D"), ("E", "F")]
    return build(edges, "S", ["D", "F"], nodes="S A B C D E F".split())


COMBINATION_RECEIVER_CEILING = 10_000


def combination(n: int, M: int, max_receivers: int = COMBINATION_RECEIVER_CEILING) -> Network:
    """B(n, M): source -> M middle nodes -> one receiver per n-subset."""
    if not 1 <= n <= M:
        raise NetworkError(f"combination network needs 1 <= n <= M, got n={n}, M={M}")
    if math.comb(M, n) > max_receivers:
        raise NetworkError(f"C({M},{n}) receivers exceed the ceiling {max_receivers}")
    middle = [f"U{i}" for i in range(1, M + 1)]
    edges = [("S", u) for u in middle]
    receivers = []
    for subset in itertools.combinations(range(1, M + 1), n):
        r = "R" + "_".join(map(str, subset))
        receivers.append(r)
        edges += [(f"U{i}", r) for i in subset]
    return build(edges, "S", receivers, nodes=["S", *middle, *receivers])


def random_dag(num_edges: int, seed: int, num_nodes: int | None = None,
               num_receivers: int = 2, source_degree: int | None = None) -> Network:
    """Seeded random DAG on nodes v0..v{N-1} (v0 is the source).

    Receivers are the last ``num_receivers`` nodes reachable from the source.
    """
    rng = np.random.default_rng(seed)
    num_nodes = num_nodes or max(num_receivers + 2, num_edges // 2)
    source_degree = source_degree or min(3, num_nodes - 1, num_edges)
    names = [f"v{i}" for i in range(num_nodes)]
    edges = []
    targets = rng.choice(np.arange(1, num_nodes), size=source_degree, replace=False)
    for j in sorted(int(t) for t in targets):
        edges.append((0, j))
    while len(edges) < num_edges:
        a, b = sorted(int(x) for x in rng.choice(np.arange(1, num_nodes), size=2, replace=False))
        edges.append((a, b))
    reach = {0}
    for a, b in sorted(edges):
        if a in reach:
            reach.add(b)
    candidates = [i for i in range(num_nodes - 1, 0, -1) if i in reach]
    if not candidates:
        raise NetworkError("no node is reachable from the source")
    receivers = sorted(candidates[:num_receivers])
    return build([(names[a], names[b]) for a, b in edges], names[0],
                 [names[r] for r in receivers], nodes=names)


def wiretap_sets(net: Network, mu: int, restrict_to: Iterable[int] | None = None) -> Iterator[tuple[int, ...]]:
    """All size-``mu`` edge subsets, lexicographic in edge id."""
    pool = sorted(set(range(net.num_edges) if restrict_to is None else restrict_to))
    return itertools.combinations(pool, mu)
