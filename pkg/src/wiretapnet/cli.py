"""Command-line interface.

Exit status: 0 success/PASS, 1 security FAIL, 2 construction failure,
3 input error.
"""
from __future__ import annotations

import argparse
import ast
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import formats
from .gf import Field, FieldError, field_for_order, parse_field, smallest_prime_power_above
from .matrix import Matrix
from .netcode import (ConstructionError, evaluate, lif_construct, observation_matrix, receiver_decode,
                      receiver_decoders)
from .network import (NetworkError, butterfly, combination, extract_flows, load, min_cut,
                      multicast_capacity, random_dag)
from .secure import (SecureCodeBundle, check_theorem1, corollary_bound, passes, secure_lif_construct,
                     theorem2_bound, two_source_alphabet)
from .verify import CeilingError, entropy_audit
from .wiretap import decode, encode, from_parity_check, leakage

EXIT_OK, EXIT_INSECURE, EXIT_CONSTRUCTION, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    network_path: str | None = None
    code_path: str | None = None
    field: str | None = None
    n: int | None = None
    k: int | None = None
    mu: int | None = None
    seed: int = 0
    tappable: str | None = None
    output_path: str | None = None
    secret: str | None = None
    parity: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(command=args.command, network_path=getattr(args, "network", None),
                   code_path=getattr(args, "bundle", None), field=getattr(args, "field", None),
                   n=getattr(args, "n", None), k=getattr(args, "k", None), mu=getattr(args, "mu", None),
                   seed=getattr(args, "seed", 0) or 0, tappable=getattr(args, "tappable", None),
                   output_path=getattr(args, "out", None), secret=getattr(args, "secret", None),
                   parity=getattr(args, "parity", None))

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _edge_ids(net, spec: str) -> list[int]:
    """Comma list of edge ids or tail->head labels."""
    if spec.strip() in ("", "none"):
        return []
    if spec.strip() == "all":
        return list(range(net.num_edges))
    labels = {net.edge_label(e): e for e in range(net.num_edges)}
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if tok.isdigit() and int(tok) < net.num_edges:
            out.append(int(tok))
        elif tok in labels:
            out.append(labels[tok])
        else:
            raise InputError(f"unknown edge {tok!r}")
    return sorted(set(out))


def _fmt_vec(field: Field, codes) -> str:
    return formats._tokens(field, codes)


def _set_label(net, w) -> str:
    ids = ",".join(map(str, w))
    names = " ".join(net.edge_label(e) for e in w)
    return f"{{{ids}}}" + (f" ({names})" if w else "")


def _load_bundle(cfg: RunConfig):
    net = load(_need(cfg.network_path, "--network"))
    with open(_need(cfg.code_path, "--bundle"), encoding="utf-8") as fh:
        return net, formats.bundle_from_text(fh.read(), net)


def _with_mu(bundle: SecureCodeBundle, mu: int | None) -> SecureCodeBundle:
    if mu is None or mu == bundle.mu:
        return bundle
    return SecureCodeBundle(bundle.wiretap_code, bundle.network_code, mu, bundle.tappable)


# --- commands ---

def cmd_generate(args) -> int:
    if args.kind == "butterfly":
        net = butterfly()
    elif args.kind == "combination":
        net = combination(_need(args.n, "--n"), _need(args.M, "--M"))
    else:
        net = random_dag(_need(args.edges, "--edges"), args.seed or 0, num_nodes=args.nodes,
                         num_receivers=args.receivers)
    _emit(net.to_text(), args.out)
    return EXIT_OK


def cmd_mincut(cfg: RunConfig) -> int:
    net = load(_need(cfg.network_path, "--network"))
    lines = [f"receiver {r} min-cut {min_cut(net, r)}" for r in net.receivers]
    lines.append(f"multicast capacity {multicast_capacity(net)}")
    _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


def _field(cfg: RunConfig, fallback_order: int) -> Field:
    return parse_field(cfg.field) if cfg.field else field_for_order(fallback_order)


def cmd_construct(cfg: RunConfig) -> int:
    net = load(_need(cfg.network_path, "--network"))
    n = cfg.n or multicast_capacity(net)
    field = _field(cfg, smallest_prime_power_above(max(len(net.receivers), 2) - 1))
    code = lif_construct(net, n, field, rng=cfg.rng() if cfg.seed else None)
    _emit(formats.code_to_text(code), cfg.output_path)
    return EXIT_OK


def _taps_phrase(mu: int, count: int) -> str:
    kind = {1: "singleton", 2: "pair"}.get(mu, f"size-{mu}")
    return f"all {count} {kind} taps leak 0"


def cmd_secure_construct(cfg: RunConfig) -> int:
    net = load(_need(cfg.network_path, "--network"))
    n = cfg.n or multicast_capacity(net)
    mu = _need(cfg.mu, "--mu")
    k = cfg.k if cfg.k is not None else n - mu
    t = len(net.receivers)
    default_q = smallest_prime_power_above(max(theorem2_bound(net.num_edges, mu, t) if mu else t - 1, n - 1))
    field = _field(cfg, default_q)
    H = None
    if cfg.parity:
        H = from_parity_check(field, [ast.literal_eval(f"[{row}]") for row in cfg.parity.split(";")])
    elif n > field.order:
        raise InputError(f"{field.token} has fewer than n={n} points for an MDS parity check; pass --parity")
    taps = _edge_ids(net, cfg.tappable or "all")
    try:
        bundle = secure_lif_construct(net, n, k, mu, field, H=H, rng=cfg.rng() if cfg.seed else None,
                                      tappable=taps)
    except ConstructionError as exc:
        sys.stdout.write(f"construction failed: {exc}\n")
        return EXIT_CONSTRUCTION
    if cfg.output_path:
        _emit(formats.bundle_to_text(bundle), cfg.output_path)
    lines = [f"field {field.token} n={n} k={k} mu={mu}", f"H {formats.matrix_token(bundle.H)}"]
    for dec in receiver_decoders(bundle.network_code, extract_flows(net, n)):
        lines.append(f"receiver {dec.receiver} decodable via edges {list(dec.terminal_edges)}")
    reports = check_theorem1(bundle)
    if mu == 0:
        lines.append("secure: no taps to check (mu=0)")
    elif passes(reports):
        lines.append(f"secure: {_taps_phrase(min(mu, len(bundle.tappable)), len(reports))}")
    else:  # pragma: no cover - construction guarantees this
        lines.append("INSECURE")
    if not cfg.output_path:
        lines.insert(0, formats.bundle_to_text(bundle).rstrip("\n"))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    net, bundle = _load_bundle(cfg)
    bundle = _with_mu(bundle, cfg.mu)
    reports = check_theorem1(bundle)
    lines = [f"W={_set_label(net, r.wiretap_set)} rank={r.observed_rank} leak={r.leakage_qary}" for r in reports]
    leaking = [r for r in reports if not r.secure]
    lines.append("PASS" if not leaking else
                 "FAIL: leaking sets " + "; ".join(_set_label(net, r.wiretap_set) for r in leaking))
    _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK if not leaking else EXIT_INSECURE


def cmd_audit(cfg: RunConfig) -> int:
    net, bundle = _load_bundle(cfg)
    bundle = _with_mu(bundle, cfg.mu)
    reports = check_theorem1(bundle)
    lines, leaking = [], []
    for rep in reports:
        audit = entropy_audit(bundle, rep.wiretap_set)
        if audit.leakage != rep.leakage_qary:
            raise AssertionError(f"rank formula disagrees with the entropy audit on {rep.wiretap_set}")
        lines.append(audit.to_line())
        if audit.leakage != 0 or not audit.decodable:
            leaking.append(rep.wiretap_set)
    lines.append(f"rank formula agrees on all {len(reports)} sets")
    lines.append("PASS" if not leaking else
                 "FAIL: leaking sets " + "; ".join(_set_label(net, w) for w in leaking))
    _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK if not leaking else EXIT_INSECURE


def cmd_bounds(args) -> int:
    edges, mu, t = args.edges, args.mu, args.t
    delta = args.delta
    if args.network:
        net = load(args.network)
        edges = net.num_edges if edges is None else edges
        t = len(net.receivers) if t is None else t
        delta = len(net.out_edges[net.source]) if delta is None else delta
    lines = []
    if None not in (edges, mu, t):
        b = theorem2_bound(edges, mu, t)
        lines.append(f"Thm2: q > {b}    C(|E|-1, mu-1) + t = C({edges - 1},{mu - 1}) + {t}")
    if None not in (args.k, t, delta, mu):
        b = corollary_bound(args.k, t, delta, mu)
        lines.append(f"Corollary: q > {b}    C(k^3 t^2 + delta, mu-1) + t "
                     f"= C({args.k ** 3 * t ** 2 + delta},{mu - 1}) + {t}")
    if t is not None and t >= 2:
        lines.append(f"Thm3: q = {two_source_alphabet(t)} sufficient    "
                     f"floor(sqrt(2t - 7/4) + 1/2) + 1 with t = {t}")
    if not lines:
        raise InputError("supply --edges/--mu/--t (or --network), and --k/--delta for the corollary")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _parse_secret(field: Field, text: str) -> list[int]:
    vals = ast.literal_eval(f"[{text}]")
    return [field.code(v) for v in vals]


def cmd_simulate(cfg: RunConfig) -> int:
    net, bundle = _load_bundle(cfg)
    f = bundle.field
    rng = cfg.rng()
    if cfg.secret is not None:
        s = _parse_secret(f, cfg.secret)
    else:
        s = rng.integers(0, f.order, size=bundle.k).tolist()
    y = encode(bundle.wiretap_code, s, rng)
    packets = evaluate(bundle.network_code, y)
    lines = [f"secret S={_fmt_vec(f, s)}", f"channel Y={_fmt_vec(f, y)}"]
    decoded = receiver_decode(bundle.network_code, extract_flows(net, bundle.n), packets)
    for r, y_hat in decoded.items():
        s_hat = decode(bundle.wiretap_code, y_hat)
        if [int(c) for c in s_hat] != list(s):
            raise AssertionError(f"receiver {r} failed to recover the secret")
        lines.append(f"receiver {r} decoded S={_fmt_vec(f, s_hat)}")
    taps = _edge_ids(net, cfg.tappable or "")
    if taps:
        lines.append(f"wiretapper W={_set_label(net, taps)}")
        for e in taps:
            lines.append(f"  edge {e} ({net.edge_label(e)}) carries {_fmt_vec(f, [packets[e]])[1:-1]}")
        rep = leakage(bundle.wiretap_code, observation_matrix(bundle.network_code, taps), taps)
        lines.append(f"  leakage {rep.leakage_qary} q-ary symbols")
    _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wiretapnet", description="Secure network coding for wiretapped multicast.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, network=True, bundle=False):
        if network:
            p.add_argument("--network", required=False, help="network file")
        if bundle:
            p.add_argument("--bundle", help="secure bundle file")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("generate", help="write a network file")
    g.add_argument("kind", choices=["butterfly", "combination", "random-dag"])
    g.add_argument("--n", type=int)
    g.add_argument("--M", type=int)
    g.add_argument("--edges", type=int)
    g.add_argument("--nodes", type=int)
    g.add_argument("--receivers", type=int, default=2)
    common(g, network=False)

    p = sub.add_parser("mincut", help="min-cut to every receiver")
    common(p)

    for name in ("construct", "secure-construct"):
        p = sub.add_parser(name, help="plain LIF code" if name == "construct" else "security-constrained LIF")
        common(p)
        p.add_argument("--field", help="e.g. GF(3), GF(2^4), or a prime power")
        p.add_argument("--n", type=int)
        if name == "secure-construct":
            p.add_argument("--k", type=int)
            p.add_argument("--mu", type=int, required=True)
            p.add_argument("--tappable", default="all", help="'all' or comma list of edge ids / labels")
            p.add_argument("--parity", help="parity check rows, e.g. '1,1' or '1,0,1;0,1,1'")

    for name in ("check", "audit"):
        p = sub.add_parser(name, help="rank-only secrecy check" if name == "check" else "exhaustive entropy audit")
        common(p, bundle=True)
        p.add_argument("--mu", type=int, help="override the bundle's adversary strength")

    b = sub.add_parser("bounds", help="alphabet-size bounds")
    b.add_argument("--network")
    b.add_argument("--edges", type=int)
    b.add_argument("--mu", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--delta", type=int)
    b.add_argument("--out")

    s = sub.add_parser("simulate", help="encode, multicast and tap one secret")
    common(s, bundle=True)
    s.add_argument("--secret", help="comma list of field tokens")
    s.add_argument("--tappable", "--taps", dest="tappable", default="",
                   help="tapped edges (ids or labels)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    handlers = {"mincut": cmd_mincut, "construct": cmd_construct, "secure-construct": cmd_secure_construct,
                "check": cmd_check, "audit": cmd_audit, "simulate": cmd_simulate}
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "bounds":
            return cmd_bounds(args)
        return handlers[args.command](cfg)
    except CeilingError as exc:
        sys.stderr.write(f"error: {exc}; use `check` for a rank-only verdict\n")
        return EXIT_INPUT
    except ConstructionError as exc:
        sys.stderr.write(f"construction failed: {exc}\n")
        return EXIT_CONSTRUCTION
    except (InputError, NetworkError, FieldError, formats.FormatError, ValueError, OSError, SyntaxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
