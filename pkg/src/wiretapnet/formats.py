"""Text formats for network codes and secure bundles.

Element tokens are ints for prime fields and coefficient tuples for
extension fields; vectors and matrices are bracketed lists of tokens.
"""
from __future__ import annotations

import ast
import re

from .gf import Field, parse_field
from .matrix import Matrix
from .netcode import NetworkCode, from_local
from .network import Network
from .secure import SecureCodeBundle
from .wiretap import WiretapCode


class FormatError(ValueError):
    pass


def _tokens(field: Field, codes) -> str:
    return repr([field.to_token(int(c)) for c in codes]).replace(" ", "")


def matrix_token(m: Matrix) -> str:
    return repr(m.tolist()).replace(" ", "")


def _edge_lines(code: NetworkCode) -> list[str]:
    f = code.field
    return [f"edge {e}: local={_tokens(f, code.local[e])} global={_tokens(f, code.global_vectors.data[e])}"
            for e in range(code.network.num_edges)]


def code_to_text(code: NetworkCode) -> str:
    lines = [f"field {code.field.token}", f"n {code.n}", *_edge_lines(code)]
    return "\n".join(lines) + "\n"


def bundle_to_text(bundle: SecureCodeBundle) -> str:
    code = bundle.wiretap_code
    taps = bundle.tappable
    if taps == frozenset(range(bundle.network.num_edges)):
        tap_text = "all"
    else:
        tap_text = ",".join(map(str, sorted(taps)))
    lines = [f"field {code.field.token}", f"n {code.n}", f"k {code.k}", f"H {matrix_token(code.H)}",
             *_edge_lines(bundle.network_code), f"mu {bundle.mu}", f"tappable {tap_text}"]
    return "\n".join(lines) + "\n"


_EDGE = re.compile(r"^edge\s+(\d+):\s*local=(\S*)\s+global=(\S*)$")


def _records(text: str) -> tuple[dict[str, str], dict[int, tuple[str, str]]]:
    keys: dict[str, str] = {}
    edges: dict[int, tuple[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EDGE.match(line)
        if m:
            edges[int(m.group(1))] = (m.group(2), m.group(3))
            continue
        key, _, value = line.partition(" ")
        if key not in ("field", "n", "k", "H", "mu", "tappable"):
            raise FormatError(f"line {lineno}: unknown directive {key!r}")
        keys[key] = value.strip()
    return keys, edges


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError) as exc:
        raise FormatError(f"bad token list {text!r}") from exc


def _code_from_records(keys, edges, net: Network) -> NetworkCode:
    if "field" not in keys or "n" not in keys:
        raise FormatError("code needs field and n lines")
    field = parse_field(keys["field"])
    n = int(keys["n"])
    if sorted(edges) != list(range(net.num_edges)):
        raise FormatError(f"expected edge records 0..{net.num_edges - 1}")
    local = [_literal(edges[e][0]) for e in range(net.num_edges)]
    code = from_local(field, net, n, local)
    stored = Matrix.from_rows(field, [_literal(edges[e][1]) for e in range(net.num_edges)], cols=n)
    if stored != code.global_vectors:
        raise FormatError("stored global vectors disagree with the local coefficients")
    return code


def code_from_text(text: str, net: Network) -> NetworkCode:
    keys, edges = _records(text)
    return _code_from_records(keys, edges, net)


def bundle_from_text(text: str, net: Network) -> SecureCodeBundle:
    keys, edges = _records(text)
    for key in ("k", "H", "mu", "tappable"):
        if key not in keys:
            raise FormatError(f"bundle is missing the {key!r} line")
    code = _code_from_records(keys, edges, net)
    H = Matrix.from_rows(code.field, _literal(keys["H"]), cols=code.n)
    wt = WiretapCode(code.field, H)
    if wt.k != int(keys["k"]) or wt.n != code.n:
        raise FormatError("H dimensions disagree with the k and n lines")
    taps = keys["tappable"]
    tappable = (frozenset(range(net.num_edges)) if taps == "all"
                else frozenset(int(e) for e in taps.split(",") if e.strip()))
    return SecureCodeBundle(wt, code, int(keys["mu"]), tappable)
