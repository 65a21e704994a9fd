"""Coset (syndrome) coding for the type-II wiretap channel.

k secret symbols select a coset of the null space of a k x n parity check
matrix H; the transmitted word is a uniformly random member of that coset.
Decoding is the syndrome H @ y.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .gf import Field
from .matrix import (DimensionError, Matrix, null_space, rank, right_inverse, stack,
                     vandermonde)


@dataclass(frozen=True)
class SecrecyReport:
    """Leakage of one observation, in q-ary symbols.

    ``leakage_qary`` is zero exactly when the observation is independent of
    the secret.
    """

    wiretap_set: tuple[int, ...]
    observed_rank: int
    leakage_qary: int

    @property
    def secure(self) -> bool:
        return self.leakage_qary == 0


@dataclass(frozen=True, eq=False)
class WiretapCode:
    field: Field
    H: Matrix

    def __post_init__(self):
        if self.H.field != self.field:
            raise ValueError("parity check matrix is over a different field")
        if self.H.rows > self.H.cols:
            raise ValueError("k must not exceed n")
        if rank(self.H) != self.H.rows:
            raise ValueError("parity check matrix must have full row rank")

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def k(self) -> int:
        return self.H.rows

    @functools.cached_property
    def _maps(self) -> tuple[Matrix, Matrix]:
        # Y = A s + B r with H A = I and the columns of B spanning ker H
        return right_inverse(self.H), null_space(self.H)

    @property
    def secret_map(self) -> Matrix:
        return self._maps[0]

    @property
    def randomness_map(self) -> Matrix:
        return self._maps[1]

    @property
    def generator(self) -> Matrix:
        """n x n matrix [A | B] taking [s; r] to the channel word."""
        a, b = self._maps
        return Matrix(self.field, np.hstack([a.data, b.data]))


def from_parity_check(field: Field, rows) -> WiretapCode:
    if isinstance(rows, Matrix):
        return WiretapCode(field, rows)
    if isinstance(rows, np.ndarray):
        return WiretapCode(field, Matrix(field, rows))
    return WiretapCode(field, Matrix.from_rows(field, rows))


def mds_parity_check(field: Field, n: int, k: int) -> WiretapCode:
    """First k rows of an n-point Vandermonde matrix; any k columns are independent.

    Points are the primitive powers in order, then zero, so row zero is
    all ones and GF(3), n=2, k=1 gives H = [1 1].
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > field.order:
        raise ValueError(f"{field.token} has only {field.order} evaluation points, need {n}")
    points = [int(c) for c in field.exp[: min(n, field.order - 1)]]
    if n == field.order:
        points.append(0)
    return WiretapCode(field, vandermonde(field, k, points, allow_zero=True))


def _vector(code: WiretapCode, v, length: int, what: str) -> np.ndarray:
    arr = np.array([code.field.code(x) for x in v], dtype=np.int64)
    if arr.shape != (length,):
        raise DimensionError(f"{what} must have length {length}, got {arr.shape[0]}")
    return arr


def encode_with_randomness(code: WiretapCode, s: Sequence, r: Sequence) -> np.ndarray:
    """Coset member selected by the n-k randomness symbols ``r`` (codes)."""
    s = _vector(code, s, code.k, "secret")
    r = _vector(code, r, code.n - code.k, "randomness")
    x = np.concatenate([s, r])[:, None]
    return kernels.matmul(code.generator.data, x, *code.field.ctx)[:, 0]


def encode(code: WiretapCode, s: Sequence, rng: np.random.Generator) -> np.ndarray:
    """Random coset member with syndrome ``s``; returns element codes.

    Draws n-k uniform symbols from ``rng`` (none when k == n).
    """
    r = rng.integers(0, code.field.order, size=code.n - code.k) if code.n > code.k else []
    return encode_with_randomness(code, s, r)


def decode(code: WiretapCode, y: Sequence) -> np.ndarray:
    y = _vector(code, y, code.n, "channel word")
    return kernels.matmul(code.H.data, y[:, None], *code.field.ctx)[:, 0]


def coset(code: WiretapCode, s: Sequence) -> set[tuple[int, ...]]:
    """Every channel word with syndrome ``s`` (by exhaustive search over F_q^n)."""
    s = tuple(_vector(code, s, code.k, "secret").tolist())
    q, n = code.field.order, code.n
    words = _all_vectors(q, n)
    synd = kernels.matmul(words, code.H.data.T, *code.field.ctx)
    mask = np.all(synd == np.array(s, dtype=np.int64), axis=1)
    return {tuple(w) for w in words[mask].tolist()}


def _all_vectors(q: int, n: int) -> np.ndarray:
    idx = np.arange(q**n, dtype=np.int64)
    return np.stack([(idx // q ** (n - 1 - i)) % q for i in range(n)], axis=1) if n else np.zeros((1, 0), np.int64)


def leakage(code: WiretapCode, observation: Matrix, wiretap_set: Sequence[int] = ()) -> SecrecyReport:
    """I(S; Z) = rank H + rank C - rank [H; C] for the observation matrix C."""
    if observation.cols != code.n:
        raise DimensionError(f"observation has {observation.cols} columns, code has n={code.n}")
    r_obs = rank(observation)
    leak = code.k + r_obs - rank(stack(code.H, observation))
    return SecrecyReport(tuple(wiretap_set), r_obs, leak)
