"""Finite fields GF(p^m) with integer-coded elements.

An element is stored as an integer code whose base-p digits are its
polynomial coefficients, lowest degree first. For prime fields the code is
the residue itself. Multiplication uses discrete exp/log tables built from
the primitive element, which is what the array kernels consume.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

ORDER_CEILING = 2**20


class FieldError(ValueError):
    """Invalid field parameters or mixed-field arithmetic."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomial helpers over GF(p); coefficient lists, low degree first ---

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    lead_inv = pow(f[-1], -1, p)
    df = len(f) - 1
    while len(a) - 1 >= df:
        coef = a[-1] * lead_inv % p
        shift = len(a) - 1 - df
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _poly_mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_mod(out, f, p)


def _poly_powmod(a, e, f, p):
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _code_to_coeffs(code: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(code % p)
        code //= p
    return out


def _coeffs_to_code(coeffs: Sequence[int], p: int) -> int:
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] % p == 0:
        return False
    for d in range(1, m // 2 + 1):
        for low in range(p**d):
            divisor = _code_to_coeffs(low, p, d) + [1]
            if not _poly_mod(modulus, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    # ascending code of the low coefficients is lexicographic order read
    # from the highest degree down, so x^3+x+1 precedes x^3+x^2+1
    for low in range(p**m):
        cand = _code_to_coeffs(low, p, m) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True, eq=False)
class Field:
    """GF(p^m). Build with :func:`field_new` so instances are shared."""

    characteristic: int
    degree: int
    modulus: tuple[int, ...]
    primitive_code: int
    exp: np.ndarray = dc_field(repr=False)
    log: np.ndarray = dc_field(repr=False)

    @property
    def order(self) -> int:
        return self.characteristic**self.degree

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def m(self) -> int:
        return self.degree

    @property
    def q(self) -> int:
        return self.order

    @property
    def ctx(self) -> tuple:
        """Positional arguments the kernels expect after the arrays."""
        return (self.characteristic, self.degree, self.exp, self.log)

    @property
    def primitive_element(self) -> "FieldElement":
        return FieldElement(self.primitive_code, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def _key(self):
        return (self.characteristic, self.degree, self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Field({self.token})"

    @property
    def token(self) -> str:
        if self.degree == 1:
            return f"GF({self.characteristic})"
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"GF({self.characteristic}^{self.degree};modulus={coeffs})"

    # element construction and canonical tokens

    def code(self, x) -> int:
        """Integer code of ``x``: an element, an int code, or a coefficient tuple."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldError("element belongs to a different field")
            return x.code
        if isinstance(x, (tuple, list)):
            if len(x) != self.degree:
                raise FieldError(f"expected {self.degree} coefficients, got {len(x)}")
            if any(not 0 <= int(c) < self.characteristic for c in x):
                raise FieldError(f"coefficients must lie in [0, {self.characteristic})")
            return _coeffs_to_code([int(c) for c in x], self.characteristic)
        x = int(x)
        if self.degree == 1:
            return x % self.characteristic
        if not 0 <= x < self.order:
            raise FieldError(f"element code {x} out of range for {self.token}")
        return x

    def __call__(self, x) -> "FieldElement":
        return FieldElement(self.code(x), self)

    def to_token(self, code: int):
        """Serializable form: int for prime fields, coefficient tuple otherwise."""
        if self.degree == 1:
            return int(code)
        return tuple(_code_to_coeffs(int(code), self.characteristic, self.degree))

    def elements(self) -> Iterator["FieldElement"]:
        for c in range(self.order):
            yield FieldElement(c, self)

    def primitive_powers(self) -> list["FieldElement"]:
        return [FieldElement(int(c), self) for c in self.exp]

    # scalar arithmetic on codes

    def add_codes(self, a: int, b: int) -> int:
        p, m = self.characteristic, self.degree
        if m == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        return _coeffs_to_code([(x + y) % p for x, y in zip(_code_to_coeffs(a, p, m), _code_to_coeffs(b, p, m))], p)

    def neg_code(self, a: int) -> int:
        p, m = self.characteristic, self.degree
        if m == 1:
            return (-a) % p
        return _coeffs_to_code([(-x) % p for x in _code_to_coeffs(a, p, m)], p)

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.degree == 1:
            return a * b % self.characteristic
        return int(self.exp[(self.log[a] + self.log[b]) % (self.order - 1)])

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[(-self.log[a]) % (self.order - 1)])


class FieldElement:
    """Immutable element of a :class:`Field`."""

    __slots__ = ("code", "field")

    def __init__(self, code: int, field: Field):
        object.__setattr__(self, "code", int(code))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def value(self):
        return self.field.to_token(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("arithmetic between elements of distinct fields")
            return other.code
        if isinstance(other, int):
            return self.field.code(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field.add_codes(self.code, o), self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field.neg_code(self.code), self.field)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field.add_codes(self.code, self.field.neg_code(o)), self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field.mul_codes(self.code, o), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv_code(self.code), self.field)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(o, self.field).inverse()

    def __pow__(self, e: int):
        if self.code == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return self.field.one if e == 0 else self
        n = self.field.order - 1
        return FieldElement(int(self.field.exp[(int(self.field.log[self.code]) * e) % n]), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.code(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.field.token}:{self.value}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def primitive_powers(field: Field) -> list[FieldElement]:
    """[a^0, a^1, ..., a^(q-2)] for the field's primitive element a."""
    return field.primitive_powers()


def _mul_const_matrix(c: list[int], f: tuple[int, ...], p: int) -> np.ndarray:
    m = len(f) - 1
    rows = []
    for i in range(m):
        img = _poly_mulmod([0] * i + [1], c, f, p)
        rows.append(img + [0] * (m - len(img)))
    return np.array(rows, dtype=np.int64)


def _exp_table(p: int, m: int, modulus, g: int) -> np.ndarray:
    n = p**m - 1
    exp = np.ones(1, dtype=np.int64)
    if m == 1:
        while exp.size < n:
            step = pow(g, exp.size, p)
            exp = np.concatenate([exp, exp * step % p])
        return exp[:n]
    weights = p ** np.arange(m, dtype=np.int64)
    g_coeffs = _code_to_coeffs(g, p, m)
    while exp.size < n:
        step = _poly_powmod(g_coeffs, exp.size, list(modulus), p)
        mat = _mul_const_matrix(step, modulus, p)
        digits = (exp[:, None] // weights[None, :]) % p
        exp = np.concatenate([exp, ((digits @ mat) % p) @ weights])
    return exp[:n]


def _has_full_order(code: int, p: int, m: int, modulus, factors) -> bool:
    n = p**m - 1
    if m == 1:
        return all(pow(code, n // r, p) != 1 for r in factors)
    a = _code_to_coeffs(code, p, m)
    return all(_poly_powmod(a, n // r, list(modulus), p) != [1] for r in factors)


@functools.lru_cache(maxsize=None)
def field_new(p: int, m: int = 1, modulus: tuple[int, ...] | None = None) -> Field:
    """Build GF(p^m) with a verified modulus and primitive element."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if p**m > ORDER_CEILING:
        raise FieldError(f"field order {p}^{m} exceeds the ceiling {ORDER_CEILING}")
    if m == 1:
        if modulus:
            raise FieldError("prime fields take no modulus")
        modulus = ()
    elif modulus is None:
        modulus = smallest_irreducible(p, m)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {m}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    q = p**m
    factors = _prime_factors(q - 1)
    for g in range(1, q):
        if _has_full_order(g, p, m, modulus, factors):
            break
    else:  # pragma: no cover - every finite field has a generator
        raise RuntimeError("no primitive element found")
    exp = _exp_table(p, m, modulus, g)
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(q - 1, dtype=np.int64)
    if np.unique(exp).size != q - 1:
        raise RuntimeError("primitive element check failed")
    exp.setflags(write=False)
    log.setflags(write=False)
    return Field(p, m, tuple(modulus), g, exp, log)


def field_for_order(q: int) -> Field:
    """Field of order q (a prime power) with the default modulus."""
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1:
                break
            return field_new(p, m)
    raise FieldError(f"{q} is not a prime power")


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    factors = _prime_factors(q)
    return len(factors) == 1


def smallest_prime_power_above(bound: int) -> int:
    q = max(bound + 1, 2)
    while not is_prime_power(q):
        q += 1
    return q


_TOKEN = re.compile(r"^GF\((\d+)(?:\^(\d+))?(?:;modulus=([\d,\s]+))?\)$")


def parse_field(text: str) -> Field:
    """Parse ``GF(p)``, ``GF(p^m)``, ``GF(p^m;modulus=...)`` or a bare order."""
    text = text.strip().replace(" ", "")
    if text.isdigit():
        return field_for_order(int(text))
    match = _TOKEN.match(text)
    if not match:
        raise FieldError(f"unrecognized field token {text!r}")
    p = int(match.group(1))
    m = int(match.group(2) or 1)
    mod = match.group(3)
    if mod is None:
        if match.group(2) is None and not is_prime(p):
            return field_for_order(p)
        return field_new(p, m)
    return field_new(p, m, tuple(int(c) for c in mod.split(",")))
