"""Arithmetic in GF(p^k) with the absolute trace.

Elements are dense coefficient vectors in the polynomial basis
``1, x, ..., x^(k-1)``.  Internally every element also has an integer code
``sum(c_i * p**i)``; enumeration order is increasing code, which is the
coefficient-lexicographic order with the highest coefficient most significant
(GF(4) enumerates as ``0, 1, x, x+1``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, InvalidArgument

MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def is_power_of_four(n: int) -> bool:
    while n > 1 and n % 4 == 0:
        n //= 4
    return n == 1


# -- polynomial helpers over GF(p), coefficient lists low -> high ------------

def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial mod."""
    a = [c % p for c in a]
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            shift = i - dm
            for j, mc in enumerate(mod):
                a[shift + j] = (a[shift + j] - c * mc) % p
    return _trim(a[:dm] if dm > 0 else [0])


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            g = list(low) + [1]
            if _poly_mod(f, g, p) == [0]:
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # candidates in increasing code of the lower coefficients, i.e. the same
    # order used to enumerate field elements
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        f = low + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class GfElement:
    coeffs: tuple[int, ...]

    def __repr__(self) -> str:
        return f"GfElement({list(self.coeffs)})"


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) defined by a monic irreducible modulus (coefficients low -> high)."""

    p: int
    k: int
    modulus: tuple[int, ...]
    _exp: np.ndarray = field(init=False, repr=False, compare=False)
    _log: np.ndarray = field(init=False, repr=False, compare=False)
    _digits: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidArgument(f"p={self.p} is not prime")
        if self.k < 1:
            raise InvalidArgument("extension degree k must be >= 1")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise InvalidArgument("modulus must be monic of degree k")
        if not _is_irreducible(list(self.modulus), self.p):
            raise InvalidArgument(f"modulus {self.modulus} is reducible over GF({self.p})")
        q = self.q
        pw = self.p ** np.arange(self.k)
        digits = (np.arange(q)[:, None] // pw) % self.p
        exp, log = self._build_log_tables(digits)
        object.__setattr__(self, "_digits", digits)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)

    @property
    def q(self) -> int:
        return self.p ** self.k

    def _encode(self, coeffs: Iterable[int]) -> int:
        return sum(int(c) * self.p ** i for i, c in enumerate(coeffs))

    def _build_log_tables(self, digits):
        q, p = self.q, self.p
        mod = list(self.modulus)
        exp = np.zeros(q - 1, dtype=np.int64)
        for g in range(2 if q > 2 else 1, q):
            gd = list(digits[g])
            cur = [1]
            seen = 0
            ok = True
            for i in range(q - 1):
                c = self._encode(cur)
                if i > 0 and c == 1:
                    ok = False
                    break
                exp[i] = c
                seen += 1
                cur = _poly_mod(_poly_mul(cur, gd, p), mod, p)
            if ok and seen == q - 1:
                break
        else:
            if q > 2:
                raise AssertionError("no primitive element found")
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        return exp, log

    # -- conversions -------------------------------------------------------

    def element(self, value: int | Sequence[int] | GfElement) -> GfElement:
        if isinstance(value, GfElement):
            value = value.coeffs
        if isinstance(value, (int, np.integer)):
            if not 0 <= value < self.q:
                raise InvalidArgument(f"code {value} outside GF({self.q})")
            return GfElement(tuple(int(c) for c in self._digits[int(value)]))
        coeffs = tuple(int(c) for c in value)
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise InvalidArgument(f"{coeffs} is not an element of GF({self.q})")
        return GfElement(coeffs)

    def code(self, x: GfElement | int) -> int:
        if isinstance(x, (int, np.integer)):
            return int(x)
        return self._encode(self.element(x).coeffs)

    def elements(self) -> list[GfElement]:
        return [self.element(i) for i in range(self.q)]

    # -- code-level arithmetic --------------------------------------------

    def _add(self, a: int, b: int) -> int:
        return self._encode((self._digits[a] + self._digits[b]) % self.p)

    def _neg(self, a: int) -> int:
        return self._encode((-self._digits[a]) % self.p)

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def _pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DomainError("zero has no inverse")
            return 1 if e == 0 else 0
        return int(self._exp[(self._log[a] * e) % (self.q - 1)])

    def _trace(self, a: int) -> int:
        total = 0
        for i in range(self.k):
            total = self._add(total, self._pow(a, self.p ** i))
        if total >= self.p:
            raise AssertionError("trace left the prime subfield")
        return total

    # -- element-level API --------------------------------------------------

    def add(self, a, b) -> GfElement:
        return self.element(self._add(self.code(a), self.code(b)))

    def neg(self, a) -> GfElement:
        return self.element(self._neg(self.code(a)))

    def sub(self, a, b) -> GfElement:
        return self.element(self._add(self.code(a), self._neg(self.code(b))))

    def mul(self, a, b) -> GfElement:
        return self.element(self._mul(self.code(a), self.code(b)))

    def pow(self, a, e: int) -> GfElement:
        return self.element(self._pow(self.code(a), e))

    def inv(self, a) -> GfElement:
        c = self.code(a)
        if c == 0:
            raise DomainError("zero has no multiplicative inverse")
        return self.element(self._pow(c, -1))

    def trace(self, a) -> int:
        return self._trace(self.code(a))

    # -- whole-field tables (indexed by code) ----------------------------

    def add_table(self) -> np.ndarray:
        d = self._digits
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return s @ (self.p ** np.arange(self.k))

    def mul_table(self) -> np.ndarray:
        q = self.q
        t = np.zeros((q, q), dtype=np.int64)
        if q > 1:
            lg = self._log[1:]
            t[1:, 1:] = self._exp[(lg[:, None] + lg[None, :]) % (q - 1)]
        return t

    def trace_table(self) -> np.ndarray:
        return np.array([self._trace(a) for a in range(self.q)], dtype=np.int64)

    def poly_str(self) -> str:
        terms = []
        for i in range(self.k, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i > 0 else (f"{c}" if i == 0 else f"{c}{mono}"))
        return " + ".join(terms)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """Build GF(p^k) using the smallest irreducible monic modulus.

    The result is cached, so repeated calls return the same object.
    """
    if not is_prime(p):
        raise InvalidArgument(f"p={p} is not prime")
    if k < 1:
        raise InvalidArgument("extension degree k must be >= 1")
    if p ** k > MAX_ORDER:
        raise CapacityError(f"GF({p}^{k}) exceeds the supported order {MAX_ORDER}")
    return FieldSpec(p, k, _smallest_irreducible(p, k))


def field_of_order(q: int) -> FieldSpec:
    pk = prime_power(q)
    if pk is None:
        raise InvalidArgument(f"q={q} is not a prime power")
    return make_field(*pk)


def arith(fld: FieldSpec, op: str, *operands):
    """Dispatch ``op`` in {add, sub, mul, inv, pow, neg} on ``fld``."""
    ops = {
        "add": (fld.add, 2),
        "sub": (fld.sub, 2),
        "mul": (fld.mul, 2),
        "inv": (fld.inv, 1),
        "neg": (fld.neg, 1),
        "pow": (fld.pow, 2),
    }
    if op not in ops:
        raise InvalidArgument(f"unknown field operation {op!r}")
    fn, arity = ops[op]
    if len(operands) != arity:
        raise InvalidArgument(f"{op} takes {arity} operand(s)")
    return fn(*operands)


def trace(fld: FieldSpec, x) -> int:
    """Absolute trace ``x + x^p + ... + x^(p^(k-1))`` as a residue mod p."""
    return fld.trace(x)


def enumerate_field(fld: FieldSpec) -> list[GfElement]:
    return fld.elements()
