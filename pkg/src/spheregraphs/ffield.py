"""Exact arithmetic in F_q for odd prime powers q = p^e.

Field elements are integer codes in [0, q).  The code sum(c_i * p**i)
corresponds to the little-endian coefficient vector [c_0, ..., c_{e-1}]
of a residue modulo the defining polynomial, so code order is exactly
the canonical enumeration order (for F_9 with modulus X^2+1:
0, 1, 2, X, 1+X, 2+X, 2X, 1+2X, 2+2X).  All operations go through
precomputed q x q lookup tables; everything here targets desk scale
(q up to a few thousand), not cryptographic sizes.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

__all__ = ["Field", "field_for_order", "is_prime"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mul(u, v, p):
    out = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                out[i + j] = (out[i + j] + ui * vj) % p
    return out


def _poly_mod(u, modulus, p):
    """Reduce u modulo a monic polynomial, coefficients little-endian."""
    r = list(u)
    deg_m = len(modulus) - 1
    for k in range(len(r) - 1, deg_m - 1, -1):
        c = r[k] % p
        if c:
            for j in range(deg_m + 1):
                r[k - deg_m + j] = (r[k - deg_m + j] - c * modulus[j]) % p
    return [c % p for c in r[:deg_m]] + [0] * max(0, deg_m - len(r))


def _is_irreducible(modulus, p) -> bool:
    """Trial division by every monic polynomial of degree <= e//2."""
    e = len(modulus) - 1
    if e == 1:
        return True
    for k in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            divisor = list(tail) + [1]
            if not any(_poly_mod(modulus, divisor, p)):
                return False
    return True


def _default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e, candidates ordered by code."""
    for code in range(p**e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        candidate = tuple(coeffs) + (1,)
        if _is_irreducible(candidate, p):
            return candidate
    raise ValueError(f"no irreducible polynomial of degree {e} over F_{p}")


class Field:
    """Arithmetic context for F_q, q = p^e with p an odd prime.

    Scalar operations take and return integer element codes.  The raw
    numpy tables (``add_table``, ``mul_table``, ``neg_table``) are exposed
    read-only for vectorized bulk work.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        self.p = p
        self.e = e
        self.q = p**e
        if e == 1:
            # placeholder X - 0, unused for prime fields
            self.modulus = (0, 1)
        elif modulus is None:
            self.modulus = _default_modulus(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if not _is_irreducible(modulus, p):
                raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
            self.modulus = modulus
        self._build_tables()
        self.add_table.setflags(write=False)
        self.mul_table.setflags(write=False)
        self.neg_table.setflags(write=False)

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            idx = np.arange(q, dtype=np.int64)
            self.add_table = ((idx[:, None] + idx[None, :]) % p).astype(np.int16)
            self.mul_table = ((idx[:, None] * idx[None, :]) % p).astype(np.int16)
        else:
            digits = [self.coeffs(a) for a in range(q)]
            add = np.zeros((q, q), dtype=np.int16)
            mul = np.zeros((q, q), dtype=np.int16)
            for a in range(q):
                da = digits[a]
                for b in range(a, q):
                    db = digits[b]
                    s = self._code([(x + y) % p for x, y in zip(da, db)])
                    add[a, b] = add[b, a] = s
                    m = self._code(_poly_mod(_poly_mul(da, db, p), self.modulus, p))
                    mul[a, b] = mul[b, a] = m
            self.add_table = add
            self.mul_table = mul
        self.neg_table = self.add_table[0].copy()  # placeholder, fixed below
        neg = np.zeros(q, dtype=np.int16)
        for a in range(q):
            row = self.add_table[a]
            neg[a] = int(np.nonzero(row == 0)[0][0])
        self.neg_table = neg
        inv = np.zeros(q, dtype=np.int16)
        for a in range(1, q):
            row = self.mul_table[a]
            inv[a] = int(np.nonzero(row == 1)[0][0])
        self._inv = inv
        self.nu = self._find_generator()
        dlog = np.full(q, -1, dtype=np.int64)
        acc = 1
        for k in range(q - 1):
            dlog[acc] = k
            acc = int(self.mul_table[acc, self.nu])
        self._dlog = dlog
        roots: list[list[int]] = [[] for _ in range(q)]
        for t in range(q):
            roots[int(self.mul_table[t, t])].append(t)
        self._sqrts = [tuple(r) for r in roots]

    def _code(self, coeffs) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    def _find_generator(self) -> int:
        target = self.q - 1
        for a in range(1, self.q):
            acc, order = a, 1
            while acc != 1:
                acc = int(self.mul_table[acc, a])
                order += 1
                if order > target:
                    break
            if order == target:
                return a
        raise RuntimeError("no multiplicative generator found")  # unreachable

    # -- scalar operations ------------------------------------------------

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"element code {a} out of range for F_{self.q}")
        return a

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[self._check(a), self._check(b)])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[self._check(a), self.neg_table[self._check(b)]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[self._check(a), self._check(b)])

    def neg(self, a: int) -> int:
        return int(self.neg_table[self._check(a)])

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise ZeroDivisionError("inversion of zero")
        return int(self._inv[a])

    def pow(self, a: int, k: int) -> int:
        self._check(a)
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 1, a
        while k:
            if k & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            k >>= 1
        return result

    def is_square(self, a: int) -> bool:
        """Euler criterion; zero counts as a square."""
        if self._check(a) == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrts(self, a: int) -> tuple[int, ...]:
        """All t with t*t == a, in enumeration order."""
        return self._sqrts[self._check(a)]

    def dlog(self, a: int) -> int:
        """k in [0, q-1) with nu**k == a."""
        if self._check(a) == 0:
            raise ValueError("discrete log of zero is undefined")
        return int(self._dlog[a])

    # -- enumeration and serialization -------------------------------------

    def elements(self) -> range:
        """All q elements in canonical enumeration order."""
        return range(self.q)

    def coeffs(self, a: int) -> list[int]:
        """Little-endian coefficient vector of an element code."""
        self._check(a)
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.e:
            raise ValueError(f"expected {self.e} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.p})")
        return self._code(coeffs)

    def header(self) -> dict:
        """Field identification embedded in every serialized output."""
        return {
            "p": self.p,
            "e": self.e,
            "q": self.q,
            "modulus": list(self.modulus),
            "nu": self.nu,
        }

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"Field(p={self.p}, e={self.e}, modulus={list(self.modulus)})"


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus) -> Field:
    return Field(p, e, modulus)


def field_for_order(q: int, modulus=None) -> Field:
    """Field of order q, factoring q = p^e; fields are cached and shared."""
    if q < 3 or q % 2 == 0:
        raise ValueError(f"q must be an odd prime power >= 3, got {q}")
    p = 3
    while p * p <= q and q % p:
        p += 2
    if p * p > q:
        p = q
    e = 0
    n = q
    while n > 1 and n % p == 0:
        n //= p
        e += 1
    if n != 1 or not is_prime(p):
        raise ValueError(f"q={q} is not a prime power")
    return _cached_field(p, e, tuple(modulus) if modulus is not None else None)
