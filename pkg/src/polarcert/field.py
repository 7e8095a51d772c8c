"""Table-driven arithmetic in small finite fields GF(p^h).

Elements are plain ``int`` indices: 0 is zero, 1 is one and index ``k >= 1``
stands for ``alpha**(k-1)`` where ``alpha`` is the class of ``x`` modulo the
defining (primitive) polynomial.  For GF(4) = GF(2)[x]/(x^2+x+1) this gives
the labelling ``0, 1, a, a^2`` -> ``0, 1, 2, 3``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DEFAULT_ORDER_CAP = 2**16

# Conway polynomials, coefficients listed from the constant term upwards.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
}


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, h)`` with ``q == p**h`` or raise FieldError."""
    for p in range(2, q + 1):
        if q % p == 0:
            h, r = 0, q
            while r % p == 0:
                r //= p
                h += 1
            if r != 1 or not _is_prime(p):
                raise FieldError(f"{q} is not a prime power")
            return p, h
    raise FieldError(f"{q} is not a prime power")


def _poly_mulmod(a, b, mod, p):
    # polynomials as coefficient lists, low degree first; mod is monic
    h = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, h - 1, -1):
        c = prod[k]
        if c:
            for j in range(h + 1):
                prod[k - h + j] = (prod[k - h + j] - c * mod[j]) % p
    out = prod[:h] + [0] * max(0, h - len(prod))
    return out


def is_irreducible(modulus, p: int) -> bool:
    """Exhaustive check that ``modulus`` has no factor of degree <= h/2 over GF(p)."""
    h = len(modulus) - 1
    if h < 1 or modulus[-1] % p == 0:
        return False
    for deg in range(1, h // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            div = list(tail) + [1]
            # long division of modulus by the monic divisor
            rem = [c % p for c in modulus]
            for k in range(h, deg - 1, -1):
                c = rem[k]
                if c:
                    for j in range(deg + 1):
                        rem[k - deg + j] = (rem[k - deg + j] - c * div[j]) % p
            if not any(rem[:deg]):
                return False
    return True


def _primitive_order(modulus, p):
    """Multiplicative order of x modulo ``modulus`` (None if x is not a unit)."""
    h = len(modulus) - 1
    one = [1] + [0] * (h - 1)
    x = [0, 1] + [0] * (h - 2) if h > 1 else [(-modulus[0]) % p]
    cur = list(x)
    for k in range(1, p**h):
        if cur == one:
            return k
        cur = _poly_mulmod(cur, x, modulus, p)
    return None


def find_primitive_polynomial(p: int, h: int):
    """Lexicographically least primitive monic polynomial of degree h."""
    for tail in itertools.product(range(p), repeat=h):
        mod = tuple(tail) + (1,)
        if mod[0] and is_irreducible(mod, p) and _primitive_order(mod, p) == p**h - 1:
            return mod
    raise FieldError(f"no primitive polynomial of degree {h} over GF({p})")


@dataclass(frozen=True, eq=False)
class Field:
    """GF(p^h) with precomputed exp/log, addition and multiplication tables."""

    p: int
    h: int
    modulus: tuple
    Q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "Q", self.p**self.h)
        p, h, Q = self.p, self.h, self.Q
        if len(self.modulus) != h + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree h")
        if not is_irreducible(self.modulus, p):
            raise FieldError(f"modulus {self.modulus} is reducible over GF({p})")
        if _primitive_order(self.modulus, p) != Q - 1:
            raise FieldError(f"x is not primitive modulo {self.modulus}")
        # polynomial vectors of alpha^k
        polys = []
        if h == 1:
            g = (-self.modulus[0]) % p
            cur = 1
            for _ in range(Q - 1):
                polys.append((cur,))
                cur = cur * g % p
        else:
            x = [0, 1] + [0] * (h - 2)
            cur = [1] + [0] * (h - 1)
            for _ in range(Q - 1):
                polys.append(tuple(cur))
                cur = _poly_mulmod(cur, x, list(self.modulus), p)
        vec = [(0,) * h] + polys  # index -> coefficient vector
        lookup = {v: i for i, v in enumerate(vec)}
        add = np.zeros((Q, Q), dtype=np.int64)
        for i in range(Q):
            for j in range(Q):
                s = tuple((a + b) % p for a, b in zip(vec[i], vec[j]))
                add[i, j] = lookup[s]
        mul = np.zeros((Q, Q), dtype=np.int64)
        for i in range(1, Q):
            for j in range(1, Q):
                mul[i, j] = (i - 1 + j - 1) % (Q - 1) + 1
        neg = np.array([lookup[tuple((-a) % p for a in vec[i])] for i in range(Q)], dtype=np.int64)
        inv = np.zeros(Q, dtype=np.int64)
        for i in range(1, Q):
            inv[i] = (-(i - 1)) % (Q - 1) + 1
        for name, arr in [("add", add), ("mul", mul), ("neg", neg), ("inv", inv)]:
            arr.setflags(write=False)
            object.__setattr__(self, name + "_table", arr)
        object.__setattr__(self, "_vec", tuple(vec))
        object.__setattr__(self, "_lookup", lookup)
        # Python-list mirrors for scalar hot loops
        object.__setattr__(self, "_add", add.tolist())
        object.__setattr__(self, "_mul", mul.tolist())
        object.__setattr__(self, "_neg", neg.tolist())
        object.__setattr__(self, "_inv", inv.tolist())

    # -- scalar arithmetic -------------------------------------------------
    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.Q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.describe())
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in " + self.describe())
        return self._mul[a][self._inv[b]]

    def arith(self, a: int, b: int, op: str) -> int:
        return {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op](a, b)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return (a - 1) * e % (self.Q - 1) + 1

    def log(self, a: int) -> int:
        if a == 0:
            raise FieldError("log of zero")
        return a - 1

    def exp(self, k: int) -> int:
        return k % (self.Q - 1) + 1

    def frobenius(self, a: int, k: int = 1) -> int:
        """a ** (p ** k)."""
        if not 0 <= k < self.h:
            raise FieldError(f"frobenius exponent {k} outside [0, {self.h})")
        return self.pow(a, self.p**k)

    # -- conjugation for quadratic extensions -------------------------------
    @property
    def is_square_order(self) -> bool:
        return self.h % 2 == 0

    @property
    def sqrt_order(self) -> int:
        if not self.is_square_order:
            raise FieldError(f"{self.describe()} is not a quadratic extension")
        return self.p ** (self.h // 2)

    def conj(self, a: int) -> int:
        return self.pow(a, self.sqrt_order)

    def subfield(self, order: int) -> list[int]:
        """Elements of the subfield of the given order."""
        if (self.Q - 1) % (order - 1):
            raise FieldError(f"GF({order}) is not a subfield of {self.describe()}")
        return [0] + [a for a in range(1, self.Q) if self.pow(a, order) == a]

    # -- conversions ---------------------------------------------------------
    def from_int(self, n: int) -> int:
        """Element whose polynomial coordinates are the base-p digits of n."""
        digits = []
        for _ in range(self.h):
            digits.append(n % self.p)
            n //= self.p
        return self._lookup[tuple(digits)]

    def to_int(self, a: int) -> int:
        return sum(c * self.p**i for i, c in enumerate(self._vec[a]))

    def label(self, a: int) -> str:
        if a < 2:
            return str(a)
        return "a" if a == 2 else f"a^{a - 1}"

    def parse(self, s: str) -> int:
        s = s.strip().replace("²", "^2").replace("³", "^3")
        if s in ("0", "1"):
            return int(s)
        m = re.fullmatch(r"a(?:\^?(\d+))?", s)
        if not m:
            raise FieldError(f"cannot parse field element {s!r}")
        return self.exp(int(m.group(1) or 1))

    def describe(self) -> str:
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.h}; modulus={coeffs})"

    def __repr__(self):
        return self.describe()

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.h, self.modulus) == (
            other.p,
            other.h,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.h, self.modulus))


@lru_cache(maxsize=None)
def _gf_cached(p: int, h: int, modulus: tuple) -> Field:
    return Field(p, h, modulus)


def GF(q: int, modulus=None, cap: int = DEFAULT_ORDER_CAP) -> Field:
    """Field of order q; Conway polynomial unless ``modulus`` is given."""
    if q > cap:
        raise FieldError(f"field order {q} exceeds cap {cap}")
    p, h = prime_power(q)
    if modulus is None:
        modulus = CONWAY.get((p, h)) or find_primitive_polynomial(p, h)
    return _gf_cached(p, h, tuple(int(c) % p for c in modulus))
