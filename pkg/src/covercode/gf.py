"""Table-driven arithmetic in GF(p^e) and subfield embeddings.

Elements are encoded as integers in ``[0, q)``: the base-``p`` digits of the
integer are the coefficients ``(a_0, ..., a_{e-1})`` of the element written in
the polynomial basis ``1, x, ..., x^{e-1}`` modulo the defining polynomial.
Every operation accepts plain ints or integer numpy arrays (broadcasting).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

FIELD_CAP = 1 << 20
TABLE_CAP = 1024  # full q x q add/mul tables below this order


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return p, e


def _digits(v: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(v % p)
        v //= p
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _power_cycle(p: int, e: int, low: list[int]) -> list[int] | None:
    """Powers of x modulo x^e + sum(low[i] x^i), or None if x is not primitive."""
    q = p**e
    if e == 1:
        g = (-low[0]) % p
        seq, v = [], 1
        for _ in range(q - 1):
            seq.append(v)
            v = v * g % p
            if v == 1 and len(seq) < q - 1:
                return None
        return seq if v == 1 else None
    top = p ** (e - 1)
    low_enc = _undigits(low, p)
    seq, v = [], 1
    for _ in range(q - 1):
        seq.append(v)
        # multiply by x: shift digits up, then fold x^e = -sum(low[i] x^i)
        t = v // top
        shifted = (v % top) * p
        if t:
            if p == 2:
                shifted ^= low_enc
            else:
                ds = _digits(shifted, p, e)
                ds = [(d - t * c) % p for d, c in zip(ds, low)]
                shifted = _undigits(ds, p)
        v = shifted
        if v == 1 and len(seq) < q - 1:
            return None
    return seq if v == 1 else None


@dataclass(frozen=True, eq=False)
class FieldTables:
    """GF(p^e) with exp/log tables relative to the root of ``irreducible``.

    ``irreducible`` holds the low coefficients ``(a_0, ..., a_{e-1})`` of the
    monic defining polynomial ``x^e + a_{e-1} x^{e-1} + ... + a_0``.
    """

    p: int
    e: int
    irreducible: tuple[int, ...]
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    add_table: np.ndarray | None = field(default=None, repr=False)
    mul_table: np.ndarray | None = field(default=None, repr=False)

    zero = 0
    one = 1

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def primitive(self) -> int:
        return int(self.exp_table[1]) if self.q > 2 else 1

    def header(self) -> str:
        return f"q {self.p}^{self.e}"

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        if self.add_table is not None:
            return _out(self.add_table[a, b], a, b)
        return _out(self._digitwise(np.asarray(a), np.asarray(b), 1), a, b)

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.p == 2:
            return a
        if self.e == 1:
            return (-a) % self.p
        return _out(self._digitwise(np.asarray(a), np.zeros_like(np.asarray(a)), -1), a)

    def mul(self, a, b):
        if self.mul_table is not None:
            return _out(self.mul_table[a, b], a, b)
        a_ = np.asarray(a, dtype=np.int64)
        b_ = np.asarray(b, dtype=np.int64)
        la = self.log_table[a_]
        lb = self.log_table[b_]
        r = self.exp_table[(la + lb) % (self.q - 1)]
        return _out(np.where((a_ == 0) | (b_ == 0), 0, r), a, b)

    def inv(self, a):
        a_ = np.asarray(a, dtype=np.int64)
        if np.any(a_ == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return _out(self.exp_table[(-self.log_table[a_]) % (self.q - 1)], a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp_table[(int(self.log_table[a]) * k) % (self.q - 1)])

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        from math import gcd

        n = self.q - 1
        return n // gcd(n, int(self.log_table[a]))

    def dot(self, u, v):
        """Sum of products along the last axis."""
        prod = self.mul(np.asarray(u), np.asarray(v))
        acc = prod[..., 0]
        for j in range(1, prod.shape[-1]):
            acc = self.add(acc, prod[..., j])
        return acc

    def _digitwise(self, a: np.ndarray, b: np.ndarray, sign: int) -> np.ndarray:
        p = self.p
        a = a.astype(np.int64)
        b = b.astype(np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.e):
            da, db = a % p, b % p
            if sign > 0:
                out += ((da + db) % p) * scale
            else:
                out += ((-da) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def digits(self, a: int) -> tuple[int, ...]:
        return tuple(_digits(int(a), self.p, self.e))


def _out(res, *args):
    if all(isinstance(x, (int, np.integer)) for x in args):
        return int(res)
    return res


@lru_cache(maxsize=None)
def field_create(p: int, e: int = 1) -> FieldTables:
    """Build GF(p^e).

    The defining polynomial is the least monic degree-``e`` polynomial (low
    coefficients read as a base-``p`` integer) whose root is primitive, so the
    result is identical across runs.
    """
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if e < 1:
        raise FieldError("exponent must be positive")
    q = p**e
    if q > FIELD_CAP:
        raise FieldError(f"q={q} exceeds the field cap {FIELD_CAP}")

    if q == 2:
        seq, low = [1], [1]
    else:
        for code in range(p**e):
            low = _digits(code, p, e)
            if low[0] == 0:
                continue
            seq = _power_cycle(p, e, low)
            if seq is not None:
                break
        else:  # pragma: no cover - primitive polynomials always exist
            raise FieldError(f"no primitive polynomial for GF({p}^{e})")

    exp = np.array(seq + seq, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    log[np.array(seq, dtype=np.int64)] = np.arange(q - 1)

    F = FieldTables(p, e, tuple(low), exp, log)
    if q <= TABLE_CAP:
        el = np.arange(q, dtype=np.int64)
        A, B = np.meshgrid(el, el, indexing="ij")
        if p == 2:
            add = A ^ B
        elif e == 1:
            add = (A + B) % p
        else:
            add = F._digitwise(A, B, 1)
        mul = F.mul(A, B)
        F = FieldTables(p, e, tuple(low), exp, log, add.astype(np.int64), np.asarray(mul, dtype=np.int64))
    for arr in (F.exp_table, F.log_table, F.add_table, F.mul_table):
        if arr is not None:
            arr.setflags(write=False)
    return F


def field_of_order(q: int) -> FieldTables:
    p, e = prime_power(q)
    return field_create(p, e)


def parse_header(text: str) -> FieldTables:
    """Inverse of :meth:`FieldTables.header` (``"q <p>^<e>"``)."""
    parts = text.split()
    if len(parts) != 2 or parts[0] != "q" or "^" not in parts[1]:
        raise FieldError(f"bad field header {text!r}")
    p, e = parts[1].split("^")
    return field_create(int(p), int(e))


@dataclass(frozen=True, eq=False)
class Embedding:
    """Field homomorphism GF(q) -> GF(q^m) as an explicit lookup table."""

    sub: FieldTables
    sup: FieldTables
    index_factor: int
    table: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        return self.sup.e // self.sub.e

    def __call__(self, x):
        return _out(self.table[x], x)


def subfield_embedding(sub: FieldTables, sup: FieldTables) -> Embedding:
    """Embed ``sub`` (order q) into ``sup`` (order q^m).

    The image of sub's primitive element is taken among the powers
    ``g^(k*j)`` with ``k = (q^m - 1)/(q - 1)``, ``g`` the primitive element of
    ``sup`` and ``j`` the least exponent coprime to ``q - 1`` for which sub's
    defining polynomial vanishes, so the map is a homomorphism of the tables
    as built.
    """
    from math import gcd

    if sub.p != sup.p or sup.e % sub.e:
        raise FieldError(f"{sup!r} is not an extension of {sub!r}")
    q, Q = sub.q, sup.q
    k = (Q - 1) // (q - 1)
    table = np.zeros(q, dtype=np.int64)
    if q == 2:
        table[1] = 1
    else:
        # prime-subfield constants share their encoding in both fields
        coeffs = list(sub.irreducible) + [1]
        for j in range(1, q - 1):
            if gcd(j, q - 1) != 1:
                continue
            gamma = sup.power(sup.primitive, k * j)
            acc, xp = 0, 1
            for c in coeffs:
                acc = sup.add(acc, sup.mul(c, xp))
                xp = sup.mul(xp, gamma)
            if acc == 0:
                break
        else:  # pragma: no cover
            raise FieldError("no root of the subfield polynomial found")
        logs = np.arange(q - 1, dtype=np.int64)
        table[sub.exp_table[: q - 1]] = sup.exp_table[(logs * k * j) % (Q - 1)]
    table.setflags(write=False)
    return Embedding(sub, sup, k, table)
