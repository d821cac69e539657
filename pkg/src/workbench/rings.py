"""Exact coefficient rings.

Every ring object exposes the same small vectorised interface so that the
linear algebra layer can be written once:

    zeros, eye, asarray, add, sub, mul, neg, matmul, is_zero, inv_scalar,
    format, parse, plus ``is_field`` and (for local rings) ``valuation``.

Finite fields and ``Z/p^a`` store elements as ``int64`` numpy arrays; Q,
``Z_(p)`` and truncated series rings store Python objects in ``dtype=object``
arrays.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    ContextMismatch,
    InsufficientPrecision,
    NegativeValuation,
    NonUnitDivision,
    PrecisionUnderflow,
)

INF = math.inf

DEFAULT_PADIC_DIGITS = 8
DEFAULT_T_PRECISION = 32


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
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


def vp(n: int, p: int) -> float:
    """p-adic valuation of an integer (infinity for 0)."""
    if n == 0:
        return INF
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _obj_array(values, shape=None):
    values = list(values)
    arr = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        arr[i] = v
    if shape is not None:
        arr = arr.reshape(shape)
    return arr


# ---------------------------------------------------------------------------
# p-local rationals


class PLocalRational:
    """An element of Q carrying a distinguished prime ``p``.

    Elements of the valuation ring ``Z_(p)`` are those with a ``p``-free
    denominator; ``/`` and ``inv`` are ring operations and refuse to divide by
    a non-unit of ``Z_(p)``.
    """

    __slots__ = ("p", "num", "den")

    def __init__(self, p: int, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        self.p = p
        self.num = num // g
        self.den = den // g

    @classmethod
    def from_value(cls, p: int, x) -> "PLocalRational":
        if isinstance(x, PLocalRational):
            if x.p != p:
                raise ContextMismatch(f"prime {x.p} != {p}")
            return x
        f = Fraction(x)
        return cls(p, f.numerator, f.denominator)

    def _coerce(self, other) -> "PLocalRational":
        if isinstance(other, PLocalRational):
            if other.p != self.p:
                raise ContextMismatch(f"prime {other.p} != {self.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PLocalRational.from_value(self.p, other)
        return NotImplemented

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PLocalRational(self.p, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return PLocalRational(self.p, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PLocalRational(self.p, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "PLocalRational":
        if self.num == 0 or self.valuation() > 0:
            raise NonUnitDivision(f"{self} is not a unit of Z_({self.p})")
        return PLocalRational(self.p, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, PLocalRational):
            return self.p == other.p and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.num, self.den))

    def valuation(self):
        if self.num == 0:
            return INF
        return vp(self.num, self.p) - vp(self.den, self.p)

    def in_ring(self) -> bool:
        return self.den % self.p != 0

    def is_unit(self) -> bool:
        return self.num != 0 and self.valuation() == 0

    def reduce_mod_m(self) -> "FqElem":
        """Image in the residue field ``F_p``."""
        if not self.in_ring():
            raise NegativeValuation(f"{self} does not lie in Z_({self.p})")
        F = FiniteField(self.p)
        return F(self.num * pow(self.den, -1, self.p))

    def __str__(self):
        return f"{self.num}/{self.den}" if self.den != 1 else str(self.num)

    def __repr__(self):
        return f"PLocalRational({self.p}, {self.num}, {self.den})"


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists (low degree first)


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    a = _ptrim(a)
    b = _ptrim(b)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _ptrim(a)
    return a


def _pmulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _monic_polys(p, d):
    for code in range(p**d):
        coeffs = [(code // p**t) % p for t in range(d)]
        yield coeffs + [1]


def _is_irreducible(f, p):
    s = len(f) - 1
    for d in range(1, s // 2 + 1):
        for g in _monic_polys(p, d):
            if not _pmod(f, g, p):
                return False
    return True


def _is_primitive(f, p):
    s = len(f) - 1
    order = p**s - 1
    if order == 1:
        return True
    for r in prime_factors(order):
        e = order // r
        result, base = [1], [0, 1]
        while e:
            if e & 1:
                result = _pmulmod(result, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        if result == [1]:
            return False
    return True


@lru_cache(maxsize=None)
def conway_style_modulus(p: int, s: int) -> tuple:
    """First primitive monic irreducible of degree ``s`` in lexicographic order
    of its lower coefficients (read as base-``p`` digits, constant term first)."""
    if s == 1:
        return (0, 1)
    for f in _monic_polys(p, s):
        if f[0] != 0 and _is_irreducible(f, p) and _is_primitive(f, p):
            return tuple(f)
    raise ValueError(f"no primitive polynomial of degree {s} over F_{p}")


# ---------------------------------------------------------------------------
# finite fields


class FiniteField:
    """``F_q`` with ``q = p^s``; elements are integer codes ``sum c_t p^t`` of
    their coordinate vectors in the power basis of a root ``a`` of the modulus.
    """

    is_field = True
    object_dtype = False
    _cache: dict = {}

    def __new__(cls, p: int, s: int = 1):
        key = (p, s)
        if key not in cls._cache:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            obj = super().__new__(cls)
            obj._setup(p, s)
            cls._cache[key] = obj
        return cls._cache[key]

    def _setup(self, p, s):
        self.p = p
        self.s = s
        self.q = q = p**s
        self.modulus = conway_style_modulus(p, s)
        if not _is_irreducible(list(self.modulus), p):
            raise ValueError("modulus is not irreducible")
        digits = np.array([[(c // p**t) % p for t in range(s)] for c in range(q)], dtype=np.int64)
        self._digits = digits
        self._powers = np.array([p**t for t in range(s)], dtype=np.int64)
        self._add = ((digits[:, None, :] + digits[None, :, :]) % p) @ self._powers
        self._neg = ((-digits) % p) @ self._powers
        self._sub = self._add[:, self._neg]
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = list(digits[a])
            for b in range(a, q):
                prod = _pmulmod(_ptrim(da), _ptrim(list(digits[b])), list(self.modulus), p) if s > 1 else [a * b % p]
                code = sum(int(c) * p**t for t, c in enumerate(prod))
                mul[a, b] = mul[b, a] = code
        self._mul = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self._inv = inv
        # reduction of a^k for k < 2s-1 in the power basis, used by matmul
        red = []
        for k in range(max(2 * s - 1, 1)):
            mono = [0] * k + [1]
            r = _pmod(mono, list(self.modulus), p) if s > 1 else [1]
            red.append(r + [0] * (s - len(r)))
        self._red = np.array(red, dtype=np.int64)

    def __reduce__(self):
        return (FiniteField, (self.p, self.s))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.s})"

    @property
    def name(self):
        return f"GF({self.p})" if self.s == 1 else f"GF({self.p}^{self.s})"

    @property
    def characteristic(self):
        return self.p

    def __call__(self, x) -> "FqElem":
        if isinstance(x, FqElem):
            if x.field is not self:
                raise ContextMismatch("element of a different field")
            return x
        if isinstance(x, str):
            return FqElem(self, self.parse(x))
        return FqElem(self, int(x) % self.p if self.s == 1 else self._from_int(int(x)))

    def _from_int(self, n):
        return n % self.p

    def elements(self):
        return [FqElem(self, c) for c in range(self.q)]

    @property
    def gen(self) -> "FqElem":
        return FqElem(self, self.p if self.s > 1 else self.primitive_root())

    def primitive_root(self) -> int:
        for c in range(2 if self.q > 2 else 1, self.q):
            x, k = c, 1
            while x != 1:
                x = int(self._mul[x, c])
                k += 1
            if k == self.q - 1:
                return c
        return 1

    # vectorised interface
    zero = 0
    one = 1

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def asarray(self, data):
        a = np.asarray(data, dtype=np.int64)
        if self.s == 1:
            return a % self.p
        if a.size and (a.min() < 0 or a.max() >= self.q):
            raise ValueError("codes out of range")
        return a

    def from_ints(self, data):
        """Image of integer arrays under Z -> F_q."""
        return np.asarray(data, dtype=np.int64) % self.p

    def add(self, a, b):
        if self.s == 1:
            return (a + b) % self.p
        return self._add[a, b]

    def sub(self, a, b):
        if self.s == 1:
            return (a - b) % self.p
        return self._sub[a, b]

    def neg(self, a):
        if self.s == 1:
            return (-a) % self.p
        return self._neg[a]

    def mul(self, a, b):
        if self.s == 1:
            return (a * b) % self.p
        return self._mul[a, b]

    def inv_scalar(self, a):
        a = int(a)
        if a == 0:
            raise NonUnitDivision("division by zero in " + self.name)
        return int(self._inv[a])

    def inv(self, a):
        return self._inv[a]

    def is_zero(self, a):
        return np.asarray(a) == 0

    def pivot_key(self, a):
        return 0

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.s == 1:
            return (A @ B) % self.p
        p, s = self.p, self.s
        Ad = self._digits[A]
        Bd = self._digits[B]
        out_shape = (A @ B).shape if A.ndim and B.ndim else ()
        acc = np.zeros(out_shape + (s,), dtype=np.int64)
        conv = [None] * (2 * s - 1)
        for t in range(s):
            At = Ad[..., t]
            for u in range(s):
                prod = (At @ Bd[..., u]) % p
                k = t + u
                conv[k] = prod if conv[k] is None else (conv[k] + prod) % p
        for k, ck in enumerate(conv):
            if ck is None:
                continue
            acc += ck[..., None] * self._red[k]
        return (acc % p) @ self._powers

    def power(self, a: int, e: int) -> int:
        result, base = 1, int(a)
        if e < 0:
            base, e = self.inv_scalar(base), -e
        while e:
            if e & 1:
                result = int(self._mul[result, base])
            base = int(self._mul[base, base])
            e >>= 1
        return result

    def frobenius(self, a, k: int = 1):
        """x -> x^(p^k), vectorised."""
        a = np.asarray(a, dtype=np.int64)
        table = np.array([self.power(c, self.p ** (k % self.s) if self.s > 1 else 1) for c in range(self.q)])
        return table[a]

    def random(self, rng, shape=None):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def format(self, code) -> str:
        code = int(code)
        if self.s == 1:
            return str(code)
        d = self._digits[code]
        terms = []
        for t in range(self.s - 1, -1, -1):
            c = int(d[t])
            if c == 0:
                continue
            mono = "" if t == 0 else ("a" if t == 1 else f"a^{t}")
            if t == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        text = text.replace(" ", "")
        if self.s == 1:
            return int(text) % self.p
        coeffs = [0] * self.s
        for term in text.split("+"):
            if not term:
                continue
            m = re.fullmatch(r"(?:(\d+)\*?)?(a(?:\^(\d+))?)?", term)
            if not m:
                raise ValueError(f"cannot parse {text!r}")
            c = int(m.group(1)) if m.group(1) else 1
            e = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
            if not m.group(2) and not m.group(1):
                raise ValueError(f"cannot parse {text!r}")
            mono = _pmod([0] * e + [1], list(self.modulus), self.p) if e >= self.s else [0] * e + [1]
            for t, ct in enumerate(mono):
                coeffs[t] = (coeffs[t] + c * ct) % self.p
        return sum(c * self.p**t for t, c in enumerate(coeffs))


class FqElem:
    """Scalar wrapper around a code of a :class:`FiniteField`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = int(code)

    def _other(self, other):
        if isinstance(other, FqElem):
            if other.field is not self.field:
                raise ContextMismatch("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self.field(other).code
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElem(self.field, self.field._add[self.code, o])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElem(self.field, self.field._sub[self.code, o])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FqElem(self.field, self.field._neg[self.code])

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElem(self.field, self.field._mul[self.code, o])

    __rmul__ = __mul__

    def inv(self):
        return FqElem(self.field, self.field.inv_scalar(self.code))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * FqElem(self.field, self.field.inv_scalar(o))

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.power(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field(other).code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.s, self.code))

    def __int__(self):
        return self.code

    def valuation(self):
        return INF if self.code == 0 else 0

    def __str__(self):
        return self.field.format(self.code)

    def __repr__(self):
        return f"FqElem({self.field.name}, {self})"


# ---------------------------------------------------------------------------
# Z/p^a


class ZmodPk:
    """The local principal ideal ring ``Z/p^a`` on int64 arrays."""

    is_field = False
    object_dtype = False
    zero = 0
    one = 1

    def __init__(self, p: int, a: int = DEFAULT_PADIC_DIGITS):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if a < 1:
            raise ValueError("a must be >= 1")
        self.p = p
        self.a = a
        self.modulus = p**a

    def __eq__(self, other):
        return isinstance(other, ZmodPk) and (self.p, self.a) == (other.p, other.a)

    def __hash__(self):
        return hash(("Zmod", self.p, self.a))

    def __repr__(self):
        return f"ZmodPk({self.p}, {self.a})"

    @property
    def name(self):
        return f"Z/{self.p}^{self.a}"

    @property
    def characteristic(self):
        return self.modulus

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def asarray(self, data):
        return np.asarray(data, dtype=np.int64) % self.modulus

    from_ints = asarray

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] * (self.modulus - 1) ** 2 < 2**62:
            return (A @ B) % self.modulus
        return (A.astype(object) @ B.astype(object) % self.modulus).astype(np.int64)

    def is_zero(self, a):
        return np.asarray(a) % self.modulus == 0

    def valuation(self, x):
        x = int(x) % self.modulus
        return INF if x == 0 else vp(x, self.p)

    pivot_key = valuation

    def is_unit(self, x):
        return int(x) % self.p != 0

    def inv_scalar(self, x):
        if not self.is_unit(x):
            raise NonUnitDivision(f"{x} is not a unit of {self.name}")
        return pow(int(x), -1, self.modulus)

    def random(self, rng, shape=None):
        return rng.integers(0, self.modulus, size=shape, dtype=np.int64)

    def format(self, x):
        return str(int(x) % self.modulus)

    def parse(self, text):
        return int(text) % self.modulus


# ---------------------------------------------------------------------------
# Q and Z_(p) on Fraction object arrays


class _FractionRing:
    object_dtype = True
    zero = Fraction(0)
    one = Fraction(1)

    def zeros(self, shape):
        return np.full(shape, Fraction(0), dtype=object)

    def eye(self, n):
        E = self.zeros((n, n))
        for i in range(n):
            E[i, i] = Fraction(1)
        return E

    def asarray(self, data):
        arr = np.array(data, dtype=object)
        flat = arr.reshape(-1)
        for i, x in enumerate(flat):
            flat[i] = Fraction(x.value if isinstance(x, PLocalRational) else x)
        return flat.reshape(arr.shape)

    from_ints = asarray

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def matmul(self, A, B):
        A = np.asarray(A, dtype=object)
        B = np.asarray(B, dtype=object)
        if A.shape[-1] == 0:
            return self.zeros(A.shape[:-1] + B.shape[1:])
        return A.dot(B)

    def is_zero(self, a):
        return np.asarray(a, dtype=object) == 0

    def format(self, x):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)

    def parse(self, text):
        return Fraction(text)


class RationalField(_FractionRing):
    is_field = True
    name = "QQ"
    characteristic = 0

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def inv_scalar(self, x):
        if x == 0:
            raise NonUnitDivision("division by zero in QQ")
        return 1 / Fraction(x)

    def pivot_key(self, x):
        return 0

    def random(self, rng, shape=None, bound=3):
        vals = rng.integers(-bound, bound + 1, size=shape)
        return self.asarray(vals)


QQ = RationalField()


class LocalRationals(_FractionRing):
    """``Z_(p)``: rationals with p-free denominators, with p-adic valuation."""

    is_field = False
    characteristic = 0

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, LocalRationals) and other.p == self.p

    def __hash__(self):
        return hash(("Zloc", self.p))

    def __repr__(self):
        return f"LocalRationals({self.p})"

    @property
    def name(self):
        return f"Z_({self.p})"

    def valuation(self, x):
        x = Fraction(x)
        if x == 0:
            return INF
        return vp(x.numerator, self.p) - vp(x.denominator, self.p)

    pivot_key = valuation

    def is_unit(self, x):
        return self.valuation(x) == 0

    def contains(self, x):
        return self.valuation(x) >= 0

    def inv_scalar(self, x):
        if not self.is_unit(x):
            raise NonUnitDivision(f"{x} is not a unit of {self.name}")
        return 1 / Fraction(x)

    def element(self, x) -> PLocalRational:
        return PLocalRational.from_value(self.p, Fraction(x))

    def reduce(self, A, field: FiniteField | None = None):
        """Entrywise reduction mod p of an array over Z_(p)."""
        F = field or FiniteField(self.p)
        A = np.asarray(A, dtype=object)
        out = np.zeros(A.shape, dtype=np.int64)
        flat_in, flat_out = A.reshape(-1), out.reshape(-1)
        for i, x in enumerate(flat_in):
            x = Fraction(x)
            if x.denominator % self.p == 0:
                raise NegativeValuation(f"{x} does not lie in {self.name}")
            flat_out[i] = x.numerator * pow(x.denominator, -1, self.p) % self.p
        return out


# ---------------------------------------------------------------------------
# truncated power / Laurent series


class PrimeSpec(Enum):
    """The two supported height-one primes of Z_p[[T]]."""

    P = "p"
    T = "T"


class SeriesRing:
    """Series in ``T`` over ``F_p`` or ``Z/p^a`` with exponents below ``m`` kept.

    With ``laurent=True`` (only over ``F_p``) negative exponents down to
    ``floor`` (default ``-m``) are allowed and non-zero elements are units.
    """

    object_dtype = True

    def __init__(self, base, m: int = DEFAULT_T_PRECISION, laurent: bool = False, floor: int | None = None):
        if isinstance(base, FiniteField):
            if base.s != 1:
                raise ValueError("series coefficients must be a prime field or Z/p^a")
            self.modulus = base.p
        elif isinstance(base, ZmodPk):
            if laurent:
                raise ValueError("Laurent mode needs a field of coefficients")
            self.modulus = base.modulus
        else:
            raise TypeError("unsupported coefficient ring")
        if m < 1:
            raise ValueError("m must be >= 1")
        self.base = base
        self.p = base.p
        self.m = m
        self.laurent = laurent
        self.floor = (-m if floor is None else floor) if laurent else 0
        self.is_field = laurent
        self.zero = TruncSeries(self, m, ())
        self.one = self.constant(1)

    def _key(self):
        return (type(self.base).__name__, self.modulus, self.m, self.laurent, self.floor)

    def __eq__(self, other):
        return isinstance(other, SeriesRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"SeriesRing({self.base.name}, m={self.m}, laurent={self.laurent})"

    @property
    def name(self):
        inner = f"{self.base.name}(({'T'}))" if self.laurent else f"{self.base.name}[[T]]"
        return f"{inner}/T^{self.m}"

    @property
    def characteristic(self):
        return self.modulus

    def constant(self, c: int) -> "TruncSeries":
        return self.from_coeffs([c])

    @property
    def T(self) -> "TruncSeries":
        return self.from_coeffs([0, 1])

    def from_coeffs(self, coeffs, v: int = 0) -> "TruncSeries":
        return TruncSeries.make(self, v, [int(c) for c in coeffs])

    def monomial(self, c: int, e: int) -> "TruncSeries":
        return self.from_coeffs([c], v=e)

    def coerce(self, x) -> "TruncSeries":
        if isinstance(x, TruncSeries):
            if x.ring != self:
                raise ContextMismatch(f"{x.ring!r} vs {self!r}")
            return x
        if isinstance(x, (int, np.integer)):
            return self.constant(int(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    # vectorised interface
    def zeros(self, shape):
        return np.full(shape, self.zero, dtype=object)

    def eye(self, n):
        E = self.zeros((n, n))
        for i in range(n):
            E[i, i] = self.one
        return E

    def asarray(self, data):
        arr = np.array(data, dtype=object)
        flat = arr.reshape(-1)
        for i, x in enumerate(flat):
            flat[i] = self.coerce(x)
        return flat.reshape(arr.shape)

    from_ints = asarray

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def matmul(self, A, B):
        A = np.asarray(A, dtype=object)
        B = np.asarray(B, dtype=object)
        if A.shape[-1] == 0:
            return self.zeros(A.shape[:-1] + B.shape[1:])
        out = A.dot(B)
        if isinstance(out, np.ndarray):
            flat = out.reshape(-1)
            for i, x in enumerate(flat):
                flat[i] = self.coerce(x)
            return out
        return self.coerce(out)

    def is_zero(self, a):
        return np.asarray(np.frompyfunc(lambda x: x == 0, 1, 1)(np.asarray(a, dtype=object)), dtype=bool)

    def valuation(self, x):
        return self.coerce(x).valuation()

    def pivot_key(self, x):
        """Order pivots by T-adic valuation, then by p-adic valuation of the
        leading coefficient."""
        x = self.coerce(x)
        if x.is_zero():
            return (INF, INF)
        return (x.v, vp(x.coeffs[0], self.p))

    def inv_scalar(self, x):
        return self.coerce(x).inv()

    def random(self, rng, shape=None, degree: int = 3):
        n = int(np.prod(shape)) if shape is not None else 1
        vals = [self.from_coeffs(rng.integers(0, self.modulus, size=degree + 1)) for _ in range(n)]
        if shape is None:
            return vals[0]
        return _obj_array(vals, shape)

    def format(self, x):
        return str(self.coerce(x))

    def parse(self, text: str) -> "TruncSeries":
        text = text.replace(" ", "")
        if text in ("", "0"):
            return self.zero
        total = self.zero
        term_re = re.compile(r"([+-]?)(?:(\d+)\*?)?(T(?:\^(-?\d+))?)?")
        pos = 0
        while pos < len(text):
            m = term_re.match(text, pos)
            if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse {text!r}")
            pos = m.end()
            c = int(m.group(2)) if m.group(2) else 1
            e = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
            if m.group(1) == "-":
                c = -c
            total = total + self.monomial(c, e)
        return total


class TruncSeries:
    """An element ``T^v * (c_0 + c_1 T + ...)`` with exponents in ``[v, m)``.

    Immutable.  The zero element has ``v == m`` and no coefficients.
    """

    __slots__ = ("ring", "v", "coeffs")

    def __init__(self, ring: SeriesRing, v: int, coeffs: tuple):
        self.ring = ring
        self.v = v
        self.coeffs = coeffs

    @staticmethod
    def make(ring: SeriesRing, v: int, coeffs) -> "TruncSeries":
        N = ring.modulus
        cs = [c % N for c in coeffs]
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        v += k
        cs = cs[k:]
        if v >= ring.m or not cs:
            return TruncSeries(ring, ring.m, ())
        if v < ring.floor:
            raise PrecisionUnderflow(f"exponent {v} below floor {ring.floor}")
        cs = cs[: ring.m - v]
        while cs and cs[-1] == 0:
            cs.pop()
        return TruncSeries(ring, v, tuple(cs))

    def _other(self, other):
        if isinstance(other, TruncSeries):
            if other.ring != self.ring:
                raise ContextMismatch(f"{other.ring!r} vs {self.ring!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.constant(int(other))
        return None

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, e: int) -> int:
        i = e - self.v
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def dense(self, start: int = 0) -> list[int]:
        """Coefficients at exponents ``start .. m-1``."""
        return [self.coefficient(e) for e in range(start, self.ring.m)]

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        v = min(self.v, o.v)
        n = max(self.v + len(self.coeffs), o.v + len(o.coeffs)) - v
        cs = [0] * n
        for i, c in enumerate(self.coeffs):
            cs[self.v - v + i] += c
        for i, c in enumerate(o.coeffs):
            cs[o.v - v + i] += c
        return TruncSeries.make(self.ring, v, cs)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries.make(self.ring, self.v, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return self.ring.zero
        v = self.v + o.v
        n = self.ring.m - v
        if n <= 0:
            return self.ring.zero
        a = np.array(self.coeffs[:n], dtype=object)
        b = np.array(o.coeffs[:n], dtype=object)
        cs = np.convolve(a, b)[:n]
        return TruncSeries.make(self.ring, v, [int(c) for c in cs])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.ring.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> "TruncSeries":
        ring = self.ring
        if self.is_zero():
            raise NonUnitDivision("division by zero series")
        if self.v != 0 and not ring.laurent:
            raise NonUnitDivision(f"{self} is not a unit of {ring.name}")
        N = ring.modulus
        lead = self.coeffs[0]
        if math.gcd(lead, ring.p) != 1:
            raise NonUnitDivision(f"leading coefficient {lead} is not a unit")
        v = -self.v
        if v < ring.floor:
            raise PrecisionUnderflow(f"inverse needs exponent {v} below floor {ring.floor}")
        n = ring.m - v
        u = list(self.coeffs) + [0] * max(0, n - len(self.coeffs))
        inv0 = pow(lead, -1, N)
        out = [0] * n
        for k in range(n):
            acc = (1 if k == 0 else 0) - sum(u[j] * out[k - j] for j in range(1, k + 1))
            out[k] = acc * inv0 % N
        return TruncSeries.make(ring, v, out)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self._other(other) * self.inv()

    def valuation(self):
        return INF if self.is_zero() else self.v

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.ring == other.ring and self.v == other.v and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self == self.ring.constant(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.v + i
            if e == 0:
                terms.append(str(c))
            else:
                mono = "T" if e == 1 else f"T^{e}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def __repr__(self):
        return f"TruncSeries({self})"


def is_pth_power(x: TruncSeries) -> bool:
    """Whether a series over ``F_p`` is a p-th power, at the working truncation.

    A nonzero coefficient at an exponent prime to ``p`` refutes the claim
    exactly.  A positive answer is a truncation-level statement: every known
    exponent is divisible by ``p``.
    """
    ring = x.ring
    if not isinstance(ring.base, FiniteField):
        raise TypeError("is_pth_power needs F_p coefficients")
    if x.is_zero():
        raise InsufficientPrecision("zero at the working truncation")
    p = ring.p
    for i, c in enumerate(x.coeffs):
        if c and (x.v + i) % p:
            return False
    if ring.m - x.v <= p:
        raise InsufficientPrecision("window too short to see an exponent prime to p")
    return True


def pth_root(x: TruncSeries) -> TruncSeries:
    """The p-th root of a p-th power over F_p (Frobenius is the identity on F_p)."""
    if not is_pth_power(x):
        raise ValueError(f"{x} is not a p-th power")
    ring, p = x.ring, x.ring.p
    total = ring.zero
    for i, c in enumerate(x.coeffs):
        if c:
            total = total + ring.monomial(c, (x.v + i) // p)
    return total
