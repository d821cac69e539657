"""Primitive idempotents of semisimple algebras and their lifts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import polys
from .algebras import FDAlgebra
from .errors import LiftDiverged, SplitFailure
from .linalg import kernel, rank, row_basis
from .radical import radical
from .rings import FiniteField, RationalField, SeriesRing, ZmodPk

SPLIT_BUDGET = 64
_X = sympy.Symbol("x")


@dataclass
class Block:
    central: np.ndarray
    primitives: list
    certified: bool = True  # False when a Q-corner could not be split and was accepted


# ---------------------------------------------------------------------------
# polynomial back-ends: F_q via .polys, Q via sympy


def _coprime_parts(F, f):
    """Split a monic polynomial into two coprime nonconstant factors, or None."""
    if isinstance(F, FiniteField):
        fac = polys.factor(F, np.asarray(f, dtype=np.int64))
        if len(fac) < 2:
            return None
        g, k = fac[0]
        f1 = np.array([1], dtype=np.int64)
        for _ in range(k):
            f1 = polys.pmul(F, f1, g)
        f2 = polys.pdivmod(F, np.asarray(f, dtype=np.int64), f1)[0]
        return f1, f2
    P = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(list(f))], _X, domain="QQ")
    fac = P.factor_list()[1]
    if len(fac) < 2:
        return None
    g, k = fac[0]
    f1 = g**k
    f2 = sympy.div(P, f1)[0]
    return f1, f2


def _is_irreducible(F, f):
    if isinstance(F, FiniteField):
        fac = polys.factor(F, np.asarray(f, dtype=np.int64))
        return len(fac) == 1 and fac[0][1] == 1
    P = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(list(f))], _X, domain="QQ")
    return P.is_irreducible


def _crt_poly(F, f1, f2):
    """``h`` with ``h = 1 mod f1`` and ``h = 0 mod f2`` (coefficients low first)."""
    if isinstance(F, FiniteField):
        _, u, v = polys.pxgcd(F, f1, f2)
        return polys.pmul(F, v, f2)
    s, t, g = sympy.gcdex(f1, f2)
    h = sympy.Poly(t * f2, _X, domain="QQ")
    return [Fraction(int(c.p), int(c.q)) for c in reversed(h.all_coeffs())]


def _eval(A: FDAlgebra, coeffs, x, unit):
    F = A.ring
    r = F.zeros(A.dim)
    for c in reversed(list(coeffs)):
        r = F.add(A.mul(r, x), F.mul(unit, c))
    return r


def _min_poly(A: FDAlgebra, x, unit, bound):
    pows = [unit]

    def power(k):
        while len(pows) <= k:
            pows.append(A.mul(pows[-1], x))
        return pows[k]

    return polys.min_poly_from_powers(power, A.ring, bound)


def _split(A, x, unit, bound):
    """Orthogonal idempotents ``(e1, e2)`` with ``e1 + e2 = unit`` from the
    minimal polynomial of ``x`` in the corner with identity ``unit``."""
    f = _min_poly(A, x, unit, bound)
    parts = _coprime_parts(A.ring, f)
    if parts is None:
        return None
    h = _crt_poly(A.ring, *parts)
    e1 = _eval(A, h, x, unit)
    return e1, A.ring.sub(unit, e1)


# ---------------------------------------------------------------------------


def _corner(A, e):
    return A.corner_basis(e)


def _random_element(A, basis, rng):
    F = A.ring
    if isinstance(F, RationalField):
        c = np.array([Fraction(int(v)) for v in rng.integers(-2, 3, len(basis))], dtype=object)
    else:
        c = F.random(rng, len(basis))
    return F.matmul(c[None, :], basis)[0]


def central_idempotents(A: FDAlgebra, rng=None) -> list:
    """Primitive central idempotents of a semisimple algebra over F_q or Q."""
    rng = rng if rng is not None else np.random.default_rng(0)
    F = A.ring
    Z = A.center()
    work, done = [A.one], []
    while work:
        e = work.pop()
        Ze = row_basis(A.mul_many(e[None, :], Z)[0], F)
        if len(Ze) == 1:
            done.append(e)
            continue
        res = _split_commutative(A, e, Ze, rng)
        if res is None:
            done.append(e)
        else:
            work.extend(res)
    return sorted(done, key=lambda v: _key(F, v))


def _split_commutative(A, e, basis, rng):
    F, n = A.ring, len(basis)
    if isinstance(F, FiniteField):
        # Berlekamp subalgebra {z : z^q = z}
        imgs = []
        for b in basis:
            z = _power(A, b, F.q, e)
            imgs.append(F.sub(z, b))
        imgs = np.stack(imgs)
        coords = _coords_in(F, basis, imgs)
        K = kernel(coords.T, F).T  # combos c with sum c_i (b_i^q - b_i) = 0
        if len(K) <= 1:
            return None
        for c in K:
            z = F.matmul(c[None, :], basis)[0]
            res = _split(A, z, e, n)
            if res is not None:
                return list(res)
        raise SplitFailure("Berlekamp subalgebra did not split")
    candidates = list(basis) + [_random_element(A, basis, rng) for _ in range(SPLIT_BUDGET)]
    for x in candidates:
        f = _min_poly(A, x, e, n)
        parts = _coprime_parts(F, f)
        if parts is not None:
            h = _crt_poly(F, *parts)
            e1 = _eval(A, h, x, e)
            return [e1, F.sub(e, e1)]
        if len(f) - 1 == n and _is_irreducible(F, f):
            return None  # the corner is a field
    raise SplitFailure("could not decide whether a commutative corner is a field")


def _power(A, x, k, unit):
    r, b = unit, x
    while k:
        if k & 1:
            r = A.mul(r, b)
        b = A.mul(b, b)
        k >>= 1
    return r


def _coords_in(F, basis, vecs):
    from .linalg import solve_field

    x = solve_field(basis.T, vecs.T, F)
    if x is None:
        raise ValueError("vectors outside the span")
    return x.T


def primitive_idempotents(A: FDAlgebra, rng=None) -> list[Block]:
    """Blocks of a semisimple algebra with a full set of orthogonal primitive
    idempotents in each.

    Idempotents are split off via minimal polynomials of elements of corner
    algebras ``eAe`` until every corner is commutative.  Over ``Q`` a
    noncommutative corner that resists the search budget (a division algebra
    such as the quaternions) is accepted and its block is marked uncertified.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    F = A.ring
    blocks = []
    for eps in central_idempotents(A, rng):
        work, prims, certified = [eps], [], True
        while work:
            e = work.pop()
            C = _corner(A, e)
            if A.is_commutative(C):
                prims.append(e)
                continue
            d = len(C)
            cands = [A.mul(A.mul(e, A.basis_vector(i)), e) for i in range(A.dim)]
            cands += [_random_element(A, C, rng) for _ in range(SPLIT_BUDGET)]
            res = None
            for x in cands:
                res = _split(A, x, e, d)
                if res is not None:
                    break
            if res is None:
                if isinstance(F, FiniteField):
                    raise SplitFailure(f"corner of dimension {d} did not split within budget")
                prims.append(e)
                certified = False
            else:
                work.extend(res)
        blocks.append(Block(eps, sorted(prims, key=lambda v: _key(F, v)), certified))
    return blocks


def _key(F, v):
    return tuple(str(x) for x in v)


# ---------------------------------------------------------------------------
# lifting


def reduction_map(A: FDAlgebra):
    """``(Abar, reduce, lift)`` for an algebra over Z/p^a, F_q or a truncated
    series ring over one of them; ``Abar`` is the algebra over the residue field."""
    R = A.ring
    if isinstance(R, FiniteField):
        return A, (lambda x: x), (lambda y: y)
    if isinstance(R, ZmodPk):
        P = FiniteField(R.p)

        def reduce(x):
            return np.asarray(x, dtype=np.int64) % R.p

        def lift(y):
            return np.asarray(y, dtype=np.int64) % R.modulus

    elif isinstance(R, SeriesRing) and not R.laurent:
        P = FiniteField(R.p)

        def reduce(x):
            return np.array([s.coefficient(0) % P.p for s in np.asarray(x).reshape(-1)], dtype=np.int64).reshape(np.shape(x))

        def lift(y):
            return R.asarray(np.array([R.constant(int(c)) for c in np.asarray(y).reshape(-1)], dtype=object).reshape(np.shape(y)))

    else:
        raise TypeError(f"no residue field reduction for {R.name}")
    consts = reduce(A.consts)
    Abar = FDAlgebra(P, consts, A.labels, one=reduce(A.one), name=f"{A.name} mod m", group=A.group)
    return Abar, reduce, lift


def lift_idempotents(A: FDAlgebra, rng=None, max_iter: int | None = None) -> list:
    """Orthogonal primitive idempotents of ``A`` summing to 1, lifted from the
    semisimple quotient of the residue algebra by ``e <- 3e^2 - 2e^3`` inside
    successive corners ``(1 - E) A (1 - E)``."""
    R = A.ring
    Abar, reduce, lift = reduction_map(A)
    rad = radical(Abar)
    Q, project, qlift = Abar.quotient(rad.basis)
    blocks = primitive_idempotents(Q, rng)
    ebars = [e for b in blocks for e in b.primitives]
    if max_iter is None:
        # the kernel of reduction is nilpotent of index at most this
        depth = rad.index * getattr(R, "a", 1)
        if isinstance(R, SeriesRing):
            depth = rad.index * R.m * getattr(R.base, "a", 1)
        max_iter = math.ceil(math.log2(max(depth, 2))) + 2
    one = A.one
    E = R.zeros(A.dim)
    out = []
    for eb in ebars[:-1]:
        x = lift(qlift(eb))
        c = R.sub(one, E)
        y = A.mul(A.mul(c, x), c)
        for _ in range(max_iter):
            y2 = A.mul(y, y)
            nxt = R.sub(R.mul(y2, 3), R.mul(A.mul(y2, y), 2))
            if np.all(nxt == y):
                break
            y = nxt
        else:
            raise LiftDiverged(f"Newton iteration did not stabilize in {max_iter} steps")
        out.append(y)
        E = R.add(E, y)
    out.append(R.sub(one, E))
    return out


def check_idempotent_system(A: FDAlgebra, es) -> bool:
    R = A.ring
    total = R.zeros(A.dim)
    for i, e in enumerate(es):
        if not np.all(A.mul(e, e) == e):
            return False
        for j, f in enumerate(es):
            if i != j and not np.all(R.is_zero(A.mul(e, f))):
                return False
        total = R.add(total, e)
    return bool(np.all(total == A.one))
