"""Univariate polynomials over finite fields and matrix polynomial helpers.

Polynomials are int64 arrays of field codes, lowest degree first, with no
trailing zeros (the zero polynomial is the empty array).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .linalg import solve_field
from .rings import FiniteField


def trim(f):
    f = np.asarray(f, dtype=np.int64)
    nz = np.nonzero(f)[0]
    return f[: nz[-1] + 1] if len(nz) else f[:0]


def deg(f) -> int:
    return len(f) - 1


def monic(F: FiniteField, f):
    f = trim(f)
    if len(f) == 0:
        return f
    return F.mul(f, F.inv_scalar(f[-1]))


def padd(F, f, g):
    n = max(len(f), len(g))
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    a[: len(f)] = f
    b[: len(g)] = g
    return trim(F.add(a, b))


def psub(F, f, g):
    n = max(len(f), len(g))
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    a[: len(f)] = f
    b[: len(g)] = g
    return trim(F.sub(a, b))


def pmul(F, f, g):
    if len(f) == 0 or len(g) == 0:
        return np.zeros(0, dtype=np.int64)
    if len(f) < len(g):
        f, g = g, f
    out = np.zeros(len(f) + len(g) - 1, dtype=np.int64)
    for i, c in enumerate(g):
        if c:
            out[i : i + len(f)] = F.add(out[i : i + len(f)], F.mul(f, c))
    return trim(out)


def pdivmod(F, f, g):
    f = trim(f).copy()
    g = trim(g)
    if len(g) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return np.zeros(0, dtype=np.int64), f
    inv_lead = F.inv_scalar(g[-1])
    q = np.zeros(len(f) - len(g) + 1, dtype=np.int64)
    for k in range(len(f) - len(g), -1, -1):
        c = f[k + len(g) - 1]
        if c:
            c = F.mul(c, inv_lead)
            q[k] = c
            f[k : k + len(g)] = F.sub(f[k : k + len(g)], F.mul(g, c))
    return trim(q), trim(f[: len(g) - 1])


def pmod(F, f, g):
    return pdivmod(F, f, g)[1]


def pgcd(F, f, g):
    f, g = trim(f), trim(g)
    while len(g):
        f, g = g, pmod(F, f, g)
    return monic(F, f)


def pxgcd(F, f, g):
    """``(d, u, v)`` with ``u f + v g = d`` monic."""
    r0, r1 = trim(f), trim(g)
    s0, s1 = np.array([1], dtype=np.int64), np.zeros(0, dtype=np.int64)
    t0, t1 = np.zeros(0, dtype=np.int64), np.array([1], dtype=np.int64)
    while len(r1):
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    c = F.inv_scalar(r0[-1])
    return F.mul(r0, c), trim(F.mul(s0, c)), trim(F.mul(t0, c))


def pderiv(F, f):
    if len(f) <= 1:
        return np.zeros(0, dtype=np.int64)
    ks = F.from_ints(np.arange(1, len(f)))
    return trim(F.mul(f[1:], ks))


def ppowmod(F, f, e: int, m):
    result = np.array([1], dtype=np.int64)
    base = pmod(F, f, m)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), m)
        base = pmod(F, pmul(F, base, base), m)
        e >>= 1
    return result


X = np.array([0, 1], dtype=np.int64)


def _pth_root(F, f):
    """``g`` with ``g^p = f`` when ``f`` is a polynomial in ``x^p``."""
    p = F.p
    coeffs = f[::p]
    return trim(F.frobenius(coeffs, F.s - 1) if F.s > 1 else coeffs)


def squarefree_decomposition(F, f):
    """``[(g, k), ...]`` with ``f = prod g^k``, ``g`` squarefree and pairwise coprime."""
    f = monic(F, f)
    out = []
    _sqf(F, f, 1, out)
    return out


def _sqf(F, f, mult, out):
    if deg(f) <= 0:
        return
    df = pderiv(F, f)
    if len(df) == 0:
        _sqf(F, _pth_root(F, f), mult * F.p, out)
        return
    c = pgcd(F, f, df)
    w = pdivmod(F, f, c)[0]
    i = 1
    while deg(w) > 0:
        y = pgcd(F, w, c)
        z = pdivmod(F, w, y)[0]
        if deg(z) > 0:
            out.append((monic(F, z), i * mult))
        i += 1
        w = y
        c = pdivmod(F, c, y)[0]
    if deg(c) > 0:
        _sqf(F, _pth_root(F, c), mult * F.p, out)


def distinct_degree(F, f):
    out = []
    h = X.copy()
    d = 0
    f = monic(F, f)
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = ppowmod(F, h, F.q, f)
        g = pgcd(F, psub(F, h, X), f)
        if deg(g) > 0:
            out.append((g, d))
            f = pdivmod(F, f, g)[0]
            h = pmod(F, h, f)
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(F, f, d, rng):
    f = monic(F, f)
    n = deg(f)
    if n == d:
        return [f]
    while True:
        a = trim(F.random(rng, n))
        if deg(a) < 1:
            continue
        if F.p == 2:
            t, cur = a, a
            for _ in range(F.s * d - 1):
                cur = pmod(F, pmul(F, cur, cur), f)
                t = padd(F, t, cur)
            b = t
        else:
            b = psub(F, ppowmod(F, a, (F.q**d - 1) // 2, f), np.array([1]))
        g = pgcd(F, b, f)
        if 0 < deg(g) < n:
            return equal_degree(F, g, d, rng) + equal_degree(F, pdivmod(F, f, g)[0], d, rng)


def factor(F, f, rng=None):
    """Monic irreducible factorization ``[(g, k), ...]`` sorted by degree then coefficients."""
    rng = rng if rng is not None else np.random.default_rng(0)
    out = []
    for g, k in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d, rng):
                out.append((irr, k))
    merged = {}
    for g, k in out:
        key = tuple(int(c) for c in g)
        merged[key] = merged.get(key, 0) + k
    return [(np.array(key, dtype=np.int64), k) for key, k in sorted(merged.items(), key=lambda t: (len(t[0]), t[0][::-1]))]


# ---------------------------------------------------------------------------
# matrices


def charpoly(M, F):
    """Characteristic polynomial of a square matrix over a field (Hessenberg method)."""
    H = np.array(M, dtype=object if F.object_dtype else np.int64, copy=True)
    n = H.shape[0]
    for j in range(n - 2):
        col = H[j + 1 :, j]
        nz = np.nonzero(~F.is_zero(col))[0]
        if len(nz) == 0:
            continue
        i = int(nz[0]) + j + 1
        if i != j + 1:
            H[[i, j + 1]] = H[[j + 1, i]]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        inv = F.inv_scalar(H[j + 1, j])
        for r in range(j + 2, n):
            if F.is_zero(H[r, j]):
                continue
            u = F.mul(H[r, j], inv)
            H[r] = F.sub(H[r], F.mul(u, H[j + 1]))
            H[:, j + 1] = F.add(H[:, j + 1], F.mul(u, H[:, r]))
    zero, one = F.zero, F.one
    polys = [[one]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (x - h_mm) * p_{m-1}
        cur = [zero] + list(prev)
        hmm = H[m - 1, m - 1]
        for k, c in enumerate(prev):
            cur[k] = F.sub(cur[k], F.mul(hmm, c))
        prod = one
        for i in range(m - 1, 0, -1):
            prod = F.mul(prod, H[i, i - 1])
            coef = F.mul(H[i - 1, m - 1], prod)
            if F.is_zero(coef):
                continue
            for k, c in enumerate(polys[i - 1]):
                cur[k] = F.sub(cur[k], F.mul(coef, c))
        polys.append(cur)
    res = polys[n]
    if F.object_dtype:
        return list(res)
    return np.array([int(c) for c in res], dtype=np.int64)


def matpoly(F, f, M):
    """Evaluate ``f(M)`` by Horner's rule."""
    n = M.shape[0]
    R = F.zeros((n, n))
    I = F.eye(n)
    for c in reversed(list(f)):
        R = F.add(F.matmul(R, M), F.mul(I, c))
    return R


def min_poly_from_powers(power, F, bound):
    """Minimal polynomial of an element whose k-th power vector is ``power(k)``.

    Returns the monic coefficient list (low degree first).
    """
    vecs = []
    for k in range(bound + 1):
        v = np.asarray(power(k))
        if vecs:
            A = np.stack(vecs, axis=1)
            x = solve_field(A, v, F)
            if x is not None:
                coeffs = [F.neg(c) for c in x[:, 0]] + [F.one]
                if F.object_dtype:
                    return [Fraction(c) for c in coeffs]
                return np.array([int(c) for c in coeffs], dtype=np.int64)
        vecs.append(v)
    raise ValueError("no linear dependence among powers within bound")
