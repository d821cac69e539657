"""Jacobson radical of a structure-constant algebra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebras import FDAlgebra, restrict_scalars
from .errors import RadicalAlgorithmUnavailable
from .linalg import kernel, left_kernel, rank, row_basis
from .rings import FiniteField, RationalField, SeriesRing, is_pth_power


@dataclass
class RadicalData:
    algebra: FDAlgebra
    basis: np.ndarray  # rows
    index: int  # least k with rad^k = 0

    @property
    def dim(self) -> int:
        return len(self.basis)

    def quotient(self):
        return self.algebra.quotient(self.basis)

    def powers(self):
        """Row bases of ``rad^1, rad^2, ...`` down to zero."""
        A = self.algebra
        out = [self.basis]
        while len(out[-1]):
            out.append(A.span_products(out[-1], self.basis))
        return out


def radical(A: FDAlgebra, candidate=None, verify: bool = False) -> RadicalData:
    """Radical over ``F_q`` (trace-map method), ``Q`` (trace form), or a
    truncated Laurent field when a candidate ideal is supplied and certified."""
    F = A.ring
    if isinstance(F, FiniteField):
        basis = _radical_fq(A)
    elif isinstance(F, RationalField):
        basis = _radical_trace_form(A)
    elif isinstance(F, SeriesRing) and F.is_field:
        if candidate is None:
            raise RadicalAlgorithmUnavailable(f"no radical algorithm over {F.name}; supply a candidate ideal")
        basis = _certify_candidate(A, candidate)
    else:
        raise RadicalAlgorithmUnavailable(f"radical is computed over fields only, not {F.name}")
    data = RadicalData(A, basis, _nilpotency_index(A, basis))
    if verify:
        if not A.is_two_sided_ideal(basis):
            raise AssertionError("radical is not a two-sided ideal")
        Q = data.quotient()[0]
        if radical(Q).dim:
            raise AssertionError("quotient by the radical is not semisimple")
    return data


def _nilpotency_index(A, basis):
    k, P = 1, basis
    while len(P):
        P = A.span_products(P, basis)
        k += 1
        if k > A.dim + 1:
            raise ValueError("ideal is not nilpotent")
    return k


def _radical_trace_form(A):
    F, d = A.ring, A.dim
    traces = np.array([sum((A.consts[k, j, j] for j in range(d)), F.zero) for k in range(d)], dtype=object)
    gram = F.matmul(A.consts.reshape(d * d, d), traces[:, None]).reshape(d, d)
    return kernel(gram, F).T


def _radical_fq(A):
    F = A.ring
    if F.s == 1:
        return _radical_fp(A)
    B, to_prime, from_prime = restrict_scalars(A)
    R = _radical_fp(B)
    if len(R) == 0:
        return F.zeros((0, A.dim))
    return row_basis(np.stack([from_prime(r) for r in R]), F)


def _radical_fp(A):
    """Iterated trace-map filtration ``I_0 >= I_1 >= ... >= I_l = rad`` for the
    left regular representation, ``l = floor(log_p d)``."""
    F, d, p = A.ring, A.dim, A.ring.p
    L = np.stack(A.left_matrices())  # (d, d, d) column convention
    levels = int(math.floor(math.log(d, p) + 1e-9)) if d > 1 else 0
    I = F.eye(d)
    for i in range(levels + 1):
        if len(I) == 0:
            break
        mod = p ** (i + 1)
        prods = A.mul_many(I, F.eye(d))  # (r, d, d): u * b_j
        G = np.zeros((len(I), d), dtype=np.int64)
        for u in range(len(I)):
            mats = np.tensordot(prods[u], L, axes=([1], [0])) % p  # (d, n, n)
            G[u] = _trace_power(mats, p, i, mod)
        K = left_kernel(G % p, F)
        I = row_basis(F.matmul(K, I), F) if len(K) else F.zeros((0, d))
    return I


def _trace_power(mats, p, i, mod):
    """``Tr(M^(p^i)) / p^i mod p`` for integer lifts of each matrix."""
    P = mats.astype(np.int64) % mod
    for _ in range(i):
        Q = P
        for _ in range(p - 1):
            Q = np.matmul(Q, P) % mod
        P = Q
    tr = np.trace(P, axis1=1, axis2=2) % mod
    if np.any(tr % p**i):
        raise ArithmeticError("trace not divisible as expected; not an ideal step")
    return (tr // p**i) % p


def _certify_candidate(A, candidate):
    F = A.ring
    V = row_basis(np.asarray(candidate, dtype=object).reshape(-1, A.dim), F)
    if not A.is_two_sided_ideal(V):
        raise RadicalAlgorithmUnavailable("candidate is not a two-sided ideal")
    _nilpotency_index(A, V)
    Q = A.quotient(V)[0]
    if not semisimple_certificate(Q):
        raise RadicalAlgorithmUnavailable("cannot certify that the quotient by the candidate is semisimple")
    return V


def semisimple_certificate(Q: FDAlgebra) -> str | None:
    """A reason the algebra is semisimple, or None if none is found.

    Either the trace form is nondegenerate, or the algebra is a field
    ``K[x]/(x^N - c)`` with ``N`` a power of the characteristic and ``c`` not a
    ``p``-th power.
    """
    F, d = Q.ring, Q.dim
    if d <= 1:
        return "dimension <= 1"
    traces = np.array([sum((Q.consts[k, j, j] for j in range(d)), F.zero) for k in range(d)], dtype=object)
    gram = F.matmul(Q.consts.reshape(d * d, d), traces[:, None]).reshape(d, d)
    if rank(gram, F) == d:
        return "nondegenerate trace form"
    p = F.characteristic
    if not Q.is_commutative() or p == 0:
        return None
    N = d
    while N % p == 0:
        N //= p
    if N != 1:
        return None
    for i in range(d):
        x = Q.basis_vector(i)
        pows = [Q.one]
        for _ in range(d):
            pows.append(Q.mul(pows[-1], x))
        if rank(np.stack(pows[:d]), F) != d:
            continue
        top = pows[d]
        c = top[_nonzero_index(F, Q.one)]
        scaled = F.mul(Q.one, c)
        if np.all(top == scaled) and not is_pth_power(c):
            return f"pure inseparable field extension of degree {d}"
    return None


def _nonzero_index(F, v):
    return int(np.nonzero(~F.is_zero(v))[0][0])
