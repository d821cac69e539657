"""Finite-dimensional algebras given by structure constants.

``consts[i, j, k]`` is the coefficient of ``b_k`` in ``b_i * b_j``.  Elements
are coordinate vectors in the ring's array format.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CocycleViolation, RadicalAlgorithmUnavailable
from .groups import FiniteGroup
from .linalg import kernel, rank, row_basis, rref, solve_field
from .rings import FiniteField, RationalField, SeriesRing, ZmodPk, is_pth_power

EXHAUSTIVE_ASSOC_DIM = 64


class FDAlgebra:
    def __init__(self, ring, consts, labels=None, one=None, name="A", group=None):
        self.ring = ring
        self.consts = np.asarray(consts, dtype=object if ring.object_dtype else np.int64)
        d = self.consts.shape[0]
        if self.consts.shape != (d, d, d):
            raise ValueError("structure constants must have shape (d, d, d)")
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(d)]
        self.name = name
        self.group = group
        self._flat = self.consts.reshape(d, d * d)
        self.one = self._find_one() if one is None else np.asarray(one, dtype=self._dtype)
        self._lmats = None

    @property
    def _dtype(self):
        return object if self.ring.object_dtype else np.int64

    @property
    def dim(self) -> int:
        return self.consts.shape[0]

    def _find_one(self):
        d = self.dim
        # sum_i u_i c_{i j k} = delta_{jk} for all j, k
        A = self.consts.reshape(d, d * d).T
        b = self.ring.eye(d).reshape(d * d, 1)
        x = solve_field(A, b, self.ring) if getattr(self.ring, "is_field", False) else None
        if x is None:
            raise ValueError("algebra has no unity (or ring is not a field; pass one=)")
        return x[:, 0]

    def zero(self):
        return self.ring.zeros(self.dim)

    def basis_vector(self, i):
        v = self.ring.zeros(self.dim)
        v[i] = self.ring.one
        return v

    def mul(self, x, y):
        F = self.ring
        T = F.matmul(np.asarray(x)[None, :], self._flat).reshape(self.dim, self.dim)
        return F.matmul(np.asarray(y)[None, :], T)[0]

    def mul_many(self, X, Y):
        """All products ``X[u] * Y[v]`` as an array of shape ``(len X, len Y, d)``."""
        F, d = self.ring, self.dim
        X = np.asarray(X).reshape(-1, d)
        Y = np.asarray(Y).reshape(-1, d)
        T = F.matmul(X, self._flat).reshape(len(X), d, d)
        return np.stack([F.matmul(Y, T[u]) for u in range(len(X))]) if len(X) else F.zeros((0, len(Y), d))

    def power(self, x, e):
        r = self.one.copy()
        for _ in range(e):
            r = self.mul(r, x)
        return r

    def left_matrix(self, x):
        """Matrix of ``y -> x y`` acting on column vectors."""
        F = self.ring
        M = F.matmul(np.asarray(x)[None, :], self._flat).reshape(self.dim, self.dim)
        return M.T

    def right_matrix(self, x):
        """Matrix of ``y -> y x`` acting on column vectors."""
        F, d = self.ring, self.dim
        M = F.matmul(self.consts.transpose(1, 0, 2).reshape(d, d * d).T, np.asarray(x)[:, None])
        # M[(i,k)] = sum_j x_j c_{ijk}
        return M.reshape(d, d).T

    def left_matrices(self):
        if self._lmats is None:
            self._lmats = [self.consts[i].T.copy() for i in range(self.dim)]
        return self._lmats

    def check_associative(self, rng=None, samples=2000) -> bool:
        """Exhaustive for ``d <= 64`` over exact integer-backed rings, sampled otherwise."""
        F, d, C = self.ring, self.dim, self.consts
        if not F.object_dtype:
            if d <= EXHAUSTIVE_ASSOC_DIM:
                return _assoc_exhaustive(C, F.matmul)
        else:
            ints = _as_int_array(C) if isinstance(F, RationalField) else None
            if ints is not None and d <= EXHAUSTIVE_ASSOC_DIM:
                return _assoc_exhaustive(ints, np.matmul)
            if d <= 16:
                return _assoc_exhaustive(C, F.matmul)
        rng = rng or np.random.default_rng(0)
        for _ in range(samples):
            i, j, l = rng.integers(0, d, 3)
            bi, bj, bl = (self.basis_vector(t) for t in (i, j, l))
            if not np.all(self.mul(self.mul(bi, bj), bl) == self.mul(bi, self.mul(bj, bl))):
                return False
        return True

    def check_unity(self) -> bool:
        for i in range(self.dim):
            b = self.basis_vector(i)
            if not (np.all(self.mul(self.one, b) == b) and np.all(self.mul(b, self.one) == b)):
                return False
        return True

    def center(self):
        """Basis (rows) of the center, over a field."""
        F, d = self.ring, self.dim
        C = self.consts
        # z b_i - b_i z = 0: rows indexed (i, m), unknowns z_k
        A = F.sub(C.transpose(1, 2, 0), C.transpose(0, 2, 1)).reshape(d * d, d)
        return kernel(A, F).T

    def is_commutative(self, basis=None) -> bool:
        if basis is None:
            return bool(np.all(self.consts == self.consts.transpose(1, 0, 2)))
        P = self.mul_many(basis, basis)
        return bool(np.all(P == P.transpose(1, 0, 2)))

    def span_products(self, U, V):
        """Row basis of the span of all products ``u v``."""
        U = np.asarray(U).reshape(-1, self.dim)
        V = np.asarray(V).reshape(-1, self.dim)
        if len(U) == 0 or len(V) == 0:
            return self.ring.zeros((0, self.dim))
        return row_basis(self.mul_many(U, V).reshape(-1, self.dim), self.ring)

    def is_two_sided_ideal(self, V) -> bool:
        V = np.asarray(V).reshape(-1, self.dim)
        if len(V) == 0:
            return True
        B = self.ring.eye(self.dim)
        r = rank(V, self.ring)
        both = np.concatenate([V, self.span_products(B, V), self.span_products(V, B)])
        return rank(both, self.ring) == r

    def quotient(self, V):
        """Quotient by a two-sided ideal with row basis ``V``.

        Returns ``(Q, project, lift)`` where ``project`` maps coordinate vectors
        of this algebra to ``Q`` and ``lift`` maps ``Q`` back to fixed
        representatives.
        """
        F, d = self.ring, self.dim
        V = np.asarray(V).reshape(-1, d)
        if len(V):
            R, piv = rref(V, F)
            R = R[: len(piv)]
        else:
            R, piv = V, []
        comp = [c for c in range(d) if c not in set(piv)]

        def project(x):
            x = np.asarray(x).copy()
            for i, c in enumerate(piv):
                if not F.is_zero(x[c]):
                    x = F.sub(x, F.mul(x[c], R[i]))
            return x[comp]

        def lift(y):
            x = F.zeros(d)
            x[comp] = y
            return x

        e = len(comp)
        consts = F.zeros((e, e, e))
        for a, ca in enumerate(comp):
            for b, cb in enumerate(comp):
                consts[a, b] = project(self.consts[ca, cb])
        Q = FDAlgebra(F, consts, [self.labels[c] for c in comp], one=project(self.one), name=f"{self.name}/I")
        return Q, project, lift

    def corner_basis(self, e):
        """Row basis of ``e A e``."""
        d = self.dim
        eA = self.mul_many(np.asarray(e)[None, :], self.ring.eye(d))[0]
        eAe = self.mul_many(eA, np.asarray(e)[None, :])[:, 0]
        return row_basis(eAe, self.ring)

    def dump(self) -> dict:
        F = self.ring
        entries = []
        for i, j, k in zip(*np.nonzero(~F.is_zero(self.consts))):
            entries.append([int(i), int(j), int(k), F.format(self.consts[i, j, k])])
        return {
            "name": self.name,
            "ring": F.name,
            "dim": self.dim,
            "labels": self.labels,
            "one": [F.format(x) for x in self.one],
            "structure_constants": entries,
        }

    def __repr__(self):
        return f"FDAlgebra({self.name}, dim={self.dim}, over {self.ring.name})"


def _assoc_exhaustive(C, matmul):
    d = C.shape[0]
    flat = C.reshape(d, d * d)
    stacked = C.reshape(d * d, d)
    for i in range(d):
        lhs = matmul(C[i], flat)  # [j, (l, m)] = sum_k c_ijk c_klm
        rhs = matmul(stacked, C[i]).reshape(d, d * d)  # [j, (l, m)] = sum_k c_jlk c_ikm
        if not np.all(lhs == rhs):
            return False
    return True


def _as_int_array(C):
    flat = C.reshape(-1)
    if all(isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1 for x in flat):
        return np.array([int(x) for x in flat], dtype=np.int64).reshape(C.shape)
    return None


# ---------------------------------------------------------------------------
# group algebras and crossed products


def group_algebra(ring, G: FiniteGroup) -> FDAlgebra:
    n = G.order
    consts = ring.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            consts[a, b, G.table[a, b]] = ring.one
    one = ring.zeros(n)
    one[G.identity] = ring.one
    return FDAlgebra(ring, consts, G.labels, one=one, name=f"{ring.name}[{G.name}]", group=G)


def sharp(A: FDAlgebra, x):
    """The involution ``sum a_g g -> sum a_g g^-1`` on a group algebra."""
    G = A.group
    y = A.ring.zeros(A.dim)
    y[G.inverse] = np.asarray(x)
    return y


def augmentation(A: FDAlgebra, x):
    F = A.ring
    s = F.zero
    for c in np.asarray(x):
        s = F.add(s, c)
    return s


def augmentation_ideal(A: FDAlgebra):
    G, F = A.group, A.ring
    rows = []
    for g in range(G.order):
        if g == G.identity:
            continue
        v = F.zeros(A.dim)
        v[g] = F.one
        v[G.identity] = F.neg(F.one)
        rows.append(v)
    return np.array(rows, dtype=A._dtype).reshape(-1, A.dim)


@dataclass
class CrossedProductData:
    """``ring * G`` with ``action[g]`` a callable (or exponent of Frobenius for
    finite fields) and ``cocycle[(g, h)]`` a nonzero scalar (default 1)."""

    ring: object
    group: FiniteGroup
    action: dict | None = None
    cocycle: dict | None = None


def _act(data, g, x):
    act = data.action
    if act is None or g not in act:
        return x
    a = act[g]
    if callable(a):
        return a(x)
    return data.ring.frobenius(x, a)


def check_cocycle(data: CrossedProductData, samples=None):
    G, R = data.group, data.ring
    tau = _tau(data)
    e = G.identity
    for g in range(G.order):
        if not (_eq(R, tau(e, g), R.one) and _eq(R, tau(g, e), R.one)):
            raise CocycleViolation(f"tau(1, {g}) or tau({g}, 1) is not 1")
        if R.is_zero(tau(g, g)) if not R.object_dtype else tau(g, g) == 0:
            raise CocycleViolation("cocycle value zero")
    for g, h, l in itertools.product(range(G.order), repeat=3):
        lhs = R.mul(tau(g, h), tau(int(G.table[g, h]), l))
        rhs = R.mul(_act(data, g, tau(h, l)), tau(g, int(G.table[h, l])))
        if not _eq(R, lhs, rhs):
            raise CocycleViolation(f"cocycle condition fails at ({g}, {h}, {l})")
    # the action must be a homomorphism into ring automorphisms
    if data.action and isinstance(R, FiniteField):
        xs = np.arange(R.q)
        for g, h in itertools.product(range(G.order), repeat=2):
            lhs = _act(data, g, _act(data, h, xs))
            rhs = _act(data, int(G.table[g, h]), xs)
            if not np.array_equal(lhs, rhs):
                raise CocycleViolation("action is not a group homomorphism")


def _eq(R, a, b):
    return bool(np.all(np.asarray(a == b)))


def _tau(data):
    R = data.ring
    coc = data.cocycle or {}

    def tau(g, h):
        v = coc.get((g, h))
        return R.one if v is None else v

    return tau


def crossed_product(data: CrossedProductData) -> FDAlgebra:
    """Structure-constant algebra of ``ring * G``.

    With trivial action the result is an algebra over ``ring`` of dimension
    ``|G|`` with basis ``u_g``.  A nontrivial action of ``G`` on a finite field
    ``F_q`` makes ``F_q`` non-central, so the result is returned over the
    prime field with basis ``a^t u_g`` (dimension ``s |G|``).
    """
    check_cocycle(data)
    G, R = data.group, data.ring
    tau = _tau(data)
    n = G.order
    nontrivial = bool(data.action) and any(
        not np.array_equal(_act(data, g, np.arange(R.q)), np.arange(R.q)) for g in range(n)
    ) if isinstance(R, FiniteField) else False
    if not nontrivial:
        consts = R.zeros((n, n, n))
        for g in range(n):
            for h in range(n):
                consts[g, h, G.table[g, h]] = tau(g, h)
        one = R.zeros(n)
        one[G.identity] = R.one
        labels = [f"u[{x}]" for x in G.labels]
        return FDAlgebra(R, consts, labels, one=one, name=f"{R.name}*{G.name}", group=G)
    p, s = R.p, R.s
    P = FiniteField(p)
    d = s * n
    powers = [R.power(p, t) for t in range(s)]
    digits = R._digits
    consts = P.zeros((d, d, d))
    # (a^t u_g)(a^v u_h) = a^t g(a^v) tau(g,h) u_gh
    for g, t, h, v in itertools.product(range(n), range(s), range(n), range(s)):
        c = R.mul(R.mul(powers[t], _act(data, g, powers[v])), tau(g, h))
        gh = int(G.table[g, h])
        consts[g * s + t, h * s + v, gh * s : gh * s + s] = digits[int(c)]
    one = P.zeros(d)
    one[G.identity * s] = 1
    labels = [f"a^{t}u[{x}]" for x in G.labels for t in range(s)]
    return FDAlgebra(P, consts, labels, one=one, name=f"{R.name}*{G.name}", group=G)


def restrict_scalars(A: FDAlgebra):
    """View an ``F_q``-algebra as an ``F_p``-algebra with basis ``a^t b_i``.

    Returns ``(B, to_prime, from_prime)`` converting coordinate vectors.
    """
    R = A.ring
    p, s, d = R.p, R.s, A.dim
    P = FiniteField(p)
    digits, pw = R._digits, R._powers
    gen_pows = [R.power(p, t) for t in range(s)]
    consts = P.zeros((d * s, d * s, d * s))
    for i, t, j, u in itertools.product(range(d), range(s), range(d), range(s)):
        scal = R.mul(gen_pows[t], gen_pows[u])
        prod = R.mul(A.consts[i, j], scal)  # coordinates in F_q
        consts[i * s + t, j * s + u] = digits[prod].reshape(-1)

    def to_prime(x):
        return digits[np.asarray(x)].reshape(-1)

    def from_prime(y):
        return np.asarray(y, dtype=np.int64).reshape(-1, s) @ pw

    B = FDAlgebra(P, consts, [f"a^{t}{l}" for l in A.labels for t in range(s)], one=to_prime(A.one), name=A.name + "|Fp")
    return B, to_prime, from_prime
