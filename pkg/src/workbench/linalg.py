"""Dense exact linear algebra over the rings of :mod:`workbench.rings`.

Arrays are plain numpy arrays in the ring's storage format; :class:`Matrix`
pairs one with its ring for the public API and the JSON wire format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContextMismatch, PrecisionExhausted, PrecisionLoss
from .rings import (
    INF,
    QQ,
    FiniteField,
    LocalRationals,
    RationalField,
    SeriesRing,
    TruncSeries,
    ZmodPk,
)


def ring_from_name(name: str):
    """Inverse of ``ring.name`` for every ring the workbench constructs."""
    name = name.replace(" ", "")
    if name == "QQ":
        return QQ
    m = re.fullmatch(r"GF\((\d+)(?:\^(\d+))?\)", name)
    if m:
        return FiniteField(int(m.group(1)), int(m.group(2) or 1))
    m = re.fullmatch(r"Z_\((\d+)\)", name)
    if m:
        return LocalRationals(int(m.group(1)))
    m = re.fullmatch(r"Z/(\d+)\^(\d+)", name)
    if m:
        return ZmodPk(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"(.+?)(\[\[T\]\]|\(\(T\)\))/T\^(\d+)", name)
    if m:
        base = ring_from_name(m.group(1))
        return SeriesRing(base, int(m.group(3)), laurent=m.group(2) == "((T))")
    raise ValueError(f"unknown ring {name!r}")


@dataclass(frozen=True, eq=False)
class Matrix:
    ring: object
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")

    @classmethod
    def from_rows(cls, ring, rows, ncols: int | None = None):
        rows = list(rows)
        if not rows:
            return cls(ring, ring.zeros((0, ncols or 0)))
        return cls(ring, ring.asarray(rows))

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.ring != self.ring:
            raise ContextMismatch("matrices over different rings")
        return Matrix(self.ring, self.ring.matmul(self.entries, other.entries))

    def __eq__(self, other):
        if not isinstance(other, Matrix) or other.ring != self.ring:
            return NotImplemented
        if self.entries.shape != other.entries.shape:
            return False
        return bool(np.all(self.ring.is_zero(self.ring.sub(self.entries, other.entries))))

    def to_json(self) -> dict:
        return {
            "ring": self.ring.name,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [self.ring.format(x) for x in self.entries.reshape(-1)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Matrix":
        ring = ring_from_name(data["ring"])
        vals = [ring.parse(s) for s in data["entries"]]
        if ring.object_dtype:
            arr = np.empty(len(vals), dtype=object)
            for i, v in enumerate(vals):
                arr[i] = v
        else:
            arr = np.array(vals, dtype=np.int64)
        return cls(ring, arr.reshape(data["rows"], data["cols"]))

    def __repr__(self):
        body = "; ".join(" ".join(self.ring.format(x) for x in row) for row in self.entries)
        return f"Matrix[{self.ring.name}]({body})"


# ---------------------------------------------------------------------------
# fields


def _check_pivot(F, x):
    if isinstance(F, SeriesRing):
        if x.v >= F.m // 2:
            raise PrecisionLoss(f"pivot {x} has valuation {x.v}, beyond half the window m={F.m}")


def rref(A, F):
    """Reduced row echelon form over a field.

    Returns ``(R, pivots)`` where ``pivots[i]`` is the pivot column of row i.
    """
    R = np.array(A, dtype=object if F.object_dtype else np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = R[r:, c]
        nz = np.nonzero(~F.is_zero(col))[0]
        if len(nz) == 0:
            continue
        if F.object_dtype:
            keys = [F.pivot_key(col[i]) for i in nz]
            i = int(nz[min(range(len(nz)), key=lambda j: keys[j])])
        else:
            i = int(nz[0])
        i += r
        if i != r:
            R[[r, i]] = R[[i, r]]
        piv = R[r, c]
        _check_pivot(F, piv)
        R[r] = F.mul(R[r], F.inv_scalar(piv))
        others = np.nonzero(~F.is_zero(R[:, c]))[0]
        others = others[others != r]
        if len(others):
            R[others] = F.sub(R[others], F.mul(R[others, c][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, F) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, F)[1])


def kernel(A, F):
    """Basis of the right kernel ``{x : A x = 0}`` as the columns of a matrix."""
    A = np.asarray(A, dtype=object if F.object_dtype else np.int64)
    nrows, ncols = A.shape
    if nrows == 0:
        return F.eye(ncols)
    R, pivots = rref(A, F)
    free = [c for c in range(ncols) if c not in set(pivots)]
    K = F.zeros((ncols, len(free)))
    for j, fc in enumerate(free):
        K[fc, j] = F.one
        for i, pc in enumerate(pivots):
            K[pc, j] = F.neg(R[i, fc])
    return K


def left_kernel(A, F):
    """Rows ``y`` with ``y A = 0``."""
    return kernel(np.asarray(A).T, F).T


def row_basis(V, F):
    """Echelon basis (rows) of the row span of ``V``."""
    V = np.asarray(V, dtype=object if F.object_dtype else np.int64)
    if V.shape[0] == 0:
        return V
    R, pivots = rref(V, F)
    return R[: len(pivots)]


def rref_rank(A: Matrix):
    """``(rank, rref, kernel_basis)`` of a matrix over a field."""
    F = A.ring
    if not F.is_field:
        raise TypeError(f"{F.name} is not a field")
    R, pivots = rref(A.entries, F)
    return len(pivots), Matrix(F, R), Matrix(F, kernel(A.entries, F))


def inverse(A, F):
    n = A.shape[0]
    aug = np.concatenate([np.asarray(A), F.eye(n)], axis=1)
    R, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return R[:, n:]


def solve_field(A, b, F):
    """Some ``x`` with ``A x = b`` over a field, or ``None``."""
    A = np.asarray(A)
    b = np.asarray(b).reshape(A.shape[0], -1)
    nrows, ncols = A.shape
    aug = np.concatenate([A, b], axis=1)
    R, pivots = rref(aug, F)
    if any(pc >= ncols for pc in pivots):
        return None
    x = F.zeros((ncols, b.shape[1]))
    for i, pc in enumerate(pivots):
        x[pc] = R[i, ncols:]
    return x


# ---------------------------------------------------------------------------
# local principal rings


def _uniformizer_split(ring, x):
    """``(v, u)`` with ``x = pi^v * u``, ``u`` a unit; ``(INF, 0)`` for zero."""
    if isinstance(ring, LocalRationals):
        x = Fraction(x)
        v = ring.valuation(x)
        if v == INF:
            return INF, Fraction(0)
        return v, x / Fraction(ring.p) ** v
    if isinstance(ring, ZmodPk):
        x = int(x) % ring.modulus
        v = ring.valuation(x)
        if v == INF:
            return INF, 0
        return v, (x // ring.p**v) % ring.modulus
    if isinstance(ring, SeriesRing):
        x = ring.coerce(x)
        if x.is_zero():
            return INF, ring.zero
        return x.v, TruncSeries.make(ring, 0, list(x.coeffs))
    raise TypeError(f"{ring!r} has no uniformizer")


def _divide_by_pi(ring, x, v):
    """``x / pi^v`` for ``x`` of valuation at least ``v``."""
    if isinstance(ring, LocalRationals):
        return Fraction(x) / Fraction(ring.p) ** v
    if isinstance(ring, ZmodPk):
        return (int(x) % ring.modulus) // ring.p**v
    x = ring.coerce(x)
    if x.is_zero():
        return ring.zero
    return TruncSeries.make(ring, x.v - v, list(x.coeffs))


def _pi_power(ring, v):
    if isinstance(ring, LocalRationals):
        return Fraction(ring.p) ** v
    if isinstance(ring, ZmodPk):
        return ring.p**v % ring.modulus
    return ring.monomial(1, v)


def _check_local(ring):
    if isinstance(ring, SeriesRing):
        if ring.laurent or not isinstance(ring.base, FiniteField):
            raise TypeError("Smith form over series needs F_p[[T]] (uniformizer T)")
    elif not isinstance(ring, (LocalRationals, ZmodPk)):
        raise TypeError(f"{ring!r} is not a supported local principal ring")


@dataclass
class SmithForm:
    diag_valuations: list
    left: np.ndarray
    right: np.ndarray
    diagonal: np.ndarray
    ring: object
    cap: float = INF


def smith_normal_form(A, ring, strict: bool = False) -> SmithForm:
    """Smith form ``left @ A @ right = diag(pi^v_1, pi^v_2, ...)``.

    Pivots are chosen by minimal valuation, ties broken by smallest
    ``(row, col)``.  Over ``Z/p^a`` valuations are capped at ``a`` (zero is
    reported as infinity); ``strict=True`` raises instead of reporting an
    undetermined zero diagonal entry.
    """
    _check_local(ring)
    if isinstance(A, Matrix):
        A = A.entries
    if isinstance(ring, ZmodPk):
        return _smith_zmod(np.asarray(A, dtype=np.int64), ring, strict)
    D = np.array(A, dtype=object if ring.object_dtype else np.int64, copy=True)
    nrows, ncols = D.shape
    L = ring.eye(nrows)
    R = ring.eye(ncols)
    vals = []
    for k in range(min(nrows, ncols)):
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                v = _uniformizer_split(ring, D[i, j])[0]
                if v != INF and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            if strict and isinstance(ring, ZmodPk):
                raise PrecisionExhausted("remaining block vanishes mod p^a")
            vals.extend([INF] * (min(nrows, ncols) - k))
            break
        v, i, j = best
        if i != k:
            D[[k, i]] = D[[i, k]]
            L[[k, i]] = L[[i, k]]
        if j != k:
            D[:, [k, j]] = D[:, [j, k]]
            R[:, [k, j]] = R[:, [j, k]]
        _, u = _uniformizer_split(ring, D[k, k])
        uinv = ring.inv_scalar(u)
        D[k] = ring.mul(D[k], uinv)
        L[k] = ring.mul(L[k], uinv)
        for i in range(nrows):
            if i != k and not ring.is_zero(D[i, k]):
                f = _divide_by_pi(ring, D[i, k], v)
                D[i] = ring.sub(D[i], ring.mul(D[k], f))
                L[i] = ring.sub(L[i], ring.mul(L[k], f))
        for j in range(k + 1, ncols):
            if not ring.is_zero(D[k, j]):
                f = _divide_by_pi(ring, D[k, j], v)
                D[:, j] = ring.sub(D[:, j], ring.mul(D[:, k], f))
                R[:, j] = ring.sub(R[:, j], ring.mul(R[:, k], f))
        vals.append(v)
    cap = ring.a if isinstance(ring, ZmodPk) else INF
    return SmithForm(vals, L, R, D, ring, cap)


def _valuations_zmod(D, ring):
    """Entrywise p-adic valuation, ``a`` standing in for zero."""
    D = D % ring.modulus
    v = np.zeros(D.shape, dtype=np.int64)
    rem = D.copy()
    for _ in range(ring.a):
        div = (rem % ring.p == 0) & (v < ring.a)
        if not div.any():
            break
        v[div] += 1
        rem[div] //= ring.p
    v[D == 0] = ring.a
    return v


def _smith_zmod(D, ring, strict):
    """Vectorised Smith form over ``Z/p^a`` with the same pivot rule."""
    mod, p = ring.modulus, ring.p
    D = D % mod
    nrows, ncols = D.shape
    L = np.eye(nrows, dtype=np.int64)
    R = np.eye(ncols, dtype=np.int64)
    vals = []
    for k in range(min(nrows, ncols)):
        V = _valuations_zmod(D[k:, k:], ring)
        flat = int(np.argmin(V))
        i, j = divmod(flat, V.shape[1])
        v = int(V[i, j])
        if v >= ring.a:
            if strict:
                raise PrecisionExhausted("remaining block vanishes mod p^a")
            vals.extend([INF] * (min(nrows, ncols) - k))
            break
        i += k
        j += k
        if i != k:
            D[[k, i]] = D[[i, k]]
            L[[k, i]] = L[[i, k]]
        if j != k:
            D[:, [k, j]] = D[:, [j, k]]
            R[:, [k, j]] = R[:, [j, k]]
        pv = p**v
        uinv = pow(int(D[k, k]) // pv, -1, mod)
        D[k] = D[k] * uinv % mod
        L[k] = L[k] * uinv % mod
        col = D[:, k] // pv
        col[k] = 0
        rows = np.nonzero(col)[0]
        if len(rows):
            f = col[rows][:, None]
            D[rows] = (D[rows] - f * D[k][None, :]) % mod
            L[rows] = (L[rows] - f * L[k][None, :]) % mod
        row = D[k, k + 1 :] // pv
        cols = np.nonzero(row)[0] + k + 1
        if len(cols):
            f = row[cols - k - 1][None, :]
            D[:, cols] = (D[:, cols] - D[:, [k]] * f) % mod
            R[:, cols] = (R[:, cols] - R[:, [k]] * f) % mod
        vals.append(v)
    return SmithForm(vals, L, R, D, ring, ring.a)


def solve_local(A, b, ring):
    """Some ``x`` over the local ring with ``A x = b``, or ``None``."""
    A = np.asarray(A)
    b = np.asarray(b).reshape(A.shape[0], -1)
    snf = smith_normal_form(A, ring)
    c = ring.matmul(snf.left, b)
    nrows, ncols = A.shape
    y = ring.zeros((ncols, b.shape[1]))
    for i in range(nrows):
        v = snf.diag_valuations[i] if i < len(snf.diag_valuations) else INF
        for col in range(b.shape[1]):
            ci = c[i, col]
            vc = _uniformizer_split(ring, ci)[0]
            if v == INF:
                if vc != INF:
                    return None
                continue
            if vc < v:
                return None
            if i < ncols:
                y[i, col] = _divide_by_pi(ring, ci, v)
    return ring.matmul(snf.right, y)


def solve_or_membership(A: Matrix, b: Matrix):
    """``x`` with ``A x = b`` as a :class:`Matrix`, or ``None`` (no solution)."""
    if A.ring != b.ring:
        raise ContextMismatch("A and b live over different rings")
    ring = A.ring
    if ring.is_field:
        x = solve_field(A.entries, b.entries, ring)
    else:
        x = solve_local(A.entries, b.entries, ring)
    return None if x is None else Matrix(ring, x)


def column_hermite_local(G, ring):
    """Basis (columns) of the ``ring``-span of the columns of ``G`` over a DVR.

    Used to turn generator matrices of lattices into bases.
    """
    snf = smith_normal_form(G, ring)
    D = ring.matmul(G, snf.right)
    r = sum(1 for v in snf.diag_valuations if v != INF)
    return D[:, :r]


def is_rational_matrix(A) -> bool:
    return all(isinstance(x, Fraction) for x in np.asarray(A, dtype=object).reshape(-1))


__all__ = [
    "Matrix",
    "SmithForm",
    "column_hermite_local",
    "inverse",
    "kernel",
    "left_kernel",
    "rank",
    "ring_from_name",
    "row_basis",
    "rref",
    "rref_rank",
    "smith_normal_form",
    "solve_field",
    "solve_local",
    "solve_or_membership",
    "RationalField",
]
