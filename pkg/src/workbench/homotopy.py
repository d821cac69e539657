"""Duals, transposes and Ext for finitely presented modules over a
finite-dimensional algebra over a field.

A presentation is an ``r x s`` matrix ``A`` over the algebra, read as the map
``Lambda^r -> Lambda^s, x -> x A`` of free left modules; the presented module
is its cokernel.  Vectors of ``Lambda^n`` are flattened to length ``n * d``
with entry ``j`` in coordinates ``[j*d, (j+1)*d)``.  Duals become left modules
through the anti-involution, so ``A^+`` is the transpose of ``A`` with every
entry replaced by its image under the involution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebras import FDAlgebra, sharp
from .errors import ExactnessViolation, ResolutionDepthExceeded
from .idempotents import lift_idempotents
from .linalg import kernel, rank, row_basis, rref
from .modules import Echelon, RepModule, hom_space, is_isomorphic, quotient, simples, spin, submodule
from .radical import radical

MAX_FREE_RANK = 64


def involution(A: FDAlgebra):
    """The anti-involution used to turn right modules into left modules."""
    if A.group is not None:
        return lambda x: sharp(A, x)
    if A.is_commutative():
        return lambda x: np.array(x, copy=True)
    raise TypeError(f"no anti-involution known for {A.name}")


def free_module(A: FDAlgebra, n: int) -> RepModule:
    F, d = A.ring, A.dim
    action = []
    for L in A.left_matrices():
        X = F.zeros((n * d, n * d))
        for j in range(n):
            X[j * d : (j + 1) * d, j * d : (j + 1) * d] = L
        action.append(X)
    if n == 0:
        action = [F.zeros((0, 0)) for _ in range(d)]
    return RepModule(A, action, name=f"free{n}")


@dataclass
class FinitePresentation:
    """``coker(Lambda^r -> Lambda^s, x -> x A)`` with ``matrix`` of shape ``(r, s, d)``."""

    algebra: FDAlgebra
    matrix: np.ndarray
    name: str = "M"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix)
        if self.matrix.ndim != 3 or self.matrix.shape[2] != self.algebra.dim:
            raise ValueError("presentation matrix must have shape (r, s, dim)")

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    @property
    def s(self) -> int:
        return self.matrix.shape[1]

    def linear_map(self):
        return map_matrix(self.algebra, self.matrix)

    def relations(self):
        """Row basis of the image of ``x -> x A`` inside ``Lambda^s``."""
        Phi = self.linear_map()
        return _column_space_rows(self.algebra.ring, Phi, self.s * self.algebra.dim)

    def module(self) -> RepModule:
        if self.s == 0:
            return _zero_module(self.algebra)
        return quotient(free_module(self.algebra, self.s), self.relations(), name=self.name)

    def plus(self) -> "FinitePresentation":
        return FinitePresentation(self.algebra, plus_matrix(self.algebra, self.matrix), name=f"D({self.name})")

    def dump(self) -> dict:
        F = self.algebra.ring
        return {
            "algebra": self.algebra.name,
            "r": self.r,
            "s": self.s,
            "A": [[[F.format(c) for c in e] for e in row] for row in self.matrix],
        }


def _column_space_rows(F, Phi, n):
    if Phi.shape[1] == 0:
        return F.zeros((0, n))
    return row_basis(Phi.T, F)


def map_matrix(A: FDAlgebra, M) -> np.ndarray:
    """Field matrix (column convention) of ``x -> x M`` from ``Lambda^r`` to ``Lambda^s``."""
    F, d = A.ring, A.dim
    M = np.asarray(M)
    r, s = M.shape[0], M.shape[1]
    Phi = F.zeros((s * d, r * d))
    for i in range(r):
        for j in range(s):
            Phi[j * d : (j + 1) * d, i * d : (i + 1) * d] = A.right_matrix(M[i, j])
    return Phi


def plus_matrix(A: FDAlgebra, M) -> np.ndarray:
    inv = involution(A)
    M = np.asarray(M)
    r, s = M.shape[0], M.shape[1]
    out = A.ring.zeros((s, r, A.dim))
    for i in range(r):
        for j in range(s):
            out[j, i] = inv(M[i, j])
    return out


def _kernel_rows(F, Phi, n):
    if Phi.shape[0] == 0:
        return F.eye(n)
    K = kernel(Phi, F)
    return K.T if K.size else F.zeros((0, n))


def _in_span(F, U, v):
    if len(U) == 0:
        return not np.any(~F.is_zero(v))
    return rank(np.concatenate([U, np.asarray(v)[None, :]]), F) == rank(U, F)


def _same_space(F, U, V):
    ru, rv = rank(U, F) if len(U) else 0, rank(V, F) if len(V) else 0
    if ru != rv:
        return False
    if ru == 0:
        return True
    return rank(np.concatenate([U, V]), F) == ru


# ---------------------------------------------------------------------------
# generators of submodules of free modules


def _jacobson(A: FDAlgebra):
    cache = getattr(A, "_homotopy_rad", None)
    if cache is None:
        cache = radical(A).basis
        A._homotopy_rad = cache
    return cache


def module_generators(M: RepModule, U=None) -> np.ndarray:
    """Vectors generating the submodule with row basis ``U`` (all of ``M`` by
    default), chosen as lifts of a basis of the top and then pruned greedily."""
    F = M.field
    if M.dim == 0:
        return F.zeros((0, 0))
    U = F.eye(M.dim) if U is None else np.asarray(U).reshape(-1, M.dim)
    if len(U) == 0:
        return F.zeros((0, M.dim))
    J = _jacobson(M.algebra)
    E = Echelon(F, M.dim)
    for r in J:
        X = M.act(r)
        for u in U:
            E.add(F.matmul(X, u[:, None])[:, 0])
    candidates = [u for u in U if E.add(u)]
    gens, current = [], F.zeros((0, M.dim))
    for v in candidates:
        if not _in_span(F, current, v):
            gens.append(v)
            current = spin(M, np.stack(gens))
    if rank(current, F) != rank(U, F):
        raise AssertionError("top lifts do not generate the submodule")
    return np.stack(gens) if gens else F.zeros((0, M.dim))


def free_rows_to_matrix(A: FDAlgebra, rows, n: int) -> np.ndarray:
    rows = np.asarray(rows)
    return rows.reshape(len(rows), n, A.dim)


def kernel_presentation_matrix(A: FDAlgebra, Mmat) -> np.ndarray:
    """Matrix whose rows generate the kernel of ``x -> x M`` on ``Lambda^r``."""
    F = A.ring
    r = np.asarray(Mmat).shape[0]
    if r == 0:
        return F.zeros((0, 0, A.dim))
    K = _kernel_rows(F, map_matrix(A, Mmat), r * A.dim)
    gens = module_generators(free_module(A, r), K)
    if len(gens) > MAX_FREE_RANK:
        raise ResolutionDepthExceeded("kernel needs too many generators")
    return free_rows_to_matrix(A, gens, r)


def present(M: RepModule, name=None) -> tuple[FinitePresentation, np.ndarray]:
    """A fresh presentation of ``M`` and the generators used (rows)."""
    A, F, d = M.algebra, M.field, M.algebra.dim
    gens = module_generators(M)
    s = len(gens)
    # x = (lambda_j) -> sum_j lambda_j v_j
    cols = []
    for j in range(s):
        for k in range(d):
            cols.append(F.matmul(M.action[k], gens[j][:, None])[:, 0])
    Pi = np.stack(cols, axis=1) if cols else F.zeros((M.dim, 0))
    K = _kernel_rows(F, Pi, s * d)
    rel = module_generators(free_module(A, s), K) if len(K) else F.zeros((0, s * d))
    return FinitePresentation(A, free_rows_to_matrix(A, rel, s), name=name or f"pres({M.name})"), gens


# ---------------------------------------------------------------------------
# dual, transpose, Ext


def dual(pres: FinitePresentation) -> RepModule:
    """``M^+ = Hom(M, Lambda)`` as the kernel of ``A^+`` on ``Lambda^s``."""
    A, F = pres.algebra, pres.algebra.ring
    Kp = _kernel_rows(F, map_matrix(A, plus_matrix(A, pres.matrix)), pres.s * A.dim)
    return submodule(free_module(A, pres.s), Kp, name=f"{pres.name}^+")


@dataclass
class TransposeData:
    presentation: FinitePresentation
    plus: FinitePresentation
    dual: RepModule
    module: RepModule
    dims: dict = field(default_factory=dict)


def transpose(pres: FinitePresentation) -> TransposeData:
    """``DM = coker(A^+)`` with the four-term sequence dimensions checked."""
    A = pres.algebra
    d = A.dim
    plus = pres.plus()
    DM = plus.module()
    Mp = dual(pres)
    dims = {
        "M+": Mp.dim,
        "P0+": pres.s * d,
        "P1+": pres.r * d,
        "DM": DM.dim,
        "M": pres.module().dim,
    }
    if dims["M+"] - dims["P0+"] + dims["P1+"] - dims["DM"] != 0:
        raise ExactnessViolation("four-term transpose sequence has nonzero Euler characteristic")
    return TransposeData(pres, plus, Mp, DM, dims)


def resolution(pres: FinitePresentation, length: int = 3) -> list:
    """Matrices ``A_1 = A, A_2, ...`` of a free resolution, each generating the
    kernel of the previous map."""
    mats = [pres.matrix]
    while len(mats) < length:
        nxt = kernel_presentation_matrix(pres.algebra, mats[-1])
        mats.append(nxt)
    return mats


@dataclass
class ExtData:
    degree: int
    module: RepModule
    cycles: np.ndarray  # row basis of the kernel inside the dual free module
    boundaries: np.ndarray

    @property
    def dim(self) -> int:
        return self.module.dim


def _cohomology(A, maps_plus, ranks, i, name):
    """``ker(maps_plus[i]) / im(maps_plus[i-1])`` inside ``Lambda^ranks[i]``."""
    F, d = A.ring, A.dim
    n = ranks[i] * d
    if n == 0:
        empty = F.zeros((0, 0))
        return ExtData(i, _zero_module(A), empty, empty)
    Z = _kernel_rows(F, map_matrix(A, maps_plus[i]), n) if i < len(maps_plus) else F.eye(n)
    if i == 0:
        Bd = F.zeros((0, n))
    else:
        Bd = _column_space_rows(F, map_matrix(A, maps_plus[i - 1]), n)
    if len(Z) == 0:
        return ExtData(i, _zero_module(A), Z, Bd)
    Zmod = submodule(free_module(A, ranks[i]), Z)
    Zr, piv = rref(Z, F) if len(Z) else (Z, [])
    coords = Bd[:, piv] if len(Bd) else F.zeros((0, len(piv)))
    return ExtData(i, quotient(Zmod, coords, name=name), Z, Bd)


def ext_complex(pres: FinitePresentation, top: int = 2):
    """The dualized resolution ``P_0^+ -> P_1^+ -> ...`` up to degree ``top + 1``."""
    A = pres.algebra
    mats = resolution(pres, top + 1)
    ranks = [pres.s] + [m.shape[0] for m in mats]
    plus = [plus_matrix(A, m) for m in mats]  # P_i^+ -> P_{i+1}^+, shape (s_i, s_{i+1}, d)
    return mats, plus, ranks


def ext(pres: FinitePresentation, i: int, complex_=None) -> ExtData:
    """``E^i(M) = Ext^i(M, Lambda)`` for ``i`` in 0, 1, 2."""
    if i not in (0, 1, 2):
        raise ValueError("only E^0, E^1, E^2 are computed")
    mats, plus, ranks = complex_ if complex_ is not None else ext_complex(pres, 2)
    return _cohomology(pres.algebra, plus, ranks, i, f"E{i}({pres.name})")


def ext_all(pres: FinitePresentation) -> list[ExtData]:
    cx = ext_complex(pres, 2)
    out = [ext(pres, i, cx) for i in range(3)]
    if not _same_space(pres.algebra.ring, out[0].cycles, _kernel_rows(
        pres.algebra.ring, map_matrix(pres.algebra, plus_matrix(pres.algebra, pres.matrix)), pres.s * pres.algebra.dim
    )):
        raise ExactnessViolation("E^0 differs from the dual")
    return out


# ---------------------------------------------------------------------------
# the bidual map and the transpose sequence


def bidual_map(pres: FinitePresentation):
    """``(W, rank_phi, dim_Mpp)``: ``W`` is the preimage in ``Lambda^s`` of
    ``ker(M -> M^++)``; ``M^++`` is computed as ``Hom(M^+, Lambda)`` directly.

    The evaluation at ``m`` is ``y -> sum_j y_j m_j^sharp`` on ``M^+``.
    """
    A, F, d, s = pres.algebra, pres.algebra.ring, pres.algebra.dim, pres.s
    inv = involution(A)
    Mp = dual(pres)
    K = _kernel_rows(F, map_matrix(A, plus_matrix(A, pres.matrix)), s * d)
    K, _ = rref(K, F) if len(K) else (K, [])
    K = K[: rank(K, F)] if len(K) else K
    Hom = hom_space(submodule(free_module(A, s), K), _regular(A)) if len(K) else []
    # evaluation functionals f_m, one per field basis vector m of Lambda^s
    funcs = []
    for idx in range(s * d):
        j, k = divmod(idx, d)
        mj = inv(A.basis_vector(k))
        f = F.zeros((d, len(K)))
        for c, y in enumerate(K):
            f[:, c] = A.mul(y[j * d : (j + 1) * d], mj)
        funcs.append(f.reshape(-1))
    Fmat = np.stack(funcs, axis=1) if funcs else F.zeros((0, 0))  # columns indexed by m
    if len(K):
        Hflat = np.stack([h.reshape(-1) for h in Hom]) if Hom else F.zeros((0, d * len(K)))
        if rank(np.concatenate([Hflat, Fmat.T]), F) != len(Hom):
            raise ExactnessViolation("evaluation functional is not a module map")
        W = _kernel_rows(F, Fmat, s * d)
        rphi = rank(Fmat, F)
    else:
        W, rphi = F.eye(s * d), 0
    return W, rphi, len(Hom), Mp


def _regular(A):
    from .modules import regular_module

    return regular_module(A)


def transpose_sequence_check(pres: FinitePresentation, strict: bool = True) -> dict:
    """Exactness of ``0 -> E^1(DM) -> M -> M^++ -> E^2(DM) -> 0``.

    ``E^i(DM)`` comes from a resolution of ``DM``; the map ``M -> M^++`` is
    the evaluation map into an independently computed bidual.
    """
    A, F = pres.algebra, pres.algebra.ring
    td = transpose(pres)
    cx = ext_complex(td.plus, 2)
    E1 = ext(td.plus, 1, cx)
    E2 = ext(td.plus, 2, cx)
    rel = pres.relations()
    M = pres.module()
    W, rphi, dim_pp, _ = bidual_map(pres)
    ker_phi = rank(W, F) - len(rel) if len(W) else 0
    coker_phi = dim_pp - rphi
    exact = {
        "E1(DM)": E1.dim == ker_phi and _same_space(F, E1.cycles, W),
        "M": rphi == M.dim - ker_phi,
        "M++": coker_phi == E2.dim,
        "E2(DM)": coker_phi >= 0,
    }
    dims = {"E1(DM)": E1.dim, "M": M.dim, "M++": dim_pp, "E2(DM)": E2.dim, "rank_phi": rphi}
    alt = dims["E1(DM)"] - dims["M"] + dims["M++"] - dims["E2(DM)"]
    ok = all(exact.values()) and alt == 0
    if strict and not ok:
        raise ExactnessViolation(f"transpose sequence fails: {exact}, dims {dims}")
    return {"dims": dims, "exact": exact, "alternating_sum": alt, "transpose_dims": td.dims, "pass": ok}


# ---------------------------------------------------------------------------
# projective summands and the stable identity


def _primitive_idempotents(A):
    cache = getattr(A, "_homotopy_prims", None)
    if cache is None:
        cache = lift_idempotents(A, np.random.default_rng(0))
        A._homotopy_prims = cache
    return cache


def _left_ideal(A, e):
    F = A.ring
    rows = A.mul_many(F.eye(A.dim), np.asarray(e)[None, :])[:, 0]
    R, piv = rref(rows, F)
    R = R[: len(piv)]
    return submodule(_regular(A), R), R


def strip_projectives(M: RepModule):
    """``(core, stripped)`` with ``M = core + sum of PIMs A e_i``.

    A summand ``A e`` is found from ``f`` in ``Hom(M, A e)`` and ``m`` in
    ``e M`` with ``f(m)`` outside the radical, hence a unit of ``e A e``; then
    ``M = A m + ker f``.
    """
    A, F = M.algebra, M.field
    J = _jacobson(A)
    stripped = []
    changed = True
    while changed and M.dim:
        changed = False
        for i, e in enumerate(_primitive_idempotents(A)):
            P, basis = _left_ideal(A, e)
            if P.dim > M.dim:
                continue
            Hs = hom_space(M, P)
            if not Hs:
                continue
            eM = row_basis(M.act(e).T, F)
            hit = None
            for f in Hs:
                for m in eM:
                    val = F.matmul(F.matmul(f, m[:, None]).T, basis)[0]
                    if not _in_span(F, J, val):
                        hit = f
                        break
                if hit is not None:
                    break
            if hit is None:
                continue
            Kf = _kernel_rows(F, hit, M.dim)
            M = submodule(M, Kf) if len(Kf) else _zero_module(A)
            stripped.append(i)
            changed = True
            break
    return M, sorted(stripped)


def _zero_module(A):
    return RepModule(A, [A.ring.zeros((0, 0)) for _ in range(A.dim)], name="0")


def dd_stable_identity_check(pres: FinitePresentation, rng=None) -> dict:
    """``DDM`` and ``M`` agree after removing projective summands.

    ``DM`` is re-presented from scratch before transposing again, so the
    second transpose does not simply undo the first.
    """
    A = pres.algebra
    rng = rng if rng is not None else np.random.default_rng(0)
    M = pres.module()
    DM = transpose(pres).module
    if DM.dim:
        fresh, _ = present(DM, name=f"D({pres.name})")
        DDM = transpose(fresh).module
    else:
        DDM = _zero_module(A)
    core_m, pm = strip_projectives(M)
    core_dd, pdd = strip_projectives(DDM)
    catalog = simples(A, rng)
    same = core_m.dim == core_dd.dim and (core_m.dim == 0 or is_isomorphic(core_m, core_dd, catalog, rng))
    return {
        "dims": {"M": M.dim, "DM": DM.dim, "DDM": DDM.dim, "core_M": core_m.dim, "core_DDM": core_dd.dim},
        "stripped": {"M": pm, "DDM": pdd},
        "pass": bool(same),
    }


# ---------------------------------------------------------------------------
# sample algebras and presentations


def square_zero_algebra(F, generators: int = 2) -> FDAlgebra:
    """``k[x_1..x_n] / (x_1..x_n)^2``, local and not self-injective for n >= 2."""
    d = generators + 1
    consts = F.zeros((d, d, d))
    for i in range(d):
        consts[0, i, i] = F.one
        consts[i, 0, i] = F.one
    labels = ["1"] + [f"x{i + 1}" for i in range(generators)]
    one = F.zeros(d)
    one[0] = F.one
    return FDAlgebra(F, consts, labels, one=one, name=f"{F.name}[x]/(x)^2" if generators == 1 else f"{F.name}[x1..x{generators}]/m^2")


def random_presentation(A: FDAlgebra, rng, max_rank: int = 2) -> FinitePresentation:
    """Entries are zero, a multiple of a basis element, or a difference of two."""
    F = A.ring
    r = int(rng.integers(1, max_rank + 1))
    s = int(rng.integers(1, max_rank + 1))
    mat = F.zeros((r, s, A.dim))
    for i in range(r):
        for j in range(s):
            kind = int(rng.integers(0, 3))
            k, l = (int(v) for v in rng.integers(0, A.dim, 2))
            if kind == 1:
                mat[i, j, k] = F.mul(F.one, int(rng.integers(1, 3)))
            elif kind == 2 and k != l:
                mat[i, j, k] = F.one
                mat[i, j, l] = F.neg(F.one)
    return FinitePresentation(A, mat, name="random")


def element_presentation(A: FDAlgebra, x, name="M") -> FinitePresentation:
    """``Lambda / Lambda x`` as a 1 x 1 presentation."""
    return FinitePresentation(A, np.asarray(x).reshape(1, 1, A.dim), name=name)
