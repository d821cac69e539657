"""Grothendieck-group bookkeeping for group algebras in characteristic p.

Ordinary simples live over Q, modular simples over F_p; neither side is
assumed to be split.  Projectives over the order are idempotent matrices over
``Z/p^a[G]`` (a proxy for the p-adic completion) or over ``Z_(p)[G]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .algebras import FDAlgebra, group_algebra
from .errors import NotAModule, SquareViolation
from .groups import FiniteGroup, build_group
from .idempotents import lift_idempotents
from .linalg import column_hermite_local, inverse, rank, row_basis
from .modules import (
    CompositionVector,
    PIMCatalog,
    RepModule,
    SimpleCatalog,
    chop,
    is_isomorphic_simple,
    pims,
    simples,
    submodule,
    top,
)
from .rings import QQ, FiniteField, LocalRationals, ZmodPk

DEFAULT_A = 8


@dataclass
class G0Class:
    algebra: str
    labels: list
    vector: list
    virtual: bool = False

    def __eq__(self, other):
        return self.labels == other.labels and [Fraction(x) for x in self.vector] == [Fraction(x) for x in other.vector]

    def __add__(self, other):
        return G0Class(self.algebra, self.labels, [a + b for a, b in zip(self.vector, other.vector)], self.virtual or other.virtual)

    @classmethod
    def from_composition(cls, name, cv: CompositionVector, labels):
        return cls(name, list(labels), cv.as_vector(labels))


@dataclass
class K0Class:
    order: str
    labels: list
    vector: list

    def __eq__(self, other):
        return self.labels == other.labels and list(self.vector) == list(other.vector)


@dataclass
class Cell:
    """Everything computed for one ``(G, p)``."""

    group: FiniteGroup
    p: int
    modular_algebra: FDAlgebra
    ordinary_algebra: FDAlgebra
    modular: SimpleCatalog
    ordinary: SimpleCatalog
    pims: PIMCatalog
    order_ring: ZmodPk
    order_algebra: FDAlgebra
    lifted: list  # (label, idempotent over Z/p^a[G])
    int_central: list  # |G| * central idempotent of each ordinary block, as ints


def build_cell(G, p: int, a: int = DEFAULT_A, rng=None) -> Cell:
    G = build_group(G)
    rng = rng if rng is not None else np.random.default_rng(0)
    Fp = FiniteField(p)
    Am = group_algebra(Fp, G)
    Aq = group_algebra(QQ, G)
    mod = simples(Am, rng, prefix="S")
    ordc = simples(Aq, rng, prefix="X")
    R = ZmodPk(p, a)
    Ao = group_algebra(R, G)
    es = lift_idempotents(Ao, rng)
    lifted = []
    for e in es:
        lab = _pim_label(Am, mod, np.asarray(e) % p)
        lifted.append((lab, e))
    pc = pims(Am, mod, idempotents=[np.asarray(e) % p for _, e in lifted])
    ints = []
    n = G.order
    for eps in ordc.blocks:
        scaled = [Fraction(x) * n for x in eps]
        if any(x.denominator != 1 for x in scaled):
            raise ValueError("|G| times a central idempotent is not integral")
        ints.append(np.array([int(x) for x in scaled], dtype=object))
    return Cell(G, p, Am, Aq, mod, ordc, pc, R, Ao, lifted, ints)


def _pim_label(Am, catalog, ebar):
    from .modules import left_ideal_module

    T = top(left_ideal_module(Am, ebar), catalog.radical.basis)
    for lab, S in zip(catalog.labels, catalog.modules):
        if S.dim == T.dim and is_isomorphic_simple(T, S):
            return lab
    raise ValueError("idempotent does not cover a single simple")


# ---------------------------------------------------------------------------
# Cartan matrix


def cartan_matrix(cell_or_algebra, catalog=None, pcat=None, rng=None) -> np.ndarray:
    """``C[i, j]`` = multiplicity of simple ``i`` in PIM ``j``."""
    if isinstance(cell_or_algebra, Cell):
        catalog, pcat = cell_or_algebra.modular, cell_or_algebra.pims
    else:
        A = cell_or_algebra
        catalog = catalog if catalog is not None else simples(A, rng)
        pcat = pcat if pcat is not None else pims(A, catalog, rng=rng)
    s = len(catalog)
    C = np.zeros((s, s), dtype=np.int64)
    for j, P in enumerate(pcat.modules):
        cv = chop(P, catalog, rng, verify=False)
        C[:, j] = cv.as_vector(catalog.labels)
    return C


def int_det(M) -> int:
    return int(sympy.Matrix(np.asarray(M, dtype=object).tolist()).det())


def is_p_power(n: int, p: int) -> bool:
    n = abs(int(n))
    if n == 0:
        return False
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------------------
# lattices and the decomposition map


class FullLattice:
    """``Z_(p)``-lattice in a ``Q[G]``-module ``V`` given by generator columns."""

    def __init__(self, V: RepModule, generators, p: int):
        self.V, self.p = V, p
        self.ring = LocalRationals(p)
        self.generators = np.asarray(generators, dtype=object)
        self.basis = column_hermite_local(self.generators, self.ring)
        if self.basis.shape[1] != V.dim or rank(self.basis, QQ) != V.dim:
            raise NotAModule("generators do not span V over Q")
        self._binv = inverse(self.basis, QQ)

    def action_in_basis(self):
        mats = []
        for a in self.V.action:
            X = QQ.matmul(QQ.matmul(self._binv, a), self.basis)
            if not all(self.ring.contains(x) for x in X.reshape(-1)):
                raise NotAModule("lattice is not stable under the algebra action")
            mats.append(X)
        return mats

    def reduce(self, modular_algebra: FDAlgebra) -> RepModule:
        F = modular_algebra.ring
        mats = [self.ring.reduce(X, F) for X in self.action_in_basis()]
        return RepModule(modular_algebra, mats, name=f"{self.V.name} mod {self.p}")


def standard_lattice(V: RepModule, p: int) -> FullLattice:
    """``sum_i Lambda v_i`` for the standard basis ``v_i`` of ``V``."""
    return FullLattice(V, _orbit_columns(V, QQ.eye(V.dim)), p)


def _orbit_columns(V, vectors):
    cols = [QQ.matmul(a, vectors) for a in V.action]
    return np.concatenate(cols, axis=1)


def random_lattice(V: RepModule, p: int, rng, kind: int | None = None) -> FullLattice:
    """A random full lattice: either ``sum Lambda s_i`` for a random rational
    basis ``s_i`` with p-power scalings, or ``sum Lambda w_i + p^k M`` for
    random vectors ``w_i`` of the standard lattice ``M``."""
    n = V.dim
    kind = int(rng.integers(2)) if kind is None else kind
    if kind == 0:
        while True:
            S = np.array(
                [[Fraction(int(x)) * Fraction(p) ** int(e) for x, e in zip(row, erow)]
                 for row, erow in zip(rng.integers(-3, 4, (n, n)), rng.integers(-1, 2, (n, n)))],
                dtype=object,
            )
            if rank(S, QQ) == n:
                break
        return FullLattice(V, _orbit_columns(V, S), p)
    M = standard_lattice(V, p)
    t = int(rng.integers(1, n + 1))
    k = int(rng.integers(1, 3))
    W = QQ.matmul(M.basis, np.array([[Fraction(int(x)) for x in row] for row in rng.integers(-3, 4, (n, t))], dtype=object))
    gens = np.concatenate([_orbit_columns(V, W), M.basis * Fraction(p**k)], axis=1)
    return FullLattice(V, gens, p)


def decomposition_map(V: RepModule, catalog: SimpleCatalog, p: int, lattice: FullLattice | None = None, rng=None) -> G0Class:
    lattice = lattice if lattice is not None else standard_lattice(V, p)
    Mbar = lattice.reduce(catalog.algebra)
    cv = chop(Mbar, catalog, rng, verify=False)
    return G0Class.from_composition(catalog.algebra.name, cv, catalog.labels)


def decomposition_matrix(cell: Cell, rng=None) -> np.ndarray:
    """Rows: ordinary simples; columns: modular simples."""
    rows = [decomposition_map(V, cell.modular, cell.p, rng=rng).vector for V in cell.ordinary.modules]
    return np.array(rows, dtype=np.int64).reshape(len(cell.ordinary), len(cell.modular))


def lattice_independence_check(V: RepModule, catalog: SimpleCatalog, p: int, trials: int = 20, rng=None):
    """``(ok, classes)``: reductions of ``trials`` random full lattices all chop alike."""
    if trials < 2:
        raise ValueError("need at least two trials")
    rng = rng if rng is not None else np.random.default_rng(0)
    base = decomposition_map(V, catalog, p, rng=rng)
    classes = [base]
    for t in range(trials - 1):
        L = random_lattice(V, p, rng, kind=t % 2)
        classes.append(decomposition_map(V, catalog, p, L, rng))
    return all(c == base for c in classes), classes


# ---------------------------------------------------------------------------
# projectives over the order


def lam_matmul(A: FDAlgebra, X, Y):
    """Product of matrices with entries in ``A`` (arrays of shape (r, s, d))."""
    R = A.ring
    r, s, d = X.shape
    t = Y.shape[1]
    out = R.zeros((r, t, d))
    for i in range(r):
        for k in range(t):
            acc = R.zeros(d)
            for l in range(s):
                acc = R.add(acc, A.mul(X[i, l], Y[l, k]))
            out[i, k] = acc
    return out


def lam_identity(A: FDAlgebra, r: int):
    E = A.ring.zeros((r, r, A.dim))
    for i in range(r):
        E[i, i] = A.one
    return E


@dataclass
class ProjectiveOverOrder:
    """The image of right multiplication by an idempotent matrix on ``Lambda^r``."""

    algebra: FDAlgebra  # the order Z/p^a[G] or Z_(p)[G]
    matrix: np.ndarray  # (r, r, |G|)
    representation: str = "Z/p^a proxy"
    pim_word: list = field(default_factory=list)  # labels used to build it, if known

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def check(self) -> bool:
        E = self.matrix
        return bool(np.all(lam_matmul(self.algebra, E, E) == E))


def diagonal_projective(cell: Cell, labels) -> ProjectiveOverOrder:
    """Direct sum of lifted PIM idempotents, one diagonal entry per label."""
    A = cell.order_algebra
    pick = {}
    for lab, e in cell.lifted:
        pick.setdefault(lab, e)
    r = len(labels)
    E = A.ring.zeros((r, r, A.dim))
    for i, lab in enumerate(labels):
        E[i, i] = pick[lab]
    return ProjectiveOverOrder(A, E, pim_word=list(labels))


def free_projective(cell: Cell, r: int) -> ProjectiveOverOrder:
    return ProjectiveOverOrder(cell.order_algebra, lam_identity(cell.order_algebra, r), pim_word=["free"] * r)


def random_unimodular(A: FDAlgebra, r: int, rng, steps: int = 6):
    """``(U, U^-1)`` as products of elementary, permutation and unit-diagonal
    matrices over ``A``."""
    R = A.ring
    G = A.group
    U = lam_identity(A, r)
    Ui = lam_identity(A, r)
    for _ in range(steps):
        kind = int(rng.integers(3)) if r > 1 else 2
        M = lam_identity(A, r)
        Mi = lam_identity(A, r)
        if kind == 0:
            k, l = rng.choice(r, 2, replace=False)
            lam = R.asarray(rng.integers(0, 3, A.dim))
            M[k, l] = lam
            Mi[k, l] = R.neg(lam)
        elif kind == 1:
            perm = rng.permutation(r)
            M = M[perm]
            Mi = Mi[:, perm]
        else:
            k = int(rng.integers(r))
            g = int(rng.integers(G.order))
            M[k, k] = A.basis_vector(g)
            Mi[k, k] = A.basis_vector(int(G.inverse[g]))
        U = lam_matmul(A, U, M)
        Ui = lam_matmul(A, Mi, Ui)
    return U, Ui


def conjugate_projective(P: ProjectiveOverOrder, rng) -> ProjectiveOverOrder:
    U, Ui = random_unimodular(P.algebra, P.rank, rng)
    E = lam_matmul(P.algebra, lam_matmul(P.algebra, Ui, P.matrix), U)
    return ProjectiveOverOrder(P.algebra, E, P.representation, list(P.pim_word))


def _image_module(cell: Cell, Ebar) -> RepModule:
    """``{x Ebar : x in F_p[G]^r}`` as a left F_p[G]-module."""
    Am = cell.modular_algebra
    F, d = Am.ring, Am.dim
    r = Ebar.shape[0]
    n = r * d
    big = F.zeros((n, n))
    for l in range(r):
        for k in range(r):
            big[k * d : (k + 1) * d, l * d : (l + 1) * d] = Am.right_matrix(Ebar[l, k])
    free_action = []
    for i in range(d):
        X = F.zeros((n, n))
        for l in range(r):
            X[l * d : (l + 1) * d, l * d : (l + 1) * d] = Am.left_matrices()[i]
        free_action.append(X)
    free = RepModule(Am, free_action, name="free")
    img = row_basis(big.T, F)
    return submodule(free, img, name="image")


def b_map(cell: Cell, P: ProjectiveOverOrder, rng=None) -> K0Class:
    """PIM multiplicities of the reduction, read off its top."""
    if isinstance(P.algebra.ring, LocalRationals):
        Ebar = P.algebra.ring.reduce(P.matrix)
    else:
        Ebar = np.asarray(P.matrix, dtype=np.int64) % cell.p
    M = _image_module(cell, Ebar)
    T = top(M, cell.modular.radical.basis)
    cv = chop(T, cell.modular, rng, verify=False)
    return K0Class(P.algebra.name, list(cell.pims.labels), cv.as_vector(cell.modular.labels))


def e_map(cell: Cell, P: ProjectiveOverOrder) -> G0Class:
    """Ordinary multiplicities of ``K (x) P`` from ranks of central idempotents.

    ``rank(eps on image E) = sum_j |G| (eps E_jj)_1``; over ``Z/p^a`` the
    integer is recovered exactly because it lies in ``[0, r |G|] < p^a``.
    Multiplicities are ``rank / dim V`` and can be fractional when a Q-simple
    splits over the completion.
    """
    G = cell.group
    ring = P.algebra.ring
    inv = G.inverse
    vec = []
    for zeps, V in zip(cell.int_central, cell.ordinary.modules):
        total = 0
        for j in range(P.rank):
            Ejj = P.matrix[j, j]
            total += sum(int(zeps[inv[g]]) * (Fraction(Ejj[g]) if ring.object_dtype else int(Ejj[g])) for g in range(G.order))
        if isinstance(ring, ZmodPk):
            bound = P.rank * G.order
            if ring.modulus <= bound:
                raise ValueError(f"precision p^a = {ring.modulus} too small to recover ranks up to {bound}")
            rk = int(total) % ring.modulus
        else:
            rk = Fraction(total)
            if rk.denominator != 1:
                raise ValueError("rank is not an integer")
            rk = int(rk)
        m = Fraction(rk, V.dim)
        vec.append(int(m) if m.denominator == 1 else m)
    return G0Class(cell.ordinary_algebra.name, list(cell.ordinary.labels), vec)


def e_matrix(cell: Cell) -> list:
    """Rows: PIMs; columns: ordinary simples."""
    rows = []
    for lab in cell.pims.labels:
        P = diagonal_projective(cell, [lab])
        rows.append(e_map(cell, P).vector)
    return rows


# ---------------------------------------------------------------------------
# reports


def _frac_matrix(M):
    return [[Fraction(x) for x in row] for row in M]


def _jsonable(M):
    return [[int(x) if Fraction(x).denominator == 1 else str(Fraction(x)) for x in row] for row in M]


def square_check(G, p: int, a: int = DEFAULT_A, rng=None, cell: Cell | None = None, strict: bool = True) -> dict:
    """Verify the Cartan-Brauer square for ``(G, p)`` as integer identities.

    Checks ``C = D^T E^T`` (E rows are PIMs), weighted reciprocity
    ``E[j, x] f_x = D[x, j] f_j`` with endo-degrees ``f``, ``E = D^T`` and
    ``C = D^T D`` when both catalogs are split, and ``|det C| = p^k``.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    cell = cell if cell is not None else build_cell(G, p, a, rng)
    C = cartan_matrix(cell, rng=rng)
    D = decomposition_matrix(cell, rng)
    E = e_matrix(cell)
    Df, Ef = _frac_matrix(D), _frac_matrix(E)
    sk, sK = len(cell.modular), len(cell.ordinary)
    DtEt = [[sum(Df[x][i] * Ef[j][x] for x in range(sK)) for j in range(sk)] for i in range(sk)]
    fk, fK = cell.modular.endo_degrees, cell.ordinary.endo_degrees
    recip = all(Ef[j][x] * fK[x] == Df[x][j] * fk[j] for j in range(sk) for x in range(sK))
    split = all(f == 1 for f in fk) and all(f == 1 for f in fK)
    DtD = (np.asarray(D).T @ np.asarray(D)).tolist()
    det = int_det(C)
    order = cell.group.order
    identities = {
        "DtEt_eq_C": DtEt == C.tolist(),
        "weighted_reciprocity": recip,
        "E_eq_Dt": (Ef == [list(col) for col in zip(*Df)]) if split else None,
        "DtD_eq_C": (DtD == C.tolist()) if split else None,
        "detC": det,
        "detC_is_p_power": is_p_power(det, p),
        "C_is_identity_when_p_coprime": (C.tolist() == np.eye(sk, dtype=int).tolist()) if order % p else None,
    }
    report = {
        "group": cell.group.name,
        "p": p,
        "splitting_field": {
            "modular": cell.modular_algebra.ring.name,
            "ordinary": "QQ",
            "modular_endo_degrees": list(fk),
            "ordinary_endo_degrees": list(fK),
            "split": split,
        },
        "modular_simples": dict(zip(cell.modular.labels, cell.modular.dims)),
        "ordinary_simples": dict(zip(cell.ordinary.labels, cell.ordinary.dims)),
        "pim_dims": dict(zip(cell.pims.labels, cell.pims.dims)),
        "D": _jsonable(D),
        "C": _jsonable(C),
        "E": _jsonable(E),
        "identities": identities,
    }
    failed = [k for k, v in identities.items() if v is False]
    report["pass"] = not failed
    if strict and failed:
        raise SquareViolation(f"{cell.group.name}, p={p}: failed {failed}")
    return report


def swan_check(cell: Cell, P: ProjectiveOverOrder, Q: ProjectiveOverOrder, rng=None) -> dict:
    b1, b2 = b_map(cell, P, rng), b_map(cell, Q, rng)
    e1, e2 = e_map(cell, P), e_map(cell, Q)
    iso_modular = b1 == b2
    iso_generic = e1 == e2
    return {
        "b": [list(b1.vector), list(b2.vector)],
        "e": [[str(x) for x in e1.vector], [str(x) for x in e2.vector]],
        "iso_modular": iso_modular,
        "iso_generic": iso_generic,
        "isomorphic": iso_modular,
        "consistent": iso_modular == iso_generic,
        "representation": P.representation,
    }


def random_projective_pair(cell: Cell, rng, max_rank: int = 3):
    labels = cell.pims.labels
    r = int(rng.integers(1, max_rank + 1))
    w1 = [labels[int(i)] for i in rng.integers(0, len(labels), r)]
    if rng.random() < 0.5:
        w2 = [w1[int(i)] for i in rng.permutation(r)]
    else:
        w2 = [labels[int(i)] for i in rng.integers(0, len(labels), r)]
    P = conjugate_projective(diagonal_projective(cell, w1), rng)
    Q = conjugate_projective(diagonal_projective(cell, w2), rng)
    return P, Q


def swan_trials(cell: Cell, trials: int = 50, rng=None) -> list:
    rng = rng if rng is not None else np.random.default_rng(0)
    out = []
    for _ in range(trials):
        P, Q = random_projective_pair(cell, rng)
        if not (P.check() and Q.check()):
            raise SquareViolation("random projective is not idempotent")
        rep = swan_check(cell, P, Q, rng)
        rep["words"] = [P.pim_word, Q.pim_word]
        out.append(rep)
    return out
