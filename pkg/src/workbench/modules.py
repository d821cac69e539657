"""Modules over structure-constant algebras as explicit matrix actions.

Modules are left modules acting on column vectors: ``act[i] @ v`` is
``b_i . v``.  Subspaces are stored as row bases.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import polys
from .algebras import FDAlgebra
from .errors import IncompleteCatalog, Inconclusive, NotPrimitive, SplitFailure
from .idempotents import Block, lift_idempotents, primitive_idempotents
from .linalg import kernel, rank, row_basis, rref
from .radical import radical
from .rings import FiniteField, RationalField

MEATAXE_BUDGET = 64
EXHAUSTIVE_HOM_LIMIT = 4096


class RepModule:
    def __init__(self, algebra: FDAlgebra, action, name="M", check=False):
        self.algebra = algebra
        self.field = algebra.ring
        self.action = [np.asarray(a) for a in action]
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        self.name = name
        if check:
            self.check()

    @property
    def dim(self) -> int:
        return self.action[0].shape[0] if self.action else 0

    @property
    def generators(self):
        """Action matrices of algebra generators used for spinning."""
        G = self.algebra.group
        if G is not None and G.generators:
            return [self.action[g] for g in G.generators]
        if G is not None:
            return []
        return self.action

    def act(self, x):
        """Matrix of an algebra element."""
        F = self.field
        M = F.zeros((self.dim, self.dim))
        for i, c in enumerate(np.asarray(x)):
            if not F.is_zero(c):
                M = F.add(M, F.mul(self.action[i], c))
        return M

    def check(self, samples=None, rng=None) -> bool:
        A, F = self.algebra, self.field
        d = A.dim
        if not np.all(self.act(A.one) == F.eye(self.dim)):
            raise ValueError("unity does not act as the identity")
        pairs = [(i, j) for i in range(d) for j in range(d)]
        if samples is not None and samples < len(pairs):
            rng = rng or np.random.default_rng(0)
            pairs = [pairs[k] for k in rng.choice(len(pairs), samples, replace=False)]
        for i, j in pairs:
            if not np.all(F.matmul(self.action[i], self.action[j]) == self.act(A.consts[i, j])):
                raise ValueError(f"action does not respect b_{i} b_{j}")
        return True

    def __repr__(self):
        return f"RepModule({self.name}, dim={self.dim}, over {self.field.name})"


def regular_module(A: FDAlgebra) -> RepModule:
    return RepModule(A, A.left_matrices(), name="regular")


def group_module(A: FDAlgebra, gen_mats: dict, name="M") -> RepModule:
    """Module for a group algebra from matrices of (some) group elements that
    generate the group; the remaining element matrices are derived."""
    G, F = A.group, A.ring
    n = next(iter(gen_mats.values())).shape[0] if gen_mats else 1
    mats = {G.identity: F.eye(n)}
    queue = deque([G.identity])
    gens = {int(g): np.asarray(m) for g, m in gen_mats.items()}
    while queue:
        x = queue.popleft()
        for g, m in gens.items():
            y = int(G.table[g, x])
            val = F.matmul(m, mats[x])
            if y in mats:
                if not np.all(mats[y] == val):
                    raise ValueError("matrices do not satisfy the group relations")
            else:
                mats[y] = val
                queue.append(y)
    if len(mats) != G.order:
        raise ValueError("matrices do not generate an action of the whole group")
    M = RepModule(A, [mats[g] for g in range(G.order)], name=name)
    for a in range(G.order):
        for b in G.generators:
            if not np.all(F.matmul(M.action[a], M.action[b]) == M.action[G.table[a, b]]):
                raise ValueError("matrices do not satisfy the group relations")
    return M


def trivial_module(A: FDAlgebra) -> RepModule:
    F = A.ring
    return RepModule(A, [F.eye(1) for _ in range(A.dim)], name="triv")


def direct_sum(*Ms: RepModule) -> RepModule:
    A, F = Ms[0].algebra, Ms[0].field
    n = sum(M.dim for M in Ms)
    action = []
    for i in range(A.dim):
        X = F.zeros((n, n))
        o = 0
        for M in Ms:
            X[o : o + M.dim, o : o + M.dim] = M.action[i]
            o += M.dim
        action.append(X)
    return RepModule(A, action, name="+".join(M.name for M in Ms))


def conjugate(M: RepModule, P) -> RepModule:
    """The isomorphic module with action ``P^-1 act P``."""
    from .linalg import inverse

    F = M.field
    Pi = inverse(P, F)
    return RepModule(M.algebra, [F.matmul(F.matmul(Pi, a), P) for a in M.action], name=M.name + "'")


# ---------------------------------------------------------------------------
# subspaces


class Echelon:
    """Incrementally maintained reduced echelon basis."""

    def __init__(self, F, n):
        self.F, self.n = F, n
        self.rows: list = []
        self.pivots: list[int] = []

    def reduce(self, v):
        F = self.F
        v = np.array(v, copy=True)
        for r, c in zip(self.rows, self.pivots):
            if not F.is_zero(v[c]):
                v = F.sub(v, F.mul(r, v[c]))
        return v

    def add(self, v) -> bool:
        F = self.F
        v = self.reduce(v)
        nz = np.nonzero(~F.is_zero(v))[0]
        if len(nz) == 0:
            return False
        c = int(nz[0])
        v = F.mul(v, F.inv_scalar(v[c]))
        for k, r in enumerate(self.rows):
            if not F.is_zero(r[c]):
                self.rows[k] = F.sub(r, F.mul(v, r[c]))
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def coords(self, v):
        """Coefficients of ``v`` in the basis (assumes membership)."""
        return np.array([v[c] for c in self.pivots], dtype=object if self.F.object_dtype else np.int64)

    def basis(self):
        F = self.F
        if not self.rows:
            return F.zeros((0, self.n))
        order = np.argsort(self.pivots)
        return np.stack([self.rows[i] for i in order])

    def __len__(self):
        return len(self.rows)


def spin(M: RepModule, vectors) -> np.ndarray:
    """Row basis of the smallest submodule containing ``vectors``."""
    F = M.field
    E = Echelon(F, M.dim)
    gens = M.generators
    queue = deque()
    for v in np.asarray(vectors).reshape(-1, M.dim):
        if E.add(v):
            queue.append(E.rows[-1])
    while queue:
        v = queue.popleft()
        for g in gens:
            w = F.matmul(g, v[:, None])[:, 0]
            if E.add(w):
                queue.append(E.rows[-1])
                if len(E) == M.dim:
                    return E.basis()
    return E.basis()


def is_submodule(M: RepModule, U) -> bool:
    U = np.asarray(U).reshape(-1, M.dim)
    if len(U) == 0:
        return True
    F = M.field
    r = rank(U, F)
    imgs = [F.matmul(g, U.T).T for g in M.generators]
    return rank(np.concatenate([U] + imgs), F) == r


def submodule(M: RepModule, U, name=None) -> RepModule:
    F = M.field
    R, piv = rref(np.asarray(U).reshape(-1, M.dim), F)
    R = R[: len(piv)]
    k = len(piv)
    action = []
    for a in M.action:
        img = F.matmul(a, R.T).T  # images of basis rows
        action.append(img[:, piv].T)  # coords in rref basis: column j = image of row j
    return RepModule(M.algebra, action, name=name or f"{M.name}_sub{k}")


def quotient(M: RepModule, U, name=None) -> RepModule:
    F = M.field
    n = M.dim
    U = np.asarray(U).reshape(-1, n)
    if len(U):
        R, piv = rref(U, F)
        R = R[: len(piv)]
    else:
        R, piv = U, []
    comp = [c for c in range(n) if c not in set(piv)]
    # reduction of standard vector e_c modulo U keeps only comp coordinates
    action = []
    for a in M.action:
        img = a[:, comp]  # columns = images of e_c, c in comp
        for i, c in enumerate(piv):
            row = img[c]
            if np.any(~F.is_zero(row)):
                img = F.sub(img, F.mul(R[i][:, None], row[None, :]))
        action.append(img[comp])
    return RepModule(M.algebra, action, name=name or f"{M.name}_quo{len(comp)}")


def dual_annihilator(F, W, n):
    """``{v : w . v = 0 for w in W}`` as a row basis."""
    W = np.asarray(W).reshape(-1, n)
    if len(W) == 0:
        return F.eye(n)
    return kernel(W, F).T


# ---------------------------------------------------------------------------
# MeatAxe


def _random_element_matrix(M: RepModule, rng):
    F = M.field
    c = F.random(rng, M.algebra.dim)
    return M.act(c)


def meataxe_split(M: RepModule, rng=None, budget: int = MEATAXE_BUDGET):
    """A proper nonzero submodule (row basis), or ``None`` if ``M`` is irreducible.

    Holt-Rees variant of Norton's irreducibility test; raises SplitFailure
    after ``budget`` random algebra elements without a decision.
    """
    F = M.field
    if not isinstance(F, FiniteField):
        raise TypeError("the MeatAxe runs over finite fields")
    n = M.dim
    if n <= 1:
        return None
    rng = rng if rng is not None else np.random.default_rng(0)
    gensT = [g.T.copy() for g in M.generators]
    for _ in range(budget):
        theta = _random_element_matrix(M, rng)
        cp = polys.charpoly(theta, F)
        for f, _mult in polys.factor(F, cp, rng):
            N = polys.matpoly(F, f, theta)
            K = kernel(N, F).T
            if len(K) == 0:
                continue
            U = spin(M, K[0])
            if len(U) < n:
                return U
            if len(K) == polys.deg(f):
                Kt = kernel(N.T.copy(), F).T
                W = _spin_mats(F, gensT, Kt[0], n)
                if len(W) == n:
                    return None
                return dual_annihilator(F, W, n)
    raise SplitFailure(f"MeatAxe undecided after {budget} random elements")


def _spin_mats(F, mats, v, n):
    E = Echelon(F, n)
    E.add(v)
    queue = deque([E.rows[-1]])
    while queue:
        x = queue.popleft()
        for g in mats:
            w = F.matmul(g, x[:, None])[:, 0]
            if E.add(w):
                queue.append(E.rows[-1])
    return E.basis()


def composition_factors(M: RepModule, rng=None) -> list[RepModule]:
    """Irreducible composition factors, bottom to top."""
    rng = rng if rng is not None else np.random.default_rng(0)
    if M.dim == 0:
        return []
    U = meataxe_split(M, rng)
    if U is None:
        return [M]
    return composition_factors(submodule(M, U), rng) + composition_factors(quotient(M, U), rng)


def composition_series_basis(M: RepModule, rng=None):
    """Change-of-basis matrix (columns) adapted to a composition series, plus
    factor dimensions; the action becomes block upper triangular."""
    F = M.field
    rng = rng if rng is not None else np.random.default_rng(0)
    n = M.dim
    if n == 0:
        return F.zeros((0, 0)), []
    U = meataxe_split(M, rng)
    if U is None:
        return F.eye(n), [n]
    R, piv = rref(U, F)
    R = R[: len(piv)]
    comp = [c for c in range(n) if c not in set(piv)]
    Bs, ds = composition_series_basis(submodule(M, U), rng)
    Bq, dq = composition_series_basis(quotient(M, U), rng)
    sub_cols = F.matmul(R.T, Bs)
    quo_cols = F.zeros((n, len(comp)))
    quo_cols[comp] = Bq
    return np.concatenate([sub_cols, quo_cols], axis=1), ds + dq


# ---------------------------------------------------------------------------
# homomorphisms and isomorphism


def _kron(F, A, B):
    A, B = np.asarray(A), np.asarray(B)
    K = F.mul(A[:, None, :, None], B[None, :, None, :])
    return K.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def hom_space(M: RepModule, N: RepModule):
    """Basis of ``Hom_A(M, N)`` as a list of ``N.dim x M.dim`` matrices."""
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    blocks = []
    Im, In = F.eye(m), F.eye(n)
    gm, gn = M.generators, N.generators
    if not gm:
        return [b.reshape(m, n).T for b in F.eye(m * n)]
    for a, b in zip(gm, gn):
        # X a - b X = 0 with X column-major: vec(XA) = (A^T kron I) vec X
        blocks.append(F.sub(_kron(F, a.T, In), _kron(F, Im, b)))
    K = kernel(np.concatenate(blocks), F)
    return [K[:, j].reshape(m, n).T for j in range(K.shape[1])]


def is_isomorphic_simple(S: RepModule, T: RepModule) -> bool:
    """For irreducible modules: isomorphic iff a nonzero homomorphism exists."""
    return S.dim == T.dim and len(hom_space(S, T)) > 0


def endomorphism_degree(S: RepModule) -> int:
    return len(hom_space(S, S))


# ---------------------------------------------------------------------------
# catalogs


@dataclass
class CompositionVector:
    counts: dict
    dims: dict = field(default_factory=dict)

    def total_dim(self) -> int:
        return sum(k * self.dims[lab] for lab, k in self.counts.items())

    def __eq__(self, other):
        a = {k: v for k, v in self.counts.items() if v}
        b = {k: v for k, v in other.counts.items() if v}
        return a == b

    def as_vector(self, labels):
        return [self.counts.get(l, 0) for l in labels]

    def __repr__(self):
        return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(self.counts.items()) if v) + "}"


@dataclass
class SimpleCatalog:
    algebra: FDAlgebra
    modules: list
    labels: list
    endo_degrees: list
    blocks: list  # central idempotents of A/rad (as vectors there), aligned
    radical: object = None
    certified: list = field(default_factory=list)

    @property
    def dims(self):
        return [S.dim for S in self.modules]

    def __len__(self):
        return len(self.modules)

    def index_of(self, S: RepModule) -> int:
        for i, T in enumerate(self.modules):
            if is_isomorphic_simple(S, T):
                return i
        raise IncompleteCatalog(f"module of dim {S.dim} matches no catalog simple")


def _trace_signature(M: RepModule):
    F = M.field
    return tuple(str(sum((a[i, i] for i in range(M.dim)), F.zero)) for a in M.action)


def _is_trivial(M: RepModule):
    A = M.algebra
    if M.dim != 1 or A.group is None:
        return False
    return all(np.all(a == M.field.eye(1)) for a in M.action)


def simples(A: FDAlgebra, rng=None, prefix: str = "S") -> SimpleCatalog:
    """Simple modules of ``A`` up to isomorphism, one per block of ``A/rad``,
    each realised as a minimal left ideal ``(A/rad) e``."""
    rng = rng if rng is not None else np.random.default_rng(0)
    F = A.ring
    rad = radical(A)
    Q, project, lift = A.quotient(rad.basis)
    blocks = primitive_idempotents(Q, rng)
    entries = []
    for b in blocks:
        e = b.primitives[0]
        Qe = row_basis(Q.mul_many(Q.ring.eye(Q.dim), e[None, :])[:, 0], F)
        acts = []
        for i in range(A.dim):
            L = Q.left_matrix(project(A.basis_vector(i)))
            acts.append(L)
        S = submodule(RepModule(A, acts, name="A/rad"), Qe)
        block_dim = len(row_basis(Q.mul_many(b.central[None, :], Q.ring.eye(Q.dim))[0], F))
        f = S.dim * S.dim // block_dim
        if S.dim * S.dim != f * block_dim:
            raise IncompleteCatalog("block dimension is not dim^2 / endo-degree")
        entries.append((S, f, b))
    entries.sort(key=lambda t: (not _is_trivial(t[0]), t[0].dim, _trace_signature(t[0])))
    mods = [t[0] for t in entries]
    labels = [f"{prefix}{i + 1}" for i in range(len(mods))]
    for S, lab in zip(mods, labels):
        S.name = lab
    total = sum(S.dim * S.dim // f for S, f, _ in entries)
    if total != Q.dim:
        raise IncompleteCatalog(f"simples account for {total} of dim A/rad = {Q.dim}")
    return SimpleCatalog(
        A, mods, labels, [t[1] for t in entries], [t[2].central for t in entries], rad, [t[2].certified for t in entries]
    )


def chop(M: RepModule, catalog: SimpleCatalog | None = None, rng=None, verify: bool = True) -> CompositionVector:
    """Composition multiplicities of ``M`` against a catalog of simples."""
    catalog = catalog if catalog is not None else simples(M.algebra)
    if isinstance(M.field, RationalField):
        return chop_semisimple(M, catalog)
    rng = rng if rng is not None else np.random.default_rng(0)
    counts = {lab: 0 for lab in catalog.labels}
    for S in composition_factors(M, rng):
        counts[catalog.labels[catalog.index_of(S)]] += 1
    cv = CompositionVector(counts, dict(zip(catalog.labels, catalog.dims)))
    if verify:
        other = {lab: 0 for lab in catalog.labels}
        for S in composition_factors(M, np.random.default_rng(rng.integers(2**32))):
            other[catalog.labels[catalog.index_of(S)]] += 1
        if other != counts:
            raise AssertionError("two chops disagree (Jordan-Hoelder violated)")
    if cv.total_dim() != M.dim:
        raise AssertionError("composition vector does not account for the dimension")
    return cv


def chop_semisimple(M: RepModule, catalog: SimpleCatalog) -> CompositionVector:
    """Multiplicities in a module over a semisimple algebra from ranks of
    central idempotents."""
    A, F = M.algebra, M.field
    if catalog.radical is not None and catalog.radical.dim:
        raise ValueError("semisimple chop needs a semisimple algebra")
    counts = {}
    for lab, S, eps in zip(catalog.labels, catalog.modules, catalog.blocks):
        r = rank(M.act(eps), F)
        if r % S.dim:
            raise AssertionError("isotypic component dimension is not a multiple of the simple's")
        counts[lab] = r // S.dim
    cv = CompositionVector(counts, dict(zip(catalog.labels, catalog.dims)))
    if cv.total_dim() != M.dim:
        raise AssertionError("composition vector does not account for the dimension")
    return cv


@dataclass
class PIMCatalog:
    algebra: FDAlgebra
    modules: list
    labels: list  # label of the simple each one covers
    idempotents: list
    multiplicities: list  # number of copies in the regular module

    @property
    def dims(self):
        return [P.dim for P in self.modules]


def left_ideal_module(A: FDAlgebra, e, name="Ae") -> RepModule:
    F = A.ring
    Ae = row_basis(A.mul_many(F.eye(A.dim), np.asarray(e)[None, :])[:, 0], F)
    return submodule(regular_module(A), Ae, name=name)


def radical_submodule(M: RepModule, rad_basis):
    """Row basis of ``rad(A) M``."""
    F = M.field
    vecs = []
    for r in rad_basis:
        X = M.act(r)
        vecs.append(X.T)  # rows = images of standard vectors
    if not vecs:
        return F.zeros((0, M.dim))
    return row_basis(np.concatenate(vecs), F)


def top(M: RepModule, rad_basis) -> RepModule:
    return quotient(M, radical_submodule(M, rad_basis), name=f"top({M.name})")


def pims(A: FDAlgebra, catalog: SimpleCatalog | None = None, idempotents=None, rng=None) -> PIMCatalog:
    """Projective indecomposables ``A e`` labelled by the simple on top."""
    rng = rng if rng is not None else np.random.default_rng(0)
    catalog = catalog if catalog is not None else simples(A, rng)
    es = idempotents if idempotents is not None else lift_idempotents(A, rng)
    found = {}
    counts = {lab: 0 for lab in catalog.labels}
    for e in es:
        P = left_ideal_module(A, e)
        T = top(P, catalog.radical.basis)
        if T.dim == 0:
            continue
        # the top must be a single simple
        j = None
        for i, S in enumerate(catalog.modules):
            if S.dim == T.dim and is_isomorphic_simple(T, S):
                j = i
                break
        if j is None:
            raise NotPrimitive(f"top of A e has dim {T.dim} and is not simple")
        lab = catalog.labels[j]
        counts[lab] += 1
        if lab not in found:
            P.name = "P" + lab[1:]
            found[lab] = (P, e)
    missing = [l for l in catalog.labels if l not in found]
    if missing:
        raise IncompleteCatalog(f"no PIM found for {missing}")
    mods = [found[l][0] for l in catalog.labels]
    cat = PIMCatalog(A, mods, list(catalog.labels), [found[l][1] for l in catalog.labels], [counts[l] for l in catalog.labels])
    if sum(m * P.dim for m, P in zip(cat.multiplicities, mods)) != A.dim:
        raise IncompleteCatalog("PIM multiplicities do not rebuild the regular module")
    return cat


def is_isomorphic(M: RepModule, N: RepModule, catalog: SimpleCatalog | None = None, rng=None, budget=MEATAXE_BUDGET):
    """Isomorphism test; composition vectors for semisimple modules, PIM
    multiplicities for projectives, an intertwiner search otherwise."""
    if M.dim != N.dim:
        return False
    if M.dim == 0:
        return True
    rng = rng if rng is not None else np.random.default_rng(0)
    F = M.field
    catalog = catalog if catalog is not None else simples(M.algebra, rng)
    cm = chop(M, catalog, rng, verify=False)
    cn = chop(N, catalog, rng, verify=False)
    if cm != cn:
        return False
    radb = catalog.radical.basis
    if isinstance(F, RationalField) or (len(radical_submodule(M, radb)) == 0 and len(radical_submodule(N, radb)) == 0):
        return True
    H = hom_space(M, N)
    if not H:
        return False
    if isinstance(F, FiniteField) and F.q ** len(H) <= EXHAUSTIVE_HOM_LIMIT:
        # small enough to decide outright
        for c in itertools.product(range(F.q), repeat=len(H)):
            if any(c) and rank(_combine(F, np.array(c, dtype=np.int64), H), F) == M.dim:
                return True
        return False
    for _ in range(budget):
        X = _combine(F, F.random(rng, len(H)), H)
        if rank(X, F) == M.dim:
            return True
    raise Inconclusive("no invertible intertwiner found within budget")


def _combine(F, c, H):
    X = F.zeros(H[0].shape)
    for ci, h in zip(c, H):
        X = F.add(X, F.mul(h, ci))
    return X


def projective_multiplicities(M: RepModule, catalog: SimpleCatalog, rng=None):
    """For a projective module: multiplicity of each PIM, read off the top."""
    T = top(M, catalog.radical.basis)
    return chop(T, catalog, rng, verify=False)
