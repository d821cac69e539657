"""Slow, independent reference computations used only by the tests.

Everything here works with plain integer matrices modulo a prime and the
multiplication table of a group; nothing from the package's linear algebra
or module code is used.
"""

from __future__ import annotations

import itertools

import numpy as np


# ---------------------------------------------------------------------------
# linear algebra mod p


def echelon_mod_p(M, p):
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    r = 0
    pivots = []
    for c in range(cols):
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for k in range(rows):
            if k != r and M[k, c]:
                M[k] = (M[k] - M[k, c] * M[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M[:r], pivots


def rank_mod_p(M, p):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(echelon_mod_p(M, p)[1])


def nullspace_mod_p(M, p):
    """Basis (rows) of ``{x : M x = 0}``."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = echelon_mod_p(M, p)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i, f]) % p
        out.append(v)
    return np.array(out, dtype=np.int64).reshape(-1, n)


# ---------------------------------------------------------------------------
# group algebra from a multiplication table


def regular_action(table, p):
    """Left-regular matrices ``L_g`` (column convention) for every group element."""
    n = len(table)
    mats = []
    for g in range(n):
        L = np.zeros((n, n), dtype=np.int64)
        for h in range(n):
            L[table[g][h], h] = 1
        mats.append(L)
    return mats


def element_matrix(mats, x, p):
    M = np.zeros_like(mats[0])
    for c, m in zip(x, mats):
        M = (M + int(c) * m) % p
    return M


def brute_radical(table, p):
    """Largest nilpotent ideal by enumeration: all ``x`` with ``a x`` nilpotent
    for every ``a``.  Returned as a row basis."""
    n = len(table)
    L = regular_action(table, p)
    elems = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    Lall = np.einsum("ek,kij->eij", elems, np.stack(L)) % p
    members = []
    for x in elems:
        Lx = element_matrix(L, x, p)
        prods = np.einsum("eij,jk->eik", Lall, Lx) % p
        P = prods.copy()
        for _ in range(n):
            P = np.einsum("eij,ejk->eik", P, prods) % p
        if not P.any():
            members.append(x)
    if not members:
        return np.zeros((0, n), dtype=np.int64)
    R, _ = echelon_mod_p(np.array(members), p)
    return R


def spin(mats, vecs, p):
    n = mats[0].shape[0]
    basis = np.zeros((0, n), dtype=np.int64)
    queue = [np.asarray(v) % p for v in vecs]
    while queue:
        v = queue.pop()
        cand = np.vstack([basis, v])
        if rank_mod_p(cand, p) > len(basis):
            basis = echelon_mod_p(cand, p)[0]
            for m in mats:
                queue.append(m @ v % p)
    return basis


def restrict(mats, B, p):
    """Action on the invariant subspace with row basis ``B``."""
    R, piv = echelon_mod_p(B, p)
    return [(m @ R.T % p)[piv] for m in mats], R


def quotient_action(mats, B, p):
    n = mats[0].shape[0]
    if len(B) == 0:
        return mats
    R, piv = echelon_mod_p(B, p)
    comp = [c for c in range(n) if c not in piv]
    out = []
    for m in mats:
        img = m[:, comp].copy()
        for i, c in enumerate(piv):
            img = (img - np.outer(R[i], img[c])) % p
        out.append(img[comp])
    return out


def hom_dim(ma, mb, p):
    """``dim Hom(A, B)`` for modules given by matching lists of matrices."""
    a, b = ma[0].shape[0], mb[0].shape[0]
    if a == 0 or b == 0:
        return 0
    blocks = [(np.kron(x.T, np.eye(b, dtype=np.int64)) - np.kron(np.eye(a, dtype=np.int64), y)) % p for x, y in zip(ma, mb)]
    return a * b - rank_mod_p(np.vstack(blocks), p)


def is_irreducible_by_scan(mats, p):
    """Check every proper nonzero subspace (small dimension only)."""
    n = mats[0].shape[0]
    vecs = [np.array(v) for v in itertools.product(range(p), repeat=n) if any(v)]
    for k in range(1, n):
        for combo in itertools.combinations(vecs, k):
            B = np.array(combo)
            if rank_mod_p(B, p) != k:
                continue
            if all(rank_mod_p(np.vstack([B, (m @ B.T % p).T]), p) == k for m in mats):
                return False
    return True


# ---------------------------------------------------------------------------
# simples and the socle series


def simple_modules(table, p):
    """Minimal left ideals of the group algebra up to isomorphism (every simple
    module of a group algebra embeds in it), trivial first, then by dimension."""
    n = len(table)
    L = regular_action(table, p)
    J = brute_radical(table, p)
    soc = nullspace_mod_p(np.vstack([element_matrix(L, j, p) for j in J]), p) if len(J) else np.eye(n, dtype=np.int64)
    found = []
    for coeffs in itertools.product(range(p), repeat=len(soc)):
        if not any(coeffs):
            continue
        v = np.array(coeffs) @ soc % p
        B = spin(L, [v], p)
        acts, _ = restrict(L, B, p)
        if not is_irreducible_by_spinning(acts, p):
            continue
        if any(len(B) == f[0][0].shape[0] and hom_dim(acts, f, p) for f in found):
            continue
        found.append(acts)
    trivial = [a for a in found if a[0].shape[0] == 1 and all(int(m[0, 0]) == 1 for m in a)]
    rest = sorted((a for a in found if not any(a is t for t in trivial)), key=lambda a: a[0].shape[0])
    return trivial + rest


def is_irreducible_by_spinning(mats, p):
    n = mats[0].shape[0]
    for coeffs in itertools.product(range(p), repeat=n):
        if any(coeffs) and len(spin(mats, [np.array(coeffs)], p)) < n:
            return False
    return True


def socle_series(mats, rad_mats, p):
    """Layers ``soc^(k+1) / soc^k`` as action-matrix lists."""
    layers = []
    current = mats
    while current[0].shape[0]:
        rads = [element_matrix(current, j, p) for j in rad_mats] if len(rad_mats) else []
        n = current[0].shape[0]
        soc = nullspace_mod_p(np.vstack(rads), p) if rads else np.eye(n, dtype=np.int64)
        layer, _ = restrict(current, soc, p)
        layers.append(layer)
        current = quotient_action(current, soc, p)
    return layers


def composition_by_socle(mats, simples, rad_mats, p):
    counts = [0] * len(simples)
    for layer in socle_series(mats, rad_mats, p):
        dim = 0
        for i, S in enumerate(simples):
            k = hom_dim(S, layer, p) // hom_dim(S, S, p)
            counts[i] += k
            dim += k * S[0].shape[0]
        assert dim == layer[0].shape[0], "socle layer is not semisimple"
    return counts


def cartan_by_socle(table, p):
    """Cartan matrix ``C[i, j] = [P_j : S_i]`` from brute-force idempotents.

    Projective indecomposables are ``A e`` for primitive idempotents found by
    enumerating all idempotents of the algebra.
    """
    n = len(table)
    L = regular_action(table, p)
    simples = simple_modules(table, p)
    J = brute_radical(table, p)
    idems = []
    for x in itertools.product(range(p), repeat=n):
        x = np.array(x)
        if x.any() and np.array_equal(element_matrix(L, x, p) @ x % p, x):
            idems.append(x)
    # A e is indecomposable projective exactly when its top is simple
    C = np.zeros((len(simples), len(simples)), dtype=np.int64)
    done = set()
    for e in idems:
        B = spin(L, [e], p)
        acts, _ = restrict(L, B, p)
        rads = [element_matrix(acts, j, p) for j in J]
        radM = np.vstack([r.T for r in rads]) if rads else np.zeros((0, len(B)), dtype=np.int64)
        rad_span = echelon_mod_p(radM, p)[0] if len(radM) else radM
        top = quotient_action(acts, rad_span, p)
        tops = [i for i, S in enumerate(simples) if hom_dim(top, S, p)]
        if len(tops) != 1 or top[0].shape[0] != simples[tops[0]][0].shape[0]:
            continue
        j = tops[0]
        if j in done:
            continue
        done.add(j)
        C[:, j] = composition_by_socle(acts, simples, J, p)
    assert len(done) == len(simples), "missing projective indecomposables"
    return C, [S[0].shape[0] for S in simples]


# ---------------------------------------------------------------------------
# Ext over F_p[C_p] and explicit resolutions


def cyclic_shift(p):
    g = np.zeros((p, p), dtype=np.int64)
    for i in range(p):
        g[(i + 1) % p, i] = 1
    return g


def periodic_ext_trivial(p):
    """``E^0, E^1, E^2`` of the trivial module over ``F_p[C_p]`` from the
    periodic resolution ``... -> L -(g-1)-> L -(N)-> L -(g-1)-> L -> k``.

    Dualising replaces right multiplication by ``x`` with right
    multiplication by ``x^sharp``; the algebra is commutative, so right and
    left multiplication agree, and ``N^sharp = N``.
    """
    g = cyclic_shift(p)
    ginv = np.linalg.matrix_power(g, p - 1)
    eye = np.eye(p, dtype=np.int64)
    d0 = (ginv - eye) % p  # dual of g - 1
    N = sum(np.linalg.matrix_power(g, i) for i in range(p)) % p
    d1 = N
    d2 = d0
    ker = lambda M: p - rank_mod_p(M, p)
    e0 = ker(d0)
    e1 = ker(d1) - rank_mod_p(d0, p)
    e2 = ker(d2) - rank_mod_p(d1, p)
    transpose_dim = p - rank_mod_p(d0, p)
    return {"E0": e0, "E1": e1, "E2": e2, "DM": transpose_dim}


def explicit_resolution_ext(table, p, relation_vectors, depth=3):
    """Ext dimensions of ``Lambda / (Lambda-span of relation_vectors)`` using a
    deliberately non-minimal resolution: every kernel is covered by a free
    module on a full field basis of that kernel."""
    n = len(table)
    ident = next(g for g in range(n) if all(table[g][h] == h for h in range(n)))
    inv = [next(h for h in range(n) if table[g][h] == ident) for g in range(n)]

    def right_mult(x):
        # matrix of y -> y x on coordinates (column convention)
        R = np.zeros((n, n), dtype=np.int64)
        for h in range(n):
            for g in range(n):
                if x[g]:
                    R[table[h][g], h] = (R[table[h][g], h] + x[g]) % p
        return R

    def map_matrix(rows, s):
        # rows: list of elements of Lambda^s (each an (s, n) array); x -> x A
        r = len(rows)
        Phi = np.zeros((s * n, r * n), dtype=np.int64)
        for i, row in enumerate(rows):
            for j in range(s):
                Phi[j * n : (j + 1) * n, i * n : (i + 1) * n] = right_mult(row[j])
        return Phi

    def sharp(x):
        y = np.zeros(n, dtype=np.int64)
        for g in range(n):
            y[inv[g]] = x[g]
        return y

    s = 1
    mats = [[np.array(v).reshape(1, n) for v in relation_vectors]]
    ranks = [1, len(relation_vectors)]
    for _ in range(depth - 1):
        rows, prev_s = mats[-1], ranks[-2]
        Phi = map_matrix(rows, prev_s)
        K = nullspace_mod_p(Phi, p)
        r = len(rows)
        mats.append([k.reshape(r, n) for k in K])
        ranks.append(len(K))
    dims = []
    plus = []
    for rows, (si, ri) in zip(mats, zip(ranks, ranks[1:])):
        # A is ri x si; A^+ is si x ri with sharp entries
        Aplus = [np.array([sharp(rows[i][j]) for i in range(ri)]) for j in range(si)]
        plus.append(map_matrix(Aplus, ri) if ri else np.zeros((0, si * n), dtype=np.int64))
    for i in range(3):
        dim_here = ranks[i] * n
        d_out = plus[i] if i < len(plus) else np.zeros((0, dim_here), dtype=np.int64)
        z = dim_here - rank_mod_p(d_out, p) if d_out.size else dim_here
        b = rank_mod_p(plus[i - 1], p) if i > 0 and plus[i - 1].size else 0
        dims.append(z - b)
    return dims
