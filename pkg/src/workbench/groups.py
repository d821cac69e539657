"""Small finite groups given by Cayley tables."""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import NotAnAutomorphism, UnsupportedOrder

MAX_ORDER = 64


@dataclass(eq=False)
class FiniteGroup:
    """Elements are the indices ``0..n-1``; ``table[a, b]`` is the index of ``ab``."""

    table: np.ndarray
    generators: list
    labels: list
    name: str = "G"
    perms: list | None = None
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.table.shape[0]
        if n > MAX_ORDER:
            raise UnsupportedOrder(f"order {n} exceeds cap {MAX_ORDER}")
        idx = [e for e in range(n) if np.array_equal(self.table[e], np.arange(n))]
        if len(idx) != 1:
            raise ValueError("table has no unique left identity")
        self.identity = idx[0]
        inv = np.empty(n, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(self.table[a] == self.identity)[0]
            if len(hits) != 1:
                raise ValueError("element without unique inverse")
            inv[a] = hits[0]
        self.inverse = inv

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def mul(self, a, b):
        return int(self.table[a, b])

    def power(self, a, k):
        k %= self.element_order(a)
        r = self.identity
        for _ in range(k):
            r = int(self.table[r, a])
        return r

    def element_order(self, a) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def check_axioms(self) -> bool:
        t = self.table
        n = self.order
        assoc = np.array_equal(t[t[:, :, None], np.arange(n)[None, None, :]], t[np.arange(n)[:, None, None], t[None, :, :]])
        ident = np.array_equal(t[self.identity], np.arange(n)) and np.array_equal(t[:, self.identity], np.arange(n))
        inv = np.all(t[np.arange(n), self.inverse] == self.identity) and np.all(t[self.inverse, np.arange(n)] == self.identity)
        latin = all(len(set(row)) == n for row in t.tolist())
        return bool(assoc and ident and inv and latin)

    def conjugacy_classes(self) -> list[list[int]]:
        seen, classes = set(), []
        for a in range(self.order):
            if a in seen:
                continue
            cls = sorted({int(self.table[self.table[g, a], self.inverse[g]]) for g in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def is_automorphism(self, perm) -> bool:
        perm = np.asarray(perm)
        n = self.order
        if sorted(perm.tolist()) != list(range(n)):
            return False
        return bool(np.array_equal(perm[self.table], self.table[perm[:, None], perm[None, :]]))

    def compose_perm(self, phi, psi):
        """``phi o psi`` for automorphisms given as index permutations."""
        return np.asarray(phi)[np.asarray(psi)]

    def automorphism_order(self, phi) -> int:
        phi = np.asarray(phi)
        k, cur = 1, phi.copy()
        while not np.array_equal(cur, np.arange(self.order)):
            cur = phi[cur]
            k += 1
        return k

    def conjugation(self, g):
        """Inner automorphism ``x -> g x g^-1`` as a permutation."""
        t = self.table
        return np.array([t[t[g, x], self.inverse[g]] for x in range(self.order)])

    def subgroup_generated(self, gens) -> list[int]:
        elems = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(elems)

    def regular_elements(self, p: int) -> list[int]:
        return [a for a in range(self.order) if self.element_order(a) % p]

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# constructions


def from_permutations(gens, name="G") -> FiniteGroup:
    gens = [tuple(g) for g in gens]
    deg = len(gens[0]) if gens else 0
    ident = tuple(range(deg))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)  # apply x first, then g
            if y not in index:
                if len(elems) >= MAX_ORDER:
                    raise UnsupportedOrder(f"group exceeds cap {MAX_ORDER}")
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for a, x in enumerate(elems):
        for b, y in enumerate(elems):
            # (x*y)(i) = x(y(i)): apply y first
            table[a, b] = index[tuple(x[i] for i in y)]
    labels = ["(" + " ".join(str(i) for i in x) + ")" for x in elems]
    return FiniteGroup(table, [index[g] for g in gens], labels, name, perms=elems)


def cyclic(n: int) -> FiniteGroup:
    if n > MAX_ORDER:
        raise UnsupportedOrder(f"order {n} exceeds cap {MAX_ORDER}")
    i = np.arange(n)
    table = (i[:, None] + i[None, :]) % n
    labels = ["1" if k == 0 else ("g" if k == 1 else f"g^{k}") for k in range(n)]
    return FiniteGroup(table, [1 % n] if n > 1 else [], labels, f"C{n}")


def trivial_group() -> FiniteGroup:
    g = cyclic(1)
    g.name = "1"
    return g


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` with elements ``r^a s^b``."""
    if 2 * n > MAX_ORDER:
        raise UnsupportedOrder(f"order {2 * n} exceeds cap {MAX_ORDER}")
    elems = [(a, b) for b in range(2) for a in range(n)]
    index = {e: k for k, e in enumerate(elems)}
    N = len(elems)
    table = np.empty((N, N), dtype=np.int64)
    for x, (a, b) in enumerate(elems):
        for y, (c, d) in enumerate(elems):
            table[x, y] = index[((a + (-1) ** b * c) % n, (b + d) % 2)]
    labels = [("r^%d" % a if a else "") + ("s" if b else "") or "1" for a, b in elems]
    return FiniteGroup(table, [index[(1 % n, 0)], index[(0, 1)]], labels, f"D{n}")


def quaternion() -> FiniteGroup:
    """Q8 = {+-1, +-i, +-j, +-k}."""
    units = ["1", "i", "j", "k"]
    # products of basis units: (sign, unit)
    prod = {
        ("1", u): (1, u) for u in units
    }
    prod.update({(u, "1"): (1, u) for u in units})
    prod.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: k for k, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for x, (s1, u1) in enumerate(elems):
        for y, (s2, u2) in enumerate(elems):
            s, u = prod[(u1, u2)]
            table[x, y] = index[(s1 * s2 * s, u)]
    labels = [("" if s == 1 else "-") + u for s, u in elems]
    return FiniteGroup(table, [index[(1, "i")], index[(1, "j")]], labels, "Q8")


def symmetric(n: int) -> FiniteGroup:
    if n > 4:
        raise UnsupportedOrder("symmetric groups are bundled up to S4")
    if n == 1:
        g = trivial_group()
        g.name = "S1"
        return g
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    gens = [swap] if n == 2 else [swap, cycle]
    return from_permutations(gens, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n != 4 and n > 4:
        raise UnsupportedOrder("alternating groups are bundled up to A4")
    if n <= 2:
        g = trivial_group()
        g.name = f"A{n}"
        return g
    if n == 3:
        g = from_permutations([(1, 2, 0)], "A3")
        return g
    return from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)], "A4")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    n, m = G.order, H.order
    if n * m > MAX_ORDER:
        raise UnsupportedOrder(f"order {n * m} exceeds cap {MAX_ORDER}")
    table = np.empty((n * m, n * m), dtype=np.int64)
    for a, b in itertools.product(range(n), range(m)):
        for c, d in itertools.product(range(n), range(m)):
            table[a * m + b, c * m + d] = G.table[a, c] * m + H.table[b, d]
    gens = [g * m + H.identity for g in G.generators] + [G.identity * m + h for h in H.generators]
    labels = [f"({x},{y})" for x in G.labels for y in H.labels]
    return FiniteGroup(table, gens, labels, f"{G.name}x{H.name}")


def semidirect(N: FiniteGroup, K: FiniteGroup, action) -> FiniteGroup:
    """``N x| K`` where ``action[k]`` is the automorphism of ``N`` by which ``k`` acts.

    ``action`` may list all elements of ``K`` or only its generators (as a
    dict ``gen -> perm``); it must define a homomorphism ``K -> Aut(N)``.
    """
    n, m = N.order, K.order
    if n * m > MAX_ORDER:
        raise UnsupportedOrder(f"order {n * m} exceeds cap {MAX_ORDER}")
    if isinstance(action, dict):
        full = _extend_action(N, K, action)
    else:
        full = [np.asarray(a) for a in action]
    for k in range(m):
        if not N.is_automorphism(full[k]):
            raise NotAnAutomorphism(f"action of {K.labels[k]} is not an automorphism")
    for k1, k2 in itertools.product(range(m), range(m)):
        if not np.array_equal(full[K.table[k1, k2]], full[k1][full[k2]]):
            raise NotAnAutomorphism("action is not a homomorphism K -> Aut(N)")
    table = np.empty((n * m, n * m), dtype=np.int64)
    for a, k1 in itertools.product(range(n), range(m)):
        for b, k2 in itertools.product(range(n), range(m)):
            table[a * m + k1, b * m + k2] = N.table[a, full[k1][b]] * m + K.table[k1, k2]
    gens = [g * m + K.identity for g in N.generators] + [N.identity * m + k for k in K.generators]
    labels = [f"({x},{y})" for x in N.labels for y in K.labels]
    return FiniteGroup(table, gens, labels, f"{N.name}:{K.name}")


def _extend_action(N, K, gen_action):
    ident = np.arange(N.order)
    full = {K.identity: ident}
    queue = deque([K.identity])
    gen_action = {g: np.asarray(phi) for g, phi in gen_action.items()}
    while queue:
        k = queue.popleft()
        for g, phi in gen_action.items():
            k2 = int(K.table[k, g])
            val = full[k][phi]
            if k2 in full:
                if not np.array_equal(full[k2], val):
                    raise NotAnAutomorphism("generator action does not define a homomorphism")
            else:
                full[k2] = val
                queue.append(k2)
    return [full[k] for k in range(K.order)]


def semidirect_cyclic(N: FiniteGroup, phi, k: int) -> FiniteGroup:
    """``N x| C_k`` with the generator of ``C_k`` acting by ``phi``."""
    phi = np.asarray(phi)
    if not N.is_automorphism(phi):
        raise NotAnAutomorphism("phi is not an automorphism")
    if k % N.automorphism_order(phi):
        raise NotAnAutomorphism(f"phi has order not dividing {k}")
    C = cyclic(k)
    return semidirect(N, C, {1 % k: phi} if k > 1 else {})


def inversion_automorphism(G: FiniteGroup):
    perm = G.inverse.copy()
    if not G.is_automorphism(perm):
        raise NotAnAutomorphism(f"inversion is not an automorphism of {G.name}")
    return perm


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """A permutation ``f`` with ``f[G.table[a, b]] == H.table[f[a], f[b]]``, or None."""
    if G.order != H.order:
        return None
    gens = G.generators
    orders_H = [H.element_order(h) for h in range(H.order)]
    cands = [[h for h in range(H.order) if orders_H[h] == G.element_order(g)] for g in gens]
    for images in itertools.product(*cands):
        f = {G.identity: H.identity}
        queue = deque([G.identity])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for g, img in zip(gens, images):
                y = int(G.table[x, g])
                fy = int(H.table[f[x], img])
                if y in f:
                    if f[y] != fy:
                        ok = False
                        break
                else:
                    f[y] = fy
                    queue.append(y)
        if not ok or len(f) != G.order or len(set(f.values())) != H.order:
            continue
        perm = np.array([f[x] for x in range(G.order)])
        if np.array_equal(perm[G.table], H.table[perm[:, None], perm[None, :]]):
            return perm
    return None


def build_group(spec) -> FiniteGroup:
    """Build a group from a short name (``"S3"``, ``"D4"``, ``"C4"``, ``"Q8"``,
    ``"A4"``, ``"1"``) or from a JSON-style dict with a ``kind`` key."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        s = spec.strip()
        if s in ("1", "trivial", "C1"):
            return trivial_group()
        if s == "Q8":
            return quaternion()
        m = re.fullmatch(r"([CDSA])(\d+)", s)
        if not m:
            raise ValueError(f"unknown group name {spec!r}")
        kind, n = m.group(1), int(m.group(2))
        G = {"C": cyclic, "D": dihedral, "S": symmetric, "A": alternating}[kind](n)
        G.name = s
        return G
    kind = spec["kind"]
    if kind == "cyclic":
        return cyclic(spec["n"])
    if kind == "dihedral":
        return dihedral(spec["n"])
    if kind == "quaternion":
        return quaternion()
    if kind == "symmetric":
        return symmetric(spec["n"])
    if kind == "alternating":
        return alternating(spec["n"])
    if kind == "trivial":
        return trivial_group()
    if kind == "direct":
        return direct_product(build_group(spec["left"]), build_group(spec["right"]))
    if kind == "semidirect":
        N = build_group(spec["normal"])
        if "phi" in spec:
            return semidirect_cyclic(N, spec["phi"], spec["k"])
        if spec.get("automorphism") == "inversion":
            return semidirect_cyclic(N, inversion_automorphism(N), spec.get("k", 2))
        raise ValueError("semidirect spec needs 'phi' or 'automorphism'")
    if kind == "permutations":
        return from_permutations(spec["generators"])
    raise ValueError(f"unknown group kind {kind!r}")


def lcm(a, b):
    return a * b // gcd(a, b)
