"""Truncated arithmetic in the Iwasawa algebra of ``G = H x| Gamma``.

An element is stored as an integer array ``c[h, i, k]`` modulo ``p^a`` holding
the coefficient of ``T^k h gamma^i`` with ``0 <= i < N = p^n`` and ``k < m``.
Multiplication uses ``gamma h = phi(h) gamma`` and ``gamma^N = 1 + T``, with
``T`` central.  Everything is exact modulo ``(p^a, T^m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebras import CrossedProductData, FDAlgebra, check_cocycle, crossed_product, group_algebra
from .errors import (
    CertificateMissing,
    ContextMismatch,
    InsufficientPrecision,
    MembershipFailure,
    NotAnAutomorphism,
    NotPGroup,
    PDividesH,
)
from .groups import FiniteGroup, build_group, cyclic, semidirect
from .linalg import rank, row_basis, solve_local
from .radical import radical
from .rings import QQ, FiniteField, PrimeSpec, SeriesRing, ZmodPk, is_pth_power


def _p_exponent(k: int, p: int):
    n = 0
    while k % p == 0 and k > 1:
        k //= p
        n += 1
    return n if k == 1 else None


@dataclass(frozen=True, eq=False)
class OneDimGroupSpec:
    """``G = H x| Z_p`` with the topological generator acting through ``phi``.

    ``n`` defaults to the least exponent with ``phi^(p^n) = id``; a larger
    value may be passed to work with a smaller central subgroup.
    """

    p: int
    H: FiniteGroup
    phi: tuple
    a: int = 8
    m: int = 32
    n: int | None = None
    name: str = ""
    _n: int = field(init=False, repr=False)

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=np.int64)
        if not self.H.is_automorphism(phi):
            raise NotAnAutomorphism("phi is not an automorphism of H")
        order = self.H.automorphism_order(phi)
        least = _p_exponent(order, self.p)
        if least is None:
            raise NotAnAutomorphism(f"phi has order {order}, not a power of {self.p}")
        n = least if self.n is None else int(self.n)
        if n < least:
            raise NotAnAutomorphism(f"phi^({self.p}^{n}) is not the identity")
        if self.m < 2:
            raise InsufficientPrecision("need m >= 2 to see T")
        object.__setattr__(self, "phi", tuple(int(x) for x in phi))
        object.__setattr__(self, "_n", n)

    @property
    def exponent(self) -> int:
        return self._n

    @property
    def N(self) -> int:
        return self.p**self._n

    @property
    def modulus(self) -> int:
        return self.p**self.a

    @property
    def shape(self):
        return (self.H.order, self.N, self.m)

    def phi_power(self, i: int) -> np.ndarray:
        perm = np.arange(self.H.order)
        phi = np.asarray(self.phi)
        for _ in range(i % self.N):
            perm = phi[perm]
        return perm

    def finite_quotient(self) -> FiniteGroup:
        """``H x| C_N``; element ``h gamma^i`` has index ``h * N + i``."""
        C = cyclic(self.N)
        action = [self.phi_power(i) for i in range(self.N)]
        G = semidirect(self.H, C, action)
        return G

    def key(self):
        return (self.p, self.H.name, self.H.table.tobytes(), self.phi, self.a, self.m, self._n)

    def describe(self) -> dict:
        return {"p": self.p, "H": self.H.name, "phi": list(self.phi), "n": self._n, "a": self.a, "m": self.m}

    @property
    def is_p_group(self) -> bool:
        return self.H.is_p_group(self.p)

    @property
    def prime_to_p(self) -> bool:
        return self.H.order % self.p != 0


# ---------------------------------------------------------------------------
# truncated series over Z/p^a as int arrays


def _conv(x, y, m, mod):
    """Truncated product of series along the last axis, broadcasting the rest."""
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
    for k in range(m):
        xk = x[..., k : k + 1]
        if not xk.any():
            continue
        out[..., k:] = (out[..., k:] + xk * y[..., : m - k]) % mod
    return out


def _one_plus_t_inverse(m, mod):
    return np.array([(-1) ** k % mod for k in range(m)], dtype=np.int64)


def _substitute(c, s, m, mod):
    """``c(s(T))`` for ``s`` with zero constant term, along the last axis."""
    out = np.zeros_like(c)
    for k in range(m - 1, -1, -1):
        out = _conv(out, np.broadcast_to(s, out.shape), m, mod)
        out[..., 0] = (out[..., 0] + c[..., k]) % mod
    return out


# ---------------------------------------------------------------------------


class IwasawaElement:
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: OneDimGroupSpec, coeffs):
        c = np.asarray(coeffs, dtype=np.int64) % spec.modulus
        if c.shape != spec.shape:
            raise ContextMismatch(f"coefficients of shape {c.shape}, expected {spec.shape}")
        self.spec = spec
        self.coeffs = c

    @classmethod
    def zero(cls, spec):
        return cls(spec, np.zeros(spec.shape, dtype=np.int64))

    @classmethod
    def basis(cls, spec, h: int = None, i: int = 0, k: int = 0, c: int = 1):
        x = np.zeros(spec.shape, dtype=np.int64)
        x[spec.H.identity if h is None else h, i % spec.N, k] = c
        return cls(spec, x)

    @classmethod
    def one(cls, spec):
        return cls.basis(spec)

    @classmethod
    def gamma(cls, spec):
        if spec.N == 1:
            return cls(spec, _gamma_power_coeffs(spec, 1))
        return cls.basis(spec, i=1)

    @classmethod
    def random(cls, spec, rng):
        return cls(spec, rng.integers(0, spec.modulus, spec.shape))

    def _check(self, other):
        if not isinstance(other, IwasawaElement) or other.spec is not self.spec:
            raise ContextMismatch("elements belong to different specs or truncations")

    def __add__(self, other):
        self._check(other)
        return IwasawaElement(self.spec, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return IwasawaElement(self.spec, self.coeffs - other.coeffs)

    def __neg__(self):
        return IwasawaElement(self.spec, -self.coeffs)

    def scale(self, c: int):
        return IwasawaElement(self.spec, self.coeffs * (int(c) % self.spec.modulus))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return lambda_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, IwasawaElement) and other.spec is self.spec and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def __repr__(self):
        nz = np.argwhere(self.coeffs)
        terms = [f"{self.coeffs[tuple(t)]}*T^{t[2]}*{self.spec.H.labels[t[0]]}*gamma^{t[1]}" for t in nz[:6]]
        more = " + ..." if len(nz) > 6 else ""
        return "IwasawaElement(" + (" + ".join(terms) or "0") + more + ")"


def _gamma_power_coeffs(spec, e):
    """Coefficients of ``gamma^e`` for ``e >= 0``."""
    q, r = divmod(e, spec.N)
    c = np.zeros(spec.shape, dtype=np.int64)
    c[spec.H.identity, r] = _binomial_series(q, spec.m, spec.modulus)
    return c


def _binomial_series(q, m, mod):
    """``(1 + T)^q`` truncated."""
    out = np.zeros(m, dtype=np.int64)
    b = 1
    for k in range(min(q, m - 1) + 1):
        out[k] = b % mod
        b = b * (q - k) // (k + 1)
    return out


def _product_table(spec):
    """Target ``(h'', i'')`` and carry for each pair of basis monomials."""
    H, N = spec.H, spec.N
    nh = H.order
    target_h = np.empty((nh, N, nh, N), dtype=np.int64)
    target_i = np.empty((nh, N, nh, N), dtype=np.int64)
    carry = np.empty((nh, N, nh, N), dtype=bool)
    for i in range(N):
        pi = spec.phi_power(i)
        for j in range(N):
            target_h[:, i, :, j] = H.table[:, pi]
            target_i[:, i, :, j] = (i + j) % N
            carry[:, i, :, j] = i + j >= N
    return target_h, target_i, carry


_TABLES: dict = {}


def lambda_mul(x: IwasawaElement, y: IwasawaElement) -> IwasawaElement:
    """Product in the truncated Iwasawa algebra."""
    x._check(y)
    spec = x.spec
    key = id(spec)
    if key not in _TABLES or _TABLES[key][0] is not spec:
        _TABLES[key] = (spec, _product_table(spec))
    th, ti, carry = _TABLES[key][1]
    nh, N, m = spec.shape
    mod = spec.modulus
    X = x.coeffs.reshape(nh * N, m)
    Y = y.coeffs.reshape(nh * N, m)
    rows = np.nonzero(X.any(axis=1))[0]
    cols = np.nonzero(Y.any(axis=1))[0]
    out = np.zeros(spec.shape, dtype=np.int64)
    if len(rows) == 0 or len(cols) == 0:
        return IwasawaElement(spec, out)
    P = _conv(X[rows][:, None, :], Y[cols][None, :, :], m, mod)  # (r, c, m)
    a_h, a_i = np.divmod(rows, N)
    b_h, b_i = np.divmod(cols, N)
    TH = th[a_h[:, None], a_i[:, None], b_h[None, :], b_i[None, :]]
    TI = ti[a_h[:, None], a_i[:, None], b_h[None, :], b_i[None, :]]
    CR = carry[a_h[:, None], a_i[:, None], b_h[None, :], b_i[None, :]]
    shifted = P.copy()
    shifted[..., 1:] += P[..., :-1]  # times (1 + T)
    P = np.where(CR[..., None], shifted % mod, P)
    np.add.at(out, (TH.reshape(-1), TI.reshape(-1)), P.reshape(-1, m))
    return IwasawaElement(spec, out)


def sharp(x: IwasawaElement) -> IwasawaElement:
    """The anti-involution sending each group element to its inverse.

    ``T -> (1+T)^-1 - 1`` and ``gamma^-i = gamma^(N-i) (1+T)^-1``.
    """
    spec = x.spec
    nh, N, m = spec.shape
    mod = spec.modulus
    inv = _one_plus_t_inverse(m, mod)
    s = inv.copy()
    s[0] = (s[0] - 1) % mod
    sub = _substitute(x.coeffs, s, m, mod)  # c(T^sharp) at each (h, i)
    out = np.zeros(spec.shape, dtype=np.int64)
    Hinv = spec.H.inverse
    for i in range(N):
        # (h gamma^i)^sharp = gamma^-i h^-1 = phi^-i(h^-1) gamma^-i
        j = (-i) % N
        back = spec.phi_power(j)
        series = sub[:, i, :]
        if i:
            series = _conv(series, inv[None, :], m, mod)
        np.add.at(out[:, j, :], back[Hinv], series)
    return IwasawaElement(spec, out % mod)


def augmentation(x: IwasawaElement) -> int:
    """Image under ``h -> 1, gamma -> 1, T -> 0`` in ``Z/p^a``."""
    return int(x.coeffs[:, :, 0].sum() % x.spec.modulus)


def in_augmentation_kernel(x: IwasawaElement) -> bool:
    return augmentation(x) == 0


# ---------------------------------------------------------------------------
# residue algebras


@dataclass
class ResidueAlgebra:
    spec: OneDimGroupSpec
    prime: PrimeSpec
    algebra: FDAlgebra

    @property
    def dim(self):
        return self.algebra.dim


def residue_algebra(spec: OneDimGroupSpec, prime: PrimeSpec) -> ResidueAlgebra:
    """``Q[H x| C_N]`` at ``(T)``; at ``(p)`` the crossed product of the finite
    quotient over truncated ``F_p((T))`` with ``u_gamma^N = 1 + T``."""
    prime = PrimeSpec(prime)
    G = spec.finite_quotient()
    if prime is PrimeSpec.T:
        return ResidueAlgebra(spec, prime, group_algebra(QQ, G))
    R = SeriesRing(FiniteField(spec.p), spec.m, laurent=True)
    N = spec.N
    carry = R.add(R.one, R.T)
    cocycle = {}
    for g in range(G.order):
        for h in range(G.order):
            if g % N + h % N >= N:
                cocycle[(g, h)] = carry
    data = CrossedProductData(R, G, None, cocycle)
    check_cocycle(data)
    A = crossed_product(data)
    return ResidueAlgebra(spec, prime, A)


def _basis_index(spec, h, i):
    return h * spec.N + i


def delta_h_ideal(res: ResidueAlgebra):
    """Row basis of the two-sided ideal generated by ``h - 1``, ``h`` in ``H``."""
    spec, A = res.spec, res.algebra
    R = A.ring
    gens = []
    e = _basis_index(spec, spec.H.identity, 0)
    for h in range(spec.H.order):
        if h == spec.H.identity:
            continue
        v = R.zeros(A.dim)
        v[_basis_index(spec, h, 0)] = R.one
        v[e] = R.neg(R.one)
        gens.append(v)
    if not gens:
        return R.zeros((0, A.dim))
    gens = np.stack(gens)
    left = A.mul_many(R.eye(A.dim), gens).reshape(-1, A.dim)
    return row_basis(left, R)


def propp_radical_certificate(spec: OneDimGroupSpec) -> dict:
    """Certify ``rad = Delta(H)`` in the residue algebra at ``(p)``.

    Checks that the ideal is two-sided and nilpotent, that the quotient is
    commutative of dimension ``N`` generated by the image ``x`` of ``u_gamma``
    with ``x^N = 1 + T``, and that ``1 + T`` is not a ``p``-th power.
    """
    if not spec.is_p_group:
        raise NotPGroup(f"{spec.H.name} is not a {spec.p}-group")
    res = residue_algebra(spec, PrimeSpec.P)
    A = res.algebra
    R = A.ring
    V = delta_h_ideal(res)
    two_sided = bool(A.is_two_sided_ideal(V)) if len(V) else True
    powers = [V]
    while len(powers[-1]):
        powers.append(A.span_products(powers[-1], V))
        if len(powers) > A.dim + 1:
            raise CertificateMissing("Delta(H) is not nilpotent")
    index = len(powers)
    Q, project, _ = A.quotient(V)
    x = project(A.basis_vector(_basis_index(spec, spec.H.identity, 1 % spec.N)))
    if spec.N == 1:
        x = R.mul(Q.one, R.add(R.one, R.T))
    pows = [Q.one]
    for _ in range(spec.N):
        pows.append(Q.mul(pows[-1], x))
    generated = rank(np.stack(pows[: spec.N]), R) == Q.dim
    c = R.add(R.one, R.T)
    relation = bool(np.all(pows[spec.N] == R.mul(Q.one, c))) if spec.N > 1 else True
    not_pth = not is_pth_power(c)
    cert = radical(A, candidate=V if len(V) else R.zeros((0, A.dim)))
    ok = two_sided and Q.dim == spec.N and Q.is_commutative() and generated and relation and not_pth
    ok = ok and cert.dim == len(V)
    return {
        "spec": spec.describe(),
        "residue_dim": A.dim,
        "delta_dim": len(V),
        "two_sided": two_sided,
        "nilpotency_index": index,
        "layer_dims": [len(P) - len(Pn) for P, Pn in zip(powers, powers[1:])],
        "quotient_dim": Q.dim,
        "quotient_commutative": bool(Q.is_commutative()),
        "generated_by_gamma": bool(generated),
        "x_pow_N_is_1_plus_T": relation,
        "one_plus_T_not_pth_power": not_pth,
        "pass": bool(ok),
    }


def propp_cartan_data(spec: OneDimGroupSpec, certificate: dict | None = None) -> dict:
    """``(s, cartan_entry, cokernel_index)`` for a certified ``p``-group spec."""
    cert = certificate if certificate is not None else propp_radical_certificate(spec)
    if not cert["pass"]:
        raise CertificateMissing("radical certificate did not pass")
    simple_dim = cert["quotient_dim"]
    by_dimension = cert["residue_dim"] // simple_dim
    # each layer Delta^k / Delta^(k+1) is a vector space over the quotient field
    layers = [simple_dim] + cert["layer_dims"]
    if any(d % simple_dim for d in layers):
        raise CertificateMissing("filtration layer is not a multiple of the simple dimension")
    by_filtration = sum(d // simple_dim for d in layers)
    if by_dimension != by_filtration:
        raise CertificateMissing("dimension ratio and filtration length disagree")
    entry = by_dimension
    return {
        "spec": spec.describe(),
        "s": 1,
        "cartan": [[entry]],
        "cartan_entry": entry,
        "filtration_length": by_filtration,
        "injective": entry != 0,
        "cokernel_index": entry,
        "pass": entry == spec.H.order and entry != 0,
    }


def t_residue_report(spec: OneDimGroupSpec) -> dict:
    """At ``(T)`` the residue algebra is a rational group algebra: radical 0, Cartan = I."""
    res = residue_algebra(spec, PrimeSpec.T)
    A = res.algebra
    rad = radical(A)
    from .idempotents import central_idempotents

    blocks = central_idempotents(A)
    s = len(blocks)
    cartan = np.eye(s, dtype=np.int64).tolist()
    return {
        "spec": spec.describe(),
        "dim": A.dim,
        "radical_dim": rad.dim,
        "blocks": s,
        "cartan": cartan,
        "pass": rad.dim == 0,
    }


# ---------------------------------------------------------------------------
# augmentation ideal


def e_h(spec: OneDimGroupSpec) -> IwasawaElement:
    if not spec.prime_to_p:
        raise PDividesH(f"{spec.p} divides |H| = {spec.H.order}")
    inv = pow(spec.H.order, -1, spec.modulus)
    c = np.zeros(spec.shape, dtype=np.int64)
    c[:, 0, 0] = inv
    return IwasawaElement(spec, c)


def augmentation_generator(spec: OneDimGroupSpec) -> IwasawaElement:
    """``w = (1 - gamma) e_H + (1 - e_H)``."""
    one = IwasawaElement.one(spec)
    e = e_h(spec)
    g = IwasawaElement.gamma(spec)
    return (one - g) * e + (one - e)


def left_ideal_matrix(w: IwasawaElement) -> np.ndarray:
    """Columns ``b w`` for every monomial ``b = T^k h gamma^i``."""
    spec = w.spec
    nh, N, m = spec.shape
    cols = []
    for h in range(nh):
        for i in range(N):
            base = lambda_mul(IwasawaElement.basis(spec, h, i), w)
            for k in range(m):
                c = np.zeros_like(base.coeffs)
                c[..., k:] = base.coeffs[..., : m - k]
                cols.append(c.reshape(-1))
    return np.stack(cols, axis=1) % spec.modulus


def aug_ideal_generator_check(spec: OneDimGroupSpec) -> dict:
    """Check that ``w`` generates the augmentation ideal at the working truncation.

    ``h - 1 = (h - 1) w`` and ``gamma - 1 = (-e_H + (gamma - 1)(1 - e_H)) w``
    are verified as explicit witnesses, and membership of each generator in the
    left ideal ``Lambda w`` is also decided by a linear solve over ``Z/p^a``.
    """
    w = augmentation_generator(spec)
    one = IwasawaElement.one(spec)
    e = e_h(spec)
    g = IwasawaElement.gamma(spec)
    ring = ZmodPk(spec.p, spec.a)
    M = left_ideal_matrix(w)
    targets, witnesses = [], []
    for h in range(spec.H.order):
        if h == spec.H.identity:
            continue
        t = IwasawaElement.basis(spec, h) - one
        targets.append((spec.H.labels[h], t))
        witnesses.append(t)
    targets.append(("gamma", g - one))
    witnesses.append((one - e) * (g - one) - e)
    explicit = []
    for (label, t), c in zip(targets, witnesses):
        explicit.append(lambda_mul(c, w) == t)
    rhs = np.stack([t.flat() for _, t in targets], axis=1)
    sol = solve_local(M, rhs, ring)
    solved = sol is not None and np.array_equal(ring.matmul(M, sol), rhs % spec.modulus)
    if not (all(explicit) and solved):
        bad = [label for (label, _), ok in zip(targets, explicit) if not ok]
        raise MembershipFailure(f"augmentation ideal generators outside (w): explicit failures {bad}, solve={solved}")
    return {
        "spec": spec.describe(),
        "augmentation_w": augmentation(w),
        "generators": [label for label, _ in targets],
        "explicit_witnesses": [bool(x) for x in explicit],
        "membership_solve": bool(solved),
        "pass": augmentation(w) == 0,
    }


# ---------------------------------------------------------------------------
# bundled specs


def _spec(p, group, phi, n=None, name="", a=8, m=32):
    H = build_group(group)
    if phi == "id":
        perm = np.arange(H.order)
    elif phi == "inv":
        perm = H.inverse.copy()
    elif isinstance(phi, tuple) and phi[0] == "conj":
        perm = H.conjugation(H.labels.index(phi[1]) if isinstance(phi[1], str) else phi[1])
    else:
        perm = np.asarray(phi)
    return OneDimGroupSpec(p, H, tuple(int(v) for v in perm), a=a, m=m, n=n, name=name)


def bundled_specs(a: int = 8, m: int = 32) -> list[OneDimGroupSpec]:
    return [
        _spec(2, "1", "id", n=1, name="trivial-p2-n1", a=a, m=m),
        _spec(2, "C2", "id", name="C2-p2", a=a, m=m),
        _spec(2, "C4", "inv", name="C4-inv-p2", a=a, m=m),
        _spec(2, "Q8", ("conj", 2), name="Q8-conj-p2", a=a, m=m),
        _spec(3, "1", "id", name="trivial-p3", a=a, m=m),
        _spec(3, "C2", "id", name="C2-p3", a=a, m=m),
        _spec(2, "C3", "inv", name="C3-inv-p2", a=a, m=m),
        _spec(2, "S3", ("conj", 1), name="S3-conj-p2", a=a, m=m),
    ]


def spec_from_json(data: dict) -> OneDimGroupSpec:
    prec = data.get("precision", {})
    H = build_group(data["H"])
    phi = data.get("phi", "id")
    if phi == "id":
        phi = list(range(H.order))
    elif phi == "inv":
        phi = H.inverse.tolist()
    return OneDimGroupSpec(int(data["p"]), H, tuple(phi), a=int(prec.get("a", 8)), m=int(prec.get("m", 32)), n=data.get("n"))


def iwasawa_report(spec: OneDimGroupSpec) -> dict:
    """Every applicable certificate for one spec."""
    out = {"name": spec.name, "spec": spec.describe()}
    out["T_residue"] = t_residue_report(spec)
    if spec.is_p_group:
        cert = propp_radical_certificate(spec)
        out["p_radical"] = cert
        out["p_cartan"] = propp_cartan_data(spec, cert)
    if spec.prime_to_p:
        out["augmentation_ideal"] = aug_ideal_generator_check(spec)
    if not spec.is_p_group and not spec.prime_to_p:
        out["p_status"] = "unsupported-mixed"
    parts = [v["pass"] for v in out.values() if isinstance(v, dict) and "pass" in v]
    out["pass"] = all(parts)
    return out
