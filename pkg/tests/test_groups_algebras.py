import itertools

import numpy as np
import pytest

from workbench.algebras import (
    CrossedProductData,
    augmentation_ideal,
    crossed_product,
    group_algebra,
)
from workbench.errors import CocycleViolation, NotAnAutomorphism, RadicalAlgorithmUnavailable, UnsupportedOrder
from workbench.groups import build_group, cyclic, dihedral, find_isomorphism, quaternion, symmetric
from workbench.idempotents import check_idempotent_system, lift_idempotents
from workbench.linalg import rank
from workbench.radical import radical
from workbench.rings import QQ, FiniteField, SeriesRing, ZmodPk

GROUP_NAMES = ["1", "C2", "C3", "C4", "C5", "S3", "D4", "Q8", "A4", "D6", "S4"]


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_group_axioms(name):
    assert build_group(name).check_axioms()


def test_small_groups():
    C3 = cyclic(3)
    assert C3.table.tolist() == [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
    S3 = symmetric(3)
    assert S3.order == 6
    assert sum(1 for g in range(6) if g != S3.identity and S3.element_order(g) == 2) == 3


def test_semidirect_inversion_is_dihedral():
    G = build_group({"kind": "semidirect", "normal": "C4", "automorphism": "inversion"})
    assert G.order == 8 and G.check_axioms()
    assert find_isomorphism(G, dihedral(4)) is not None
    assert find_isomorphism(G, quaternion()) is None


def test_bad_automorphism():
    with pytest.raises(NotAnAutomorphism):
        build_group({"kind": "semidirect", "normal": "C4", "phi": [0, 2, 1, 3], "k": 2})


def test_order_cap():
    with pytest.raises(UnsupportedOrder):
        cyclic(65)


def test_group_algebra_small():
    F = FiniteField(2)
    A = group_algebra(F, cyclic(2))
    g = A.basis_vector(1)
    assert A.dim == 2 and np.array_equal(A.mul(g, g), A.one)
    assert group_algebra(FiniteField(3), symmetric(3)).dim == 6


def test_q8_center_dimension():
    A = group_algebra(QQ, quaternion())
    assert A.dim == 8 and len(A.center()) == 5


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_group_algebras_associative(name):
    assert group_algebra(FiniteField(3), build_group(name)).check_associative()


def test_crossed_product_trivial_matches_group_algebra():
    F = FiniteField(3)
    G = symmetric(3)
    B = crossed_product(CrossedProductData(F, G))
    A = group_algebra(F, G)
    assert np.array_equal(A.consts, B.consts)


def test_crossed_product_frobenius():
    F4 = FiniteField(2, 2)
    A = crossed_product(CrossedProductData(F4, cyclic(2), action={1: 1}))
    # over the prime field: F_4 * C_2 with Frobenius is M_2(F_2)
    assert A.dim == 4 and A.check_associative() and A.check_unity()
    assert len(A.center()) == 1
    assert radical(A).dim == 0 and not A.is_commutative()


def test_crossed_product_laurent_cocycle():
    L = SeriesRing(FiniteField(2), 8, laurent=True)
    one_plus_t = L.one + L.T
    A = crossed_product(CrossedProductData(L, cyclic(2), cocycle={(1, 1): one_plus_t}))
    u = A.basis_vector(1)
    sq = A.mul(u, u)
    assert sq[0] == one_plus_t and sq[1] == L.zero


def test_cocycle_violation():
    F = FiniteField(3)
    with pytest.raises(CocycleViolation):
        crossed_product(CrossedProductData(F, cyclic(3), cocycle={(1, 1): 2}))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_radical_cyclic_p(p):
    F = FiniteField(p)
    A = group_algebra(F, cyclic(p))
    rad = radical(A, verify=True)
    assert rad.dim == p - 1 and rad.index == p
    aug = augmentation_ideal(A)
    assert rank(np.concatenate([rad.basis, aug]), F) == p - 1


def _nilpotent(mats, d, p):
    P = mats.copy()
    for _ in range(d):
        P = np.einsum("nij,njk->nik", P, mats) % p
    return ~P.reshape(len(P), -1).any(axis=1)


def _brute_force_radical_dim(A):
    """Largest nilpotent ideal by enumeration: ``x`` is in it iff ``a x`` is
    nilpotent for every ``a``."""
    F, d = A.ring, A.dim
    p = F.p
    elems = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64)
    L = np.stack(A.left_matrices())
    count = 0
    members = []
    for x in elems:
        prods = np.stack([A.mul(a, x) for a in elems])
        mats = np.einsum("nk,kij->nij", prods, L) % p
        if _nilpotent(mats, d, p).all():
            members.append(x)
            count += 1
    return rank(np.array(members), F) if members else 0, count


@pytest.mark.parametrize("group,p,expected", [("S3", 2, 1), ("C4", 2, 3), ("C3", 2, 0)])
def test_radical_brute_force_oracle(group, p, expected):
    A = group_algebra(FiniteField(p), build_group(group))
    dim, count = _brute_force_radical_dim(A)
    assert dim == expected and count == p**expected
    assert radical(A).dim == expected


@pytest.mark.parametrize("group,p,dim", [("S3", 3, 4), ("A4", 2, 9), ("A4", 3, 2), ("D6", 3, 8), ("D4", 2, 7), ("Q8", 2, 7)])
def test_radical_quotient_semisimple(group, p, dim):
    A = group_algebra(FiniteField(p), build_group(group))
    rad = radical(A, verify=True)
    assert rad.dim == dim


@pytest.mark.parametrize("group", ["C5", "S3", "Q8"])
def test_maschke(group):
    for F in (QQ, FiniteField(7)):
        assert radical(group_algebra(F, build_group(group))).dim == 0


def test_radical_over_laurent_needs_candidate():
    L = SeriesRing(FiniteField(2), 8, laurent=True)
    A = crossed_product(CrossedProductData(L, cyclic(2), cocycle={(1, 1): L.one + L.T}))
    with pytest.raises(RadicalAlgorithmUnavailable):
        radical(A)
    assert radical(A, candidate=L.zeros((0, 2))).dim == 0


def test_radical_over_fq_extension():
    A = group_algebra(FiniteField(2, 2), build_group("S3"))
    assert radical(A, verify=True).dim == 1


def test_lift_local_algebra():
    es = lift_idempotents(group_algebra(ZmodPk(2, 8), cyclic(2)))
    assert len(es) == 1 and es[0].tolist() == [1, 0]


def test_lift_c2_odd():
    R = ZmodPk(3, 8)
    A = group_algebra(R, cyclic(2))
    es = lift_idempotents(A)
    half = R.inv_scalar(2)
    expected = sorted([[half, half], [half, (-half) % R.modulus]])
    assert sorted(e.tolist() for e in es) == expected
    assert check_idempotent_system(A, es)


def test_lift_s3_at_2():
    R = ZmodPk(2, 8)
    A = group_algebra(R, symmetric(3))
    es = lift_idempotents(A)
    assert len(es) == 3 and check_idempotent_system(A, es)
    F = FiniteField(2)
    ranks = sorted(rank(np.stack([A.mul(A.basis_vector(i), e) % 2 for i in range(6)]), F) for e in es)
    assert ranks == [2, 2, 2]


@pytest.mark.parametrize("group,p", [("A4", 2), ("A4", 3), ("D4", 2), ("S3", 3), ("Q8", 3)])
def test_lifts_reduce_to_idempotents(group, p):
    A = group_algebra(ZmodPk(p, 8), build_group(group))
    es = lift_idempotents(A)
    assert check_idempotent_system(A, es)
    Abar = group_algebra(FiniteField(p), build_group(group))
    total = np.zeros(A.dim, dtype=np.int64)
    for e in es:
        eb = e % p
        assert np.array_equal(Abar.mul(eb, eb), eb)
        total = (total + eb) % p
    assert np.array_equal(total, Abar.one)
