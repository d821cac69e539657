"""Acceptance gate: one PASS/FAIL line per criterion in the terminal summary."""

import time
from functools import lru_cache

import numpy as np
import pytest

import oracles
from workbench.algebras import group_algebra
from workbench.corpus import GROUPS, HOMOTOPY_ALGEBRAS, PRIMES, Cache, JobSpec, corpus_run, dumps, homotopy_algebra
from workbench.groups import build_group, cyclic
from workbench.homotopy import (
    dd_stable_identity_check,
    element_presentation,
    ext_all,
    random_presentation,
    transpose,
    transpose_sequence_check,
)
from workbench.iwasawa import (
    aug_ideal_generator_check,
    bundled_specs,
    propp_cartan_data,
    propp_radical_certificate,
    t_residue_report,
)
from workbench.ktheory import (
    build_cell,
    cartan_matrix,
    int_det,
    is_p_power,
    lattice_independence_check,
    square_check,
    swan_trials,
)
from workbench.rings import FiniteField

CELLS = [(g, p) for g in GROUPS for p in PRIMES]
_build_times = {}


@lru_cache(maxsize=None)
def cell(g, p):
    t0 = time.perf_counter()
    c = build_cell(g, p, rng=np.random.default_rng(0))
    _build_times[(g, p)] = time.perf_counter() - t0
    return c


def test_criterion_1_cartan_determinant(verdict):
    bad = []
    slowest = 0.0
    for g, p in CELLS:
        t0 = time.perf_counter()
        C = cartan_matrix(cell(g, p), rng=np.random.default_rng(0))
        elapsed = time.perf_counter() - t0 + _build_times[(g, p)]
        slowest = max(slowest, elapsed)
        det = int_det(C)
        identity = C.tolist() == np.eye(len(C), dtype=int).tolist()
        coprime = build_group(g).order % p != 0
        if not is_p_power(det, p) or identity != coprime or elapsed >= 10:
            bad.append((g, p, det, elapsed))
    ok = verdict("1 Cartan determinant |det C| = p^k, C = I iff p coprime", not bad,
                 f"{len(CELLS)} cells, slowest {slowest:.1f}s, failures {bad}")
    assert ok


def test_criterion_2_cartan_brauer_square(verdict):
    bad = []
    for g, p in CELLS:
        rep = square_check(g, p, cell=cell(g, p), rng=np.random.default_rng(0), strict=False)
        ids = rep["identities"]
        if not rep["pass"] or not ids["DtEt_eq_C"] or (rep["splitting_field"]["split"] and not ids["E_eq_Dt"]):
            bad.append((g, p))
    golden = {}
    for p in (2, 3):
        rep = square_check("S3", p, cell=cell("S3", p), rng=np.random.default_rng(0))
        oracle, _ = oracles.cartan_by_socle(build_group("S3").table.tolist(), p)
        golden[p] = (rep["C"], rep["D"], oracle.tolist())
    golden_ok = (
        golden[3][0] == [[2, 1], [1, 2]] == golden[3][2]
        and golden[3][1] == [[1, 0], [0, 1], [1, 1]]
        and golden[2][0] == [[2, 0], [0, 1]] == golden[2][2]
    )
    ok = verdict("2 Cartan-Brauer square D^T E^T = C, E = D^T when split, S3 golden values",
                 not bad and golden_ok, f"failures {bad}, golden {'ok' if golden_ok else golden}")
    assert ok


def test_criterion_3_lattice_independence(verdict):
    failures = 0
    checked = 0
    for g, p in CELLS:
        c = cell(g, p)
        for V in c.ordinary.modules:
            ok, _ = lattice_independence_check(V, c.modular, p, trials=20, rng=np.random.default_rng(0))
            checked += 1
            failures += not ok
    ok = verdict("3 decomposition map independent of the lattice (20 lattices each)", failures == 0,
                 f"{checked} (G, p, V) triples, {failures} failures")
    assert ok


def test_criterion_4_swan(verdict):
    disagreements = 0
    total = 0
    for g, p in CELLS:
        reps = swan_trials(cell(g, p), trials=50, rng=np.random.default_rng(0))
        total += len(reps)
        disagreements += sum(1 for r in reps if not r["consistent"])
    ok = verdict("4 Swan: b-classes equal iff e-classes equal", disagreements == 0,
                 f"{total} pairs, {disagreements} disagreements")
    assert ok


def test_criterion_5_iwasawa(verdict):
    t0 = time.perf_counter()
    bad = []
    for s in bundled_specs(a=8, m=32):
        t = t_residue_report(s)
        if not t["pass"] or t["radical_dim"] != 0 or t["cartan"] != np.eye(len(t["cartan"]), dtype=int).tolist():
            bad.append((s.name, "T"))
        if s.is_p_group:
            cert = propp_radical_certificate(s)
            cart = propp_cartan_data(s, cert)
            if not (cert["pass"] and cart["pass"] and cart["cartan_entry"] == s.H.order):
                bad.append((s.name, "p"))
        if s.prime_to_p and not aug_ideal_generator_check(s)["pass"]:
            bad.append((s.name, "aug"))
    elapsed = time.perf_counter() - t0
    ok = verdict("5 Iwasawa certificates at (p) and (T), augmentation generator", not bad and elapsed < 30,
                 f"{len(bundled_specs())} specs in {elapsed:.1f}s, failures {bad}")
    assert ok


def _cyclic_closed_forms():
    out = {}
    for p in (2, 3, 5):
        A = group_algebra(FiniteField(p), cyclic(p))
        pres = element_presentation(A, (A.basis_vector(1) - A.one) % p, name="k")
        E = [e.dim for e in ext_all(pres)]
        out[p] = (transpose(pres).module.dim, E, oracles.periodic_ext_trivial(p))
    return out


def test_criterion_6_homotopy(verdict):
    bad = []
    for target in HOMOTOPY_ALGEBRAS:
        A = homotopy_algebra(target, None)
        rng = np.random.default_rng(0)
        for t in range(10):
            pres = random_presentation(A, rng)
            seq = transpose_sequence_check(pres, strict=False)
            dd = dd_stable_identity_check(pres, np.random.default_rng(t))
            if not (seq["pass"] and dd["pass"]):
                bad.append((target, t))
    closed = _cyclic_closed_forms()
    closed_ok = all(dm == o["DM"] == 1 and E == [o["E0"], o["E1"], o["E2"]] for dm, E, o in closed.values())
    ok = verdict("6 transpose-sequence exactness and DD = id on random presentations; F_p[C_p]: DM = k, "
                 "Ext(k, Lambda) matches the periodic-resolution oracle",
                 not bad and closed_ok, f"{10 * len(HOMOTOPY_ALGEBRAS)} presentations, failures {bad}")
    assert ok


@pytest.mark.xfail(strict=True, reason="E^1(k) = 0 over the self-injective F_p[C_p]; the literal claim E^1(k) = k fails")
def test_criterion_6_literal_ext1_of_trivial(verdict):
    closed = _cyclic_closed_forms()
    ok = all(E[1] == 1 for _, E, _ in closed.values())
    verdict("6 (literal) E^1(k) = k over F_p[C_p]", ok,
            "computed and oracle E^1 dims: " + ", ".join(f"p={p}: {E[1]}/{o['E1']}" for p, (_, E, o) in closed.items()))
    assert ok


def test_criterion_7_determinism(verdict):
    job = JobSpec("corpus-run", None, None, 8, 32, 0)
    first = dumps(corpus_run(job, Cache(None), workers=1))
    second = dumps(corpus_run(job, Cache(None), workers=1))
    ok = verdict("7 two full corpus runs are byte-identical", first == second,
                 f"{len(first)} bytes")
    assert ok
