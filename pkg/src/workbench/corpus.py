"""Jobs, reports, the bundled corpus and the on-disk report cache."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import Inconclusive, WorkbenchError

SCHEMA = "v1"
COMMANDS = ("cartan", "decomp", "square-check", "swan-check", "iwasawa-certify", "homotopy-check", "corpus-run")
GROUPS = ("C2", "C3", "C4", "C5", "S3", "D4", "Q8", "A4", "D6")
PRIMES = (2, 3)
CELL_CHECKS = ("cartan", "square-check", "decomp", "swan-check")
HOMOTOPY_ALGEBRAS = ("C2:2", "C3:3", "C4:2", "S3:2", "S3:3", "sqzero:2")

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class JobSpec:
    command: str
    target: str | None = None
    p: int | None = None
    a: int = 8
    m: int = 32
    seed: int = 0
    trials: int | None = None
    filter: str = ""

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.a < 1 or self.m < 1:
            raise UsageError("precision a, m must be >= 1")
        if self.trials is not None and self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.p is not None and not _is_prime(self.p):
            raise UsageError(f"p = {self.p} is not prime")
        if self.command in ("cartan", "decomp", "square-check", "swan-check"):
            if self.target is None or self.p is None:
                raise UsageError(f"{self.command} needs --group and --p")
            from .groups import build_group

            try:
                build_group(self.target)
            except (ValueError, WorkbenchError) as exc:
                raise UsageError(str(exc)) from None
        if self.command in ("iwasawa-certify", "homotopy-check") and self.target is None:
            raise UsageError(f"{self.command} needs --group")
        return self

    def canonical(self) -> dict:
        return asdict(self)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def dumps(obj) -> str:
    """Canonical serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": "), default=_default) + "\n"


def _default(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def versions() -> dict:
    import sympy

    return {"workbench": __version__, "numpy": np.__version__, "sympy": sympy.__version__}


def make_report(job: JobSpec, status: str, payload) -> dict:
    return {"schema": SCHEMA, "job": job.canonical(), "status": status, "payload": payload, "versions": versions()}


# ---------------------------------------------------------------------------
# runners


def _rng(job: JobSpec):
    return np.random.default_rng(job.seed)


def _cell(job):
    from .ktheory import build_cell

    return build_cell(job.target, job.p, job.a, _rng(job))


def run_cartan(job):
    from .ktheory import cartan_matrix, int_det, is_p_power

    cell = _cell(job)
    C = cartan_matrix(cell, rng=_rng(job))
    det = int_det(C)
    coprime = cell.group.order % job.p != 0
    ident = C.tolist() == np.eye(len(C), dtype=int).tolist()
    ok = is_p_power(det, job.p) and (ident or not coprime)
    payload = {
        "group": cell.group.name,
        "simples": dict(zip(cell.modular.labels, cell.modular.dims)),
        "pim_dims": dict(zip(cell.pims.labels, cell.pims.dims)),
        "C": C.tolist(),
        "detC": det,
        "detC_is_p_power": is_p_power(det, job.p),
        "p_coprime": coprime,
        "C_is_identity": ident,
    }
    return ("pass" if ok else "fail"), payload


def run_decomp(job):
    from .ktheory import decomposition_matrix, lattice_independence_check

    cell = _cell(job)
    rng = _rng(job)
    D = decomposition_matrix(cell, rng)
    trials = job.trials or 20
    rows = []
    for lab, V in zip(cell.ordinary.labels, cell.ordinary.modules):
        ok, classes = lattice_independence_check(V, cell.modular, job.p, trials, rng)
        rows.append({"ordinary": lab, "dim": V.dim, "vector": list(classes[0].vector), "trials": trials, "identical": ok})
    ok = all(r["identical"] for r in rows)
    payload = {"group": cell.group.name, "D": D.tolist(), "modular": cell.modular.labels, "lattices": rows}
    return ("pass" if ok else "fail"), payload


def run_square(job):
    from .ktheory import square_check

    rep = square_check(job.target, job.p, job.a, _rng(job), strict=False)
    return ("pass" if rep["pass"] else "fail"), rep


def run_swan(job):
    from .ktheory import swan_trials

    cell = _cell(job)
    trials = job.trials or 50
    reps = swan_trials(cell, trials, _rng(job))
    agree = sum(r["consistent"] for r in reps)
    payload = {
        "group": cell.group.name,
        "trials": trials,
        "consistent": agree,
        "isomorphic_pairs": sum(r["isomorphic"] for r in reps),
        "representation": reps[0]["representation"] if reps else None,
        "pairs": [{"words": r["words"], "b": r["b"], "e": r["e"], "consistent": r["consistent"]} for r in reps],
    }
    return ("pass" if agree == trials else "fail"), payload


def iwasawa_spec_for(target: str, p: int | None, a: int, m: int):
    """A bundled spec by name, or ``H[:phi]`` with ``phi`` in ``id``, ``inv``, ``conj=<element index>``."""
    from .iwasawa import _spec, bundled_specs

    for s in bundled_specs(a, m):
        if s.name == target and (p is None or s.p == p):
            return s
    if p is None:
        raise UsageError("iwasawa-certify with a custom H needs --p")
    group, _, phi = target.partition(":")
    phi = phi or "id"
    if phi.startswith("conj="):
        phi = ("conj", int(phi.split("=", 1)[1]))
    elif phi not in ("id", "inv"):
        raise UsageError(f"unknown automorphism {phi!r}")
    return _spec(p, group, phi, name=target, a=a, m=m)


def run_iwasawa(job):
    from .iwasawa import iwasawa_report

    spec = iwasawa_spec_for(job.target, job.p, job.a, job.m)
    rep = iwasawa_report(spec)
    if rep.get("p_status") == "unsupported-mixed":
        return ("unsupported-mixed" if rep["pass"] else "fail"), rep
    return ("pass" if rep["pass"] else "fail"), rep


def homotopy_algebra(target: str, p: int | None):
    from .algebras import group_algebra
    from .groups import build_group
    from .homotopy import square_zero_algebra
    from .rings import FiniteField

    name, _, pp = target.partition(":")
    p = int(pp) if pp else p
    if p is None:
        raise UsageError("homotopy-check needs a prime (--p or GROUP:P)")
    F = FiniteField(p)
    if name == "sqzero":
        return square_zero_algebra(F)
    return group_algebra(F, build_group(name))


def run_homotopy(job):
    from .homotopy import dd_stable_identity_check, random_presentation, transpose_sequence_check

    A = homotopy_algebra(job.target, job.p)
    rng = _rng(job)
    trials = job.trials or 10
    rows = []
    for _ in range(trials):
        P = random_presentation(A, rng)
        seq = transpose_sequence_check(P, strict=False)
        dd = dd_stable_identity_check(P, rng)
        rows.append({"r": P.r, "s": P.s, "sequence": seq["dims"], "sequence_ok": seq["pass"], "dd": dd["dims"], "dd_ok": dd["pass"]})
    ok = all(r["sequence_ok"] and r["dd_ok"] for r in rows)
    return ("pass" if ok else "fail"), {"algebra": A.name, "trials": trials, "presentations": rows}


RUNNERS = {
    "cartan": run_cartan,
    "decomp": run_decomp,
    "square-check": run_square,
    "swan-check": run_swan,
    "iwasawa-certify": run_iwasawa,
    "homotopy-check": run_homotopy,
}


# ---------------------------------------------------------------------------
# cache


def code_version() -> str:
    """Hash of the package sources, so edits invalidate cached reports."""
    h = hashlib.sha256()
    for path in sorted(Path(__file__).parent.glob("*.py")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:16]


@dataclass
class Cache:
    directory: Path | None
    hits: int = 0
    misses: int = 0
    _version: str = field(default_factory=code_version)

    @classmethod
    def resolve(cls, cli_dir=None, disabled=False):
        if disabled:
            return cls(None)
        env = os.environ.get("WORKBENCH_CACHE")
        d = env or cli_dir
        return cls(Path(d) if d else None)

    def key(self, job: JobSpec) -> str:
        blob = json.dumps({"job": job.canonical(), "code": self._version}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, job):
        if self.directory is None:
            return None
        path = self.directory / f"{self.key(job)}.json"
        if path.exists():
            self.hits += 1
            return json.loads(path.read_text())
        self.misses += 1
        return None

    def put(self, job, report):
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / f"{self.key(job)}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(dumps(report))
        tmp.replace(path)


def run_job(job: JobSpec, cache: Cache | None = None) -> dict:
    job.validate()
    if job.command == "corpus-run":
        return corpus_run(job, cache)
    cache = cache if cache is not None else Cache(None)
    hit = cache.get(job)
    if hit is not None:
        return hit
    try:
        status, payload = RUNNERS[job.command](job)
    except Inconclusive as exc:
        status, payload = "inconclusive", {"error": type(exc).__name__, "message": str(exc)}
    except UsageError:
        raise
    except WorkbenchError as exc:
        status, payload = "fail", {"error": type(exc).__name__, "message": str(exc)}
    report = json.loads(dumps(make_report(job, status, payload)))
    cache.put(job, report)
    return report


def exit_code(report: dict) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(report["status"], EXIT_INCONCLUSIVE)


# ---------------------------------------------------------------------------
# corpus


def corpus_jobs(seed: int = 0, a: int = 8, m: int = 32) -> list[JobSpec]:
    from .iwasawa import bundled_specs

    jobs = []
    for g in GROUPS:
        for p in PRIMES:
            for check in CELL_CHECKS:
                jobs.append(JobSpec(check, g, p, a, m, seed))
    for s in bundled_specs(a, m):
        jobs.append(JobSpec("iwasawa-certify", s.name, s.p, a, m, seed))
    for alg in HOMOTOPY_ALGEBRAS:
        name, _, p = alg.partition(":")
        jobs.append(JobSpec("homotopy-check", alg, int(p), a, m, seed))
    return jobs


def parse_filter(text: str) -> dict:
    out = {}
    for part in filter(None, (t.strip() for t in (text or "").split(","))):
        key, sep, val = part.partition("=")
        if not sep or key not in ("p", "group", "command"):
            raise UsageError(f"bad filter term {part!r}; use p=, group=, command=")
        out[key] = val
    return out


def _matches(job: JobSpec, flt: dict) -> bool:
    if "p" in flt and str(job.p) != flt["p"]:
        return False
    if "command" in flt and job.command != flt["command"]:
        return False
    if "group" in flt:
        name = job.target.partition(":")[0] if job.target else ""
        if name != flt["group"] and job.target != flt["group"]:
            return False
    return True


def _run_one(args):
    job, cache_dir = args
    return run_job(job, Cache(Path(cache_dir) if cache_dir else None))


def corpus_run(job: JobSpec, cache: Cache | None = None, workers: int = 1) -> dict:
    """Run the bundled matrix (optionally filtered); one summary row per job."""
    flt = parse_filter(job.filter)
    jobs = [j for j in corpus_jobs(job.seed, job.a, job.m) if _matches(j, flt)]
    cache = cache if cache is not None else Cache(None)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            reports = list(pool.map(_run_one, [(j, cache.directory) for j in jobs]))
    else:
        reports = [run_job(j, cache) for j in jobs]
    rows = [
        {"command": j.command, "target": j.target, "p": j.p, "status": r["status"], "digest": _digest(r)}
        for j, r in zip(jobs, reports)
    ]
    statuses = {r["status"] for r in rows}
    if "fail" in statuses:
        status = "fail"
    elif "inconclusive" in statuses:
        status = "inconclusive"
    else:
        status = "pass"
    payload = {"filter": flt, "cells": len(rows), "rows": rows, "reports": reports}
    return json.loads(dumps(make_report(job, status, payload)))


def _digest(report: dict) -> str:
    return hashlib.sha256(dumps(report["payload"]).encode()).hexdigest()[:16]
