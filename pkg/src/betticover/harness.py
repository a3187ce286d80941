"""Randomized verification campaigns and their JSON reports."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FieldTooSmall, StructuralError
from .graded import find_nzd_linear_form, isoc_via_socle
from .koszul import betti_number, isoc_via_betti
from .linalg import PrimeField
from .matroid import (COUNTEREXAMPLE, CONCLUSION_UNIFORM, HYPOTHESIS_FAILS, LinearMatroid,
                      check_deletion_theorem, is_Dt)
from .points import (PointConfig, is_nondegenerate, moment_curve_config, random_config,
                     random_with_collinear, two_plane_config)

log = logging.getLogger(__name__)

DEFAULT_MIX = {"random": 0.40, "planted": 0.30, "moment": 0.15, "collinear": 0.15}
MIX_PRESETS = {
    "default": DEFAULT_MIX,
    "planted-only": {"planted": 1.0},
    "random-only": {"random": 1.0},
    "moment-only": {"moment": 1.0},
}


def parse_mix(spec: str) -> dict[str, float]:
    """A preset name, or 'kind=weight,...' with kinds from the default mix."""
    if spec in MIX_PRESETS:
        return dict(MIX_PRESETS[spec])
    mix = {}
    for part in spec.split(","):
        kind, sep, weight = part.partition("=")
        kind = kind.strip()
        if not sep or kind not in DEFAULT_MIX:
            raise ValueError(f"bad mix entry {part!r}")
        mix[kind] = float(weight)
    if not mix or sum(mix.values()) <= 0:
        raise ValueError("mix weights must have a positive sum")
    return mix


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng([seed, *keys])


def planted_counts(a: int, b: int, spare: int, rng: np.random.Generator) -> tuple[int, int]:
    """Split `spare` extra points between an a-plane and a b-plane; a 0-plane holds one point."""
    if a == 0 and b == 0:
        if spare:
            raise ValueError("two 0-planes hold exactly two points")
        return 1, 1
    if a == 0:
        return 1, b + 1 + spare
    if b == 0:
        return a + 1 + spare, 1
    extra1 = int(rng.integers(0, spare + 1))
    return a + 1 + extra1, b + 1 + spare - extra1


def draw_config(kind: str, field: PrimeField, n: int, size: int, rng: np.random.Generator,
                max_tries: int = 200) -> PointConfig:
    """A nondegenerate configuration of the requested kind and size."""
    if kind == "planted" and n == 1 and size != 2:
        raise StructuralError("a planted cover of P^1 is a pair of points")
    for _ in range(max_tries):
        if kind == "random":
            x = random_config(field, n, size, rng)
        elif kind == "planted":
            a = int(rng.integers(0, n))
            x = two_plane_config(field, n, a, n - 1 - a, planted_counts(a, n - 1 - a, size - (n + 1), rng), rng)
        elif kind == "moment":
            params = rng.choice(field.p, size=size, replace=False).tolist()
            x = moment_curve_config(field, n, params)
        elif kind == "collinear":
            extra = int(rng.integers(1, size - n)) if size > n + 1 else 0
            x = random_with_collinear(field, n, size, extra, rng)
        else:
            raise ValueError(f"unknown instance kind {kind!r}")
        if is_nondegenerate(x):
            return x
    raise RuntimeError(f"could not draw a nondegenerate {kind} configuration")


@dataclass
class TrialRecord:
    trial: int
    n: int
    p: int
    kind: str
    size: int
    digest: str
    beta: int
    cover: bool
    certificate: dict | None
    isoc_betti: int
    isoc_socle: int | None
    nzd_form: list[int] | None
    agree: bool
    isoc_agree: bool | None


@dataclass
class VerificationReport:
    config: dict
    records: list[TrialRecord] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def disagreements(self) -> list[TrialRecord]:
        return [r for r in self.records if not r.agree or r.isoc_agree is False]

    def to_json(self) -> dict:
        return {"config": self.config, "records": [asdict(r) for r in self.records], "summary": self.summary}

    @classmethod
    def from_json(cls, obj: dict) -> VerificationReport:
        return cls(obj["config"], [TrialRecord(**r) for r in obj["records"]], obj["summary"])

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))


def examine(x: PointConfig, with_socle: bool = True) -> dict:
    """Both sides of the equivalence, plus both initial socle degrees, for one configuration."""
    n = x.n
    beta = betti_number(x, n, n + 1)
    cert = is_Dt(LinearMatroid.from_points(x), n)
    isoc_b = 1 if beta else isoc_via_betti(x)
    isoc_s = form = None
    if with_socle:
        try:
            ell = find_nzd_linear_form(x)
        except FieldTooSmall:
            ell = None
        if ell is not None:
            form = list(ell.coefficients)
            isoc_s = isoc_via_socle(x, ell)
    return {
        "beta": beta, "cover": cert is not None, "certificate": cert.to_json() if cert else None,
        "isoc_betti": isoc_b, "isoc_socle": isoc_s, "nzd_form": form,
        "agree": (beta != 0) == (cert is not None),
        "isoc_agree": None if isoc_s is None else isoc_s == isoc_b,
    }


def run_trial(seed: int, n: int, p: int, trial: int, mix: dict[str, float], offsets: tuple[int, int],
              with_socle: bool = True) -> tuple[TrialRecord, PointConfig]:
    rng = trial_rng(seed, n, p, trial)
    kinds = sorted(mix)
    weights = np.array([mix[k] for k in kinds], dtype=float)
    kind = kinds[int(rng.choice(len(kinds), p=weights / weights.sum()))]
    size = n + int(rng.integers(offsets[0], offsets[1] + 1))
    x = draw_config(kind, PrimeField(p), n, size, rng)
    res = examine(x, with_socle)
    return TrialRecord(trial, n, p, kind, len(x), x.digest(), **res), x


def _run_chunk(args):
    seed, n, p, trials, mix, offsets, with_socle = args
    out = []
    for t in trials:
        rec, x = run_trial(seed, n, p, t, mix, offsets, with_socle)
        out.append((rec, x.to_json() if not rec.agree or rec.isoc_agree is False else None))
    return out


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("BETTICOVER_THREADS", "1")))
    except ValueError:
        return 1


def verify_main(ns: Sequence[int] = (2, 3, 4), ps: Sequence[int] = (101, 32003), offsets: tuple[int, int] = (1, 6),
                trials: int = 500, seed: int = 0, mix: dict[str, float] | None = None, with_socle: bool = True,
                repro_dir: str | os.PathLike | None = None, workers: int | None = None) -> VerificationReport:
    """Compare beta_{n,n+1} != 0 against the existence of a two-flat cover, trial by trial."""
    mix = dict(mix or DEFAULT_MIX)
    workers = workers or worker_count()
    start = time.perf_counter()
    jobs = []
    for n in ns:
        for p in ps:
            idx = list(range(trials))
            chunks = [idx[k::workers] for k in range(workers)] if workers > 1 else [idx]
            jobs += [(seed, n, p, c, mix, offsets, with_socle) for c in chunks if c]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [item for chunk in pool.map(_run_chunk, jobs) for item in chunk]
    else:
        results = [item for job in jobs for item in _run_chunk(job)]
    results.sort(key=lambda item: (item[0].n, item[0].p, item[0].trial))
    records = [r for r, _ in results]
    report = VerificationReport(
        config={"n": list(ns), "p": list(ps), "sizes": list(offsets), "trials": trials, "seed": seed,
                "mix": mix, "socle": with_socle},
        records=records,
    )
    bad = report.disagreements
    for rec, cfg in results:
        if cfg is not None:
            target = Path(repro_dir or ".") / f"repro-{rec.digest}.json"
            target.write_text(json.dumps({"seed": seed, "n": rec.n, "p": rec.p, "trial": rec.trial,
                                          "kind": rec.kind, "config": cfg}, indent=1))
            log.error("disagreement on trial %d (n=%d, p=%d); instance written to %s",
                      rec.trial, rec.n, rec.p, target)
    report.summary = {
        "trials": len(records),
        "agreements": len(records) - len(bad),
        "disagreements": len(bad),
        "disagreement_trials": [[r.n, r.p, r.trial] for r in bad],
        "predicate_true": sum(r.beta != 0 for r in records),
        "by_kind": {k: sum(r.kind == k for r in records) for k in sorted(mix)},
        "elapsed_seconds": round(time.perf_counter() - start, 3),
    }
    return report


@dataclass
class MatroidRecord:
    kind: str
    n: int
    p: int
    size: int
    verdict: str


def random_linear_matroid(field: PrimeField, n: int, size: int, rng: np.random.Generator,
                          max_tries: int = 1000) -> LinearMatroid:
    """`size` random nonzero vectors of rank n+1 (parallel elements allowed)."""
    for _ in range(max_tries):
        vecs = []
        while len(vecs) < size:
            v = rng.integers(0, field.p, size=n + 1).tolist()
            if any(v):
                vecs.append(v)
        m = LinearMatroid(field, vecs)
        if m.full_rank() == n + 1:
            return m
    raise RuntimeError("could not sample a full-rank vector family")


def verify_matroid(ns: Sequence[int] = (1, 2, 3, 4), ps: Sequence[int] = (2, 3, 5, 101), max_elements: int = 10,
                   trials: int = 300, seed: int = 0, moment_ns: Sequence[int] = (2, 3, 4),
                   planted: int = 30) -> dict:
    """Deletion-property campaign over random, moment-curve, and planted-cover matroids."""
    start = time.perf_counter()
    records: list[MatroidRecord] = []
    for t in range(trials):
        rng = trial_rng(seed, 1, t)
        n = int(rng.choice(ns))
        p = int(rng.choice(ps))
        size = int(rng.integers(max(3, n + 1), max(max_elements, n + 1) + 1))
        m = random_linear_matroid(PrimeField(p), n, size, rng)
        records.append(MatroidRecord("random", n, p, size, check_deletion_theorem(m, n).verdict))
    for n in moment_ns:
        x = moment_curve_config(PrimeField(101), n, range(n + 2))
        records.append(MatroidRecord("moment", n, 101, n + 2,
                                     check_deletion_theorem(LinearMatroid.from_points(x), n).verdict))
    for t in range(planted):
        rng = trial_rng(seed, 2, t)
        n = int(rng.choice([k for k in ns if k >= 1]))
        a = int(rng.integers(0, n))
        b = n - 1 - a
        field = PrimeField(101)
        spare = 0 if n == 1 else int(rng.integers(0, max(1, max_elements - n)))
        x = two_plane_config(field, n, a, b, planted_counts(a, b, spare, rng), rng)
        if len(x) < 3:
            continue
        records.append(MatroidRecord("planted", n, 101, len(x),
                                     check_deletion_theorem(LinearMatroid.from_points(x), n).verdict))
    counts = {v: sum(r.verdict == v for r in records) for v in (HYPOTHESIS_FAILS, CONCLUSION_UNIFORM, COUNTEREXAMPLE)}
    moment_ok = all(r.verdict == CONCLUSION_UNIFORM for r in records if r.kind == "moment")
    planted_ok = all(r.verdict == HYPOTHESIS_FAILS for r in records if r.kind == "planted")
    return {
        "config": {"n": list(ns), "p": list(ps), "max_elements": max_elements, "trials": trials, "seed": seed},
        "records": [asdict(r) for r in records],
        "summary": {"instances": len(records), "verdicts": counts, "moment_uniform": moment_ok,
                    "planted_hypothesis_fails": planted_ok,
                    "counterexamples": [asdict(r) for r in records if r.verdict == COUNTEREXAMPLE],
                    "elapsed_seconds": round(time.perf_counter() - start, 3)},
    }
