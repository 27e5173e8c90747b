"""Monte Carlo cross-check of the exact class probabilities.

Dice are drawn uniformly from the region Q of sorted (f1, f2) pairs. The
region is split into the two triangles of its triangulation; a triangle is
chosen with probability proportional to its exact area, and a point inside
it from two 64-bit uniform integers. Every sampled face value is a dyadic
rational with the fixed denominator ``face_scale()``, so dominance is decided
exactly on integers and ties are detected soundly.

Random numbers come from numpy's PCG64. Worker ``w`` of a run seeded with
``s`` uses ``SeedSequence(s, spawn_key=(w,))``; a report is reproducible
given ``(seed, trials, workers)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .dice import Die, build_Q
from .polytope import simplex_volume, triangulate, vertex_enumerate
from .tournaments import (
    ProbabilityReport,
    class_from_scores,
    class_probabilities,
    exact_report,
)

_BITS = 64
_TWO64 = 1 << _BITS
_BATCH = 8192


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    trials: int
    dice_count: int = 3
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < _TWO64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.dice_count not in (3, 4):
            raise ValueError("dice_count must be 3 or 4")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class ClassEstimate:
    name: str
    count: int
    frequency: float
    std_error: float
    exact: Fraction
    z_score: Optional[float]


@dataclass
class EstimateReport:
    config: SamplerConfig
    classes: list[ClassEstimate]
    ties: int

    def as_dict(self) -> dict:
        return {
            "seed": self.config.seed,
            "trials": self.config.trials,
            "dice_count": self.config.dice_count,
            "workers": self.config.workers,
            "ties": self.ties,
            "classes": [
                {
                    "class": c.name,
                    "count": c.count,
                    "frequency": c.frequency,
                    "std_error": c.std_error,
                    "exact": str(c.exact),
                    "z_score": c.z_score,
                }
                for c in self.classes
            ],
        }


@lru_cache(maxsize=None)
def _triangles():
    """Triangles of Q as integer vertices over denominator ``den``, with area weights."""
    tris = triangulate(vertex_enumerate(build_Q()))
    areas = [simplex_volume(t) for t in tris]
    den = 1
    for t in tris:
        for v in t.vertices:
            for x in v:
                den = math.lcm(den, x.denominator)
    int_tris = [tuple(tuple(int(x * den) for x in v) for v in t.vertices) for t in tris]
    total = sum(areas)
    # Triangle j is chosen when a 64-bit draw falls below cut[j].
    cuts, acc = [], Fraction(0)
    for a in areas:
        acc += a / total
        cuts.append(acc)
    return int_tris, den, cuts


def face_scale() -> int:
    """Common denominator of every sampled face value."""
    return _triangles()[1] << (_BITS + 1)


def _pick(r: int, cuts) -> int:
    for j, c in enumerate(cuts):
        if r * c.denominator < c.numerator * _TWO64:
            return j
    return len(cuts) - 1


def sample_faces(draws) -> tuple[int, int, int]:
    """Map three 64-bit draws to integer faces over ``face_scale()``."""
    tris, den, cuts = _triangles()
    r, u, w = draws
    (x0, y0), (x1, y1), (x2, y2) = tris[_pick(r, cuts)]
    if u + w >= _TWO64:
        # reflect across the diagonal u + w = 1; the midpoint grid maps to itself
        u, w = _TWO64 - 1 - u, _TWO64 - 1 - w
    # barycentric weights (2u+1)/2^65, (2w+1)/2^65
    su, sw = 2 * u + 1, 2 * w + 1
    full = 1 << (_BITS + 1)
    f1 = x0 * full + su * (x1 - x0) + sw * (x2 - x0)
    f2 = y0 * full + su * (y1 - y0) + sw * (y2 - y0)
    scale = den * full
    f3 = 3 * scale // 2 - f1 - f2
    return f1, f2, f3


def sample_die(rng: np.random.Generator) -> Die:
    """One die uniform on Q, as exact dyadic rationals."""
    draws = [int(x) for x in rng.integers(0, _TWO64, size=3, dtype=np.uint64)]
    f = sample_faces(draws)
    s = face_scale()
    return Die(tuple(Fraction(x, s) for x in f))


def _sign_sum(a, b) -> int:
    s = 0
    for x in a:
        for y in b:
            if x > y:
                s += 1
            elif x < y:
                s -= 1
    return s


def worker_rng(seed: int, worker: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(worker,))))


def classify_sample(dice: list):
    """Tournament class of integer-face dice, or None on a tie.

    Faces share one positive denominator, so integer sign sums equal the
    rational ones; the out-degree sequence then fixes the class.
    """
    k = len(dice)
    deg = [0] * k
    for i in range(k):
        a = dice[i]
        for j in range(i + 1, k):
            s = _sign_sum(a, dice[j])
            if s > 0:
                deg[i] += 1
            elif s < 0:
                deg[j] += 1
            else:
                return None
    return class_from_scores(k, deg)


def _worker(args) -> tuple[dict, int]:
    seed, worker, trials, k = args
    rng = worker_rng(seed, worker)
    counts: dict = {}
    ties = 0
    done = 0
    while done < trials:
        n = min(_BATCH, trials - done)
        raw = rng.integers(0, _TWO64, size=(n, k, 3), dtype=np.uint64).tolist()
        for trial in raw:
            cls = classify_sample([sample_faces(d) for d in trial])
            if cls is None:
                ties += 1
            else:
                counts[cls] = counts.get(cls, 0) + 1
        done += n
    return counts, ties


def _split(trials: int, workers: int) -> list[int]:
    base, extra = divmod(trials, workers)
    return [base + (w < extra) for w in range(workers)]


def estimate(config: SamplerConfig, exact: Optional[ProbabilityReport] = None) -> EstimateReport:
    """Simulate ``config.trials`` dice tuples and compare with the exact classes."""
    k = config.dice_count
    jobs = [
        (config.seed, w, n, k)
        for w, n in enumerate(_split(config.trials, config.workers))
        if n > 0
    ]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            results = list(ex.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]
    counts: dict = {}
    for part, _ in results:
        for cls, c in part.items():
            counts[cls] = counts.get(cls, 0) + c
    ties = sum(r[1] for r in results)

    exact = exact or exact_report()
    probs = class_probabilities(exact, k)
    n = config.trials
    classes = []
    for cls, p in probs.items():
        c = counts.get(cls, 0)
        freq = c / n
        se = math.sqrt(freq * (1 - freq) / n)
        z = (freq - float(p)) / se if se > 0 else None
        classes.append(ClassEstimate(cls.value, c, freq, se, p, z))
    return EstimateReport(config, classes, ties)
