import random
from fractions import Fraction

import numpy as np
import pytest

from tridice.dice import Die
from tridice.polytope import HalfSpace, HPolytope, box

Q_VERTICES = [
    (Fraction(0), Fraction(1, 2)),
    (Fraction(1, 4), Fraction(1, 4)),
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(0), Fraction(3, 4)),
]


def random_polytope(rng: random.Random, d: int, extra: int) -> HPolytope:
    """Unit cube cut by ``extra`` random halfspaces that keep its centre inside."""
    centre = [Fraction(1, 2)] * d
    hs = list(box([0] * d, [1] * d).halfspaces)
    for _ in range(extra):
        normal = [Fraction(rng.randint(-5, 5)) for _ in range(d)]
        if not any(normal):
            normal[0] = Fraction(1)
        slack = Fraction(rng.randint(1, 8), rng.randint(2, 9))
        offset = slack - sum(a * c for a, c in zip(normal, centre))
        hs.append(HalfSpace(offset, tuple(normal)))
    return HPolytope(d, tuple(hs))


def hit_rate(p: HPolytope, samples: int, seed: int) -> tuple[float, float]:
    """Bounding-box rejection estimate of vol(p) for p inside the unit cube."""
    gen = np.random.default_rng(seed)
    pts = gen.random((samples, p.ambient_dim))
    a = np.array([[float(x) for x in h.normal] for h in p.halfspaces])
    b = np.array([float(h.offset) for h in p.halfspaces])
    inside = np.all(pts @ a.T + b >= 0, axis=1)
    phat = inside.mean()
    return float(phat), float(np.sqrt(phat * (1 - phat) / samples))


def random_die(rng: random.Random, den: int = 97) -> Die:
    """Die with small-denominator faces, uniform over the grid points of Q."""
    while True:
        f1 = Fraction(rng.randint(0, den), 2 * den)
        f2 = Fraction(rng.randint(0, 3 * den), 4 * den)
        f3 = Fraction(3, 2) - f1 - f2
        if 0 <= f1 <= f2 <= f3 <= 1:
            return Die((f1, f2, f3))


def strict_pair(a: Die, b: Die) -> bool:
    """No face of a equals any face of b."""
    return not set(a.faces) & set(b.faces)


@pytest.fixture
def rng():
    return random.Random(20240611)


_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion n")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    failed = call.excinfo is not None and call.when in ("setup", "call")
    prev = _CRITERIA.get(n, (text, True))
    _CRITERIA[n] = (text, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        text, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
