"""Exit criteria. Run alone with ``pytest tests/test_acceptance.py``.

A summary line per criterion is printed at the end of the session.
"""

import itertools
import random
import time
from collections import Counter
from fractions import Fraction as F
from math import factorial

import pytest

from conftest import hit_rate, random_die, random_polytope, strict_pair
from tridice.dice import (
    Outcome,
    build_G,
    build_Q,
    build_Qk,
    cyclic_classes,
    dominance,
    dominance_mode,
    event_probability,
    is_degenerate_sigma,
)
from tridice.montecarlo import SamplerConfig, estimate, sample_die, worker_rng
from tridice.polytope import box, dimension, standard_simplex, volume
from tridice.tournaments import (
    Class3,
    Class4,
    all_tournaments,
    assemble_four_dice,
    classify3,
    classify4,
    g_probabilities,
    prob_E,
    prob_E_components,
    prob_G,
    three_dice_report,
)

G_REPRESENTATIVES = {
    (1, 1, 2, 3): F(229, 322560),
    (1, 1, 3, 2): F(691507, 294912000),
    (1, 2, 1, 3): F(40913, 15482880),
    (1, 2, 2, 3): F(5431, 8064000),
    (1, 2, 3, 2): F(32299, 16515072),
    (1, 3, 2, 2): F(38929, 18432000),
    (1, 2, 3, 3): F(229, 322560),
    (1, 3, 2, 3): F(40913, 15482880),
    (1, 3, 3, 2): F(691507, 294912000),
}


@pytest.mark.criterion(1, "exact three-dice reproduction")
def test_criterion_1_three_dice():
    start = time.perf_counter()
    assert volume(build_Q()) == F(1, 8)
    assert volume(build_Qk(3)) == F(1, 512)
    p123, p132 = prob_E_components()
    assert p123 == F(23, 1800)
    assert p132 == F(3133, 115200)
    assert prob_E() == F(307, 2560)
    p_tri, p_line = three_dice_report()
    assert p_tri == F(307, 1280)
    assert p_line == F(973, 1280)
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(2, "exact four-dice reproduction")
def test_criterion_2_four_dice():
    start = time.perf_counter()
    probs = g_probabilities(G_REPRESENTATIVES)
    assert probs == G_REPRESENTATIVES
    p_g = 4 * sum(probs.values())
    assert p_g == F(99930571, 1548288000)
    assert prob_G() == p_g
    r = assemble_four_dice(p_g, F(973, 1280), F(307, 1280))
    assert r.p_4line == F(110413771, 258048000)
    assert r.p_square == F(99930571, 258048000)
    assert r.p_winner_tri == F(23851829, 258048000)
    assert r.p_loser_tri == F(23851829, 258048000)
    assert time.perf_counter() - start < 15 * 60


@pytest.mark.criterion(3, "pruning: 45 empty words, 36 positive in 9 equal rotation classes")
def test_criterion_3_pruning():
    words = list(itertools.product((1, 2, 3), repeat=4))
    degenerate = [w for w in words if is_degenerate_sigma(w)]
    assert len(degenerate) == 45
    for w in degenerate:
        assert dimension(build_G(w)) < 8
        assert volume(build_G(w)) == 0
    vols = {w: volume(build_G(w)) for w in words if not is_degenerate_sigma(w)}
    positive = [w for w, v in vols.items() if v > 0]
    assert len(positive) == 36
    classes = cyclic_classes(4)
    assert len(classes) == 9
    assert sorted(w for ws in classes.values() for w in ws) == sorted(positive)
    for members in classes.values():
        assert len(members) == 4
        assert len({vols[w] for w in members}) == 1


@pytest.mark.criterion(4, "star-duality volume equalities")
def test_criterion_4_star_duality():
    for w1, w2 in [("1123", "1233"), ("1132", "1332"), ("1213", "1323")]:
        assert event_probability(w1) == event_probability(w2)


@pytest.mark.criterion(5, "dominance-mode properties, 10^4 samples each, zero counterexamples")
def test_criterion_5_dominance_modes():
    rng = random.Random(5)
    mc = worker_rng(5)
    counter = 0

    # coordinatewise characterization vs the 9-term sign sum
    checked = 0
    while checked < 10_000:
        if checked % 2:
            a, b = random_die(rng), random_die(rng)
        else:
            a, b = sample_die(mc), sample_die(mc)
        if not strict_pair(a, b):
            continue
        wins = sum(x > y for x, y in zip(a.faces, b.faces))
        first = dominance(a, b) is Outcome.FIRST
        if not (first == (wins == 2) == (dominance_mode(a, b) is not None)):
            counter += 1
        checked += 1

    # same-mode transitivity
    checked = 0
    while checked < 10_000:
        a, b, c = random_die(rng), random_die(rng), random_die(rng)
        if not (strict_pair(a, b) and strict_pair(b, c) and strict_pair(a, c)):
            continue
        i = dominance_mode(a, b)
        if i is None or dominance_mode(b, c) != i:
            continue
        if dominance_mode(a, c) != i:
            counter += 1
        checked += 1
    assert counter == 0


@pytest.mark.criterion(6, "volume-engine oracle suite")
def test_criterion_6_volume_oracles():
    rng = random.Random(6)
    for d in range(2, 7):
        assert volume(standard_simplex(d)) == F(1, factorial(d))
        sides = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(d)]
        lows = [F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d)]
        expected = F(1)
        for s in sides:
            expected *= s
        assert volume(box(lows, [lo + s for lo, s in zip(lows, sides)])) == expected

    a, b = random_polytope(rng, 2, 3), random_polytope(rng, 3, 3)
    assert volume(a.product(b)) == volume(a) * volume(b)
    for k in range(1, 5):
        assert volume(build_Qk(k)) == F(1, 8) ** k

    for seed in range(10):
        p = random_polytope(rng, 3, 5)
        phat, se = hit_rate(p, 100_000, seed=seed)
        assert abs(phat - float(volume(p))) <= 4 * se


@pytest.mark.criterion(7, "Monte Carlo cross-check at 10^6 trials, 4 standard errors")
def test_criterion_7_monte_carlo():
    start = time.perf_counter()
    targets = {
        3: {Class3.CYCLE.value: F(307, 1280), Class3.CHAIN.value: F(973, 1280)},
        4: {
            Class4.CHAIN.value: F(110413771, 258048000),
            Class4.FOUR_CYCLE.value: F(99930571, 258048000),
            Class4.WINNER_TRIANGLE.value: F(23851829, 258048000),
            Class4.LOSER_TRIANGLE.value: F(23851829, 258048000),
        },
    }
    for k, expected in targets.items():
        r = estimate(SamplerConfig(seed=42, trials=1_000_000, dice_count=k))
        assert r.ties == 0
        for c in r.classes:
            assert abs(c.z_score) < 4, c
            assert abs(c.frequency - float(expected[c.name])) <= 4 * c.std_error, c
    assert time.perf_counter() - start < 5 * 60


@pytest.mark.criterion(8, "exhaustive classification counts 6/2 and 24/24/8/8")
def test_criterion_8_classification():
    assert Counter(classify3(t) for t in all_tournaments(3)) == {Class3.CHAIN: 6, Class3.CYCLE: 2}
    assert Counter(classify4(t) for t in all_tournaments(4)) == {
        Class4.CHAIN: 24,
        Class4.FOUR_CYCLE: 24,
        Class4.WINNER_TRIANGLE: 8,
        Class4.LOSER_TRIANGLE: 8,
    }


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
