"""Tournament classes for three and four dice and their exact probabilities."""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .dice import (
    Die,
    Outcome,
    cyclic_classes,
    cyclic_representatives,
    dominance,
    event_probability,
    sigma_str,
)
from .linalg import format_rational, solve_linear


class ConsistencyError(ArithmeticError):
    """Assembled class probabilities violate their invariants."""


@dataclass(frozen=True)
class Tournament:
    """Complete orientation of the pairs of ``range(size)``.

    ``beats`` holds ordered ``(winner, loser)`` pairs, one per unordered pair.
    """

    size: int
    beats: frozenset

    def __post_init__(self):
        beats = frozenset(tuple(e) for e in self.beats)
        pairs = set()
        for w, l in beats:
            if w == l or not (0 <= w < self.size and 0 <= l < self.size):
                raise ValueError(f"bad edge {w}->{l}")
            pairs.add(frozenset((w, l)))
        if len(pairs) != len(beats) or len(pairs) != self.size * (self.size - 1) // 2:
            raise ValueError("every pair must be oriented exactly once")
        object.__setattr__(self, "beats", beats)

    @classmethod
    def from_edges(cls, size: int, edges) -> "Tournament":
        return cls(size, frozenset(edges))

    def out_degrees(self) -> list[int]:
        deg = [0] * self.size
        for w, _ in self.beats:
            deg[w] += 1
        return deg

    def score_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(self.out_degrees(), reverse=True))

    def reversed(self) -> "Tournament":
        return Tournament(self.size, frozenset((l, w) for w, l in self.beats))

    def relabeled(self, perm: Sequence[int]) -> "Tournament":
        """Vertex v becomes ``perm[v]``."""
        return Tournament(self.size, frozenset((perm[w], perm[l]) for w, l in self.beats))


def all_tournaments(size: int):
    pairs = list(itertools.combinations(range(size), 2))
    for bits in itertools.product((False, True), repeat=len(pairs)):
        yield Tournament(size, frozenset((j, i) if b else (i, j) for (i, j), b in zip(pairs, bits)))


class Class3(enum.Enum):
    CHAIN = "transitive-chain"
    CYCLE = "cycle"


class Class4(enum.Enum):
    CHAIN = "transitive-chain"
    FOUR_CYCLE = "four-cycle"
    WINNER_TRIANGLE = "winner-plus-3cycle"
    LOSER_TRIANGLE = "loser-plus-3cycle"


# For 3 and 4 vertices the score sequence determines the isomorphism class.
SCORE_CLASSES = {
    3: {
        (2, 1, 0): Class3.CHAIN,
        (1, 1, 1): Class3.CYCLE,
    },
    4: {
        (3, 2, 1, 0): Class4.CHAIN,
        (2, 2, 1, 1): Class4.FOUR_CYCLE,
        (3, 1, 1, 1): Class4.WINNER_TRIANGLE,
        (2, 2, 2, 0): Class4.LOSER_TRIANGLE,
    },
}


def class_from_scores(size: int, scores: Sequence[int]):
    key = tuple(sorted(scores, reverse=True))
    try:
        return SCORE_CLASSES[size][key]
    except KeyError:
        raise AssertionError(f"impossible score sequence {key} for size {size}") from None


def classify3(t: Tournament) -> Class3:
    if t.size != 3:
        raise ValueError("classify3 needs a 3-vertex tournament")
    return class_from_scores(3, t.out_degrees())


def classify4(t: Tournament) -> Class4:
    if t.size != 4:
        raise ValueError("classify4 needs a 4-vertex tournament")
    return class_from_scores(4, t.out_degrees())


def classify(t: Tournament) -> Union[Class3, Class4]:
    return classify3(t) if t.size == 3 else classify4(t)


def tournament_of_dice(dice: Sequence[Die]) -> Union[Tournament, Outcome]:
    """Pairwise dominance tournament, or ``Outcome.TIE`` if any pair ties."""
    if len(dice) not in (3, 4):
        raise ValueError("need 3 or 4 dice")
    edges = []
    for i, j in itertools.combinations(range(len(dice)), 2):
        out = dominance(dice[i], dice[j])
        if out is Outcome.TIE:
            return Outcome.TIE
        edges.append((i, j) if out is Outcome.FIRST else (j, i))
    return Tournament(len(dice), frozenset(edges))


# ---------------------------------------------------------------------------
# exact probabilities

def prob_E_components() -> tuple[Fraction, Fraction]:
    """``(P(E_123), P(E_132))``."""
    return event_probability((1, 2, 3)), event_probability((1, 3, 2))


def prob_E() -> Fraction:
    """P(A > B > C > A), using cyclic invariance of the E events."""
    p123, p132 = prob_E_components()
    return 3 * p123 + 3 * p132


def three_dice_report() -> tuple[Fraction, Fraction]:
    """``(p_triangle, p_3line)``; the two 3-cycle orientations are equally likely."""
    p_tri = 2 * prob_E()
    return p_tri, 1 - p_tri


def _map(fn, items, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def g_probabilities(words, workers: int = 1) -> dict[tuple, Fraction]:
    words = [tuple(w) for w in words]
    return dict(zip(words, _map(event_probability, words, workers)))


def prob_G(workers: int = 1) -> Fraction:
    """P(A > B > C > D > A): four times the sum over the nine rotation classes."""
    reps = g_probabilities(cyclic_representatives(), workers)
    return 4 * sum(reps.values(), Fraction(0))


def prob_G_full(workers: int = 1) -> tuple[Fraction, dict[tuple, Fraction]]:
    """Sum of P(G_sigma) over all 36 non-degenerate words, checking rotation invariance."""
    classes = cyclic_classes(4)
    words = [w for members in classes.values() for w in members]
    probs = g_probabilities(words, workers)
    for rep, members in classes.items():
        vals = {probs[w] for w in members}
        if len(vals) != 1:
            raise ConsistencyError(
                f"rotations of {sigma_str(rep)} have different probabilities: {sorted(vals)}"
            )
    return sum(probs.values(), Fraction(0)), probs


@dataclass(frozen=True)
class ProbabilityReport:
    p_3line: Fraction
    p_triangle: Fraction
    p_4line: Fraction
    p_square: Fraction
    p_winner_tri: Fraction
    p_loser_tri: Fraction

    FIELDS = ("p_3line", "p_triangle", "p_4line", "p_square", "p_winner_tri", "p_loser_tri")

    def check(self) -> None:
        vals = [getattr(self, f) for f in self.FIELDS]
        if any(not 0 <= v <= 1 for v in vals):
            raise ConsistencyError(f"probability outside [0, 1]: {self}")
        if self.p_3line + self.p_triangle != 1:
            raise ConsistencyError("three-dice classes do not sum to 1")
        if self.p_4line + self.p_square + self.p_winner_tri + self.p_loser_tri != 1:
            raise ConsistencyError("four-dice classes do not sum to 1")

    def as_dict(self) -> dict:
        return {f: rational_record(getattr(self, f)) for f in self.FIELDS}


def assemble_four_dice(p_g: Fraction, p_3line: Fraction, p_triangle: Fraction) -> ProbabilityReport:
    """Solve the deletion equations for the four-dice class probabilities.

    Deleting a random die from four gives three random dice, which ties the
    four-dice classes to the known three-dice ones; the star map makes the
    winner and loser classes equiprobable.
    """
    p_square = 6 * p_g
    q = Fraction
    # unknowns: p_4line, p_winner_tri, p_loser_tri
    system = [
        [q(1), q(3, 4), q(3, 4)],
        [q(0), q(1, 4), q(1, 4)],
        [q(0), q(1), q(-1)],
    ]
    rhs = [p_3line - p_square / 2, p_triangle - p_square / 2, q(0)]
    sol = solve_linear(system, rhs)
    if sol is None:
        raise ConsistencyError("deletion equations are inconsistent")
    p_4line, p_win, p_lose = sol
    report = ProbabilityReport(p_3line, p_triangle, p_4line, p_square, p_win, p_lose)
    report.check()
    return report


@lru_cache(maxsize=None)
def exact_report(workers: int = 1) -> ProbabilityReport:
    p_tri, p_line = three_dice_report()
    return assemble_four_dice(prob_G(workers), p_line, p_tri)


def class_probabilities(report: ProbabilityReport, dice_count: int) -> dict:
    if dice_count == 3:
        return {Class3.CHAIN: report.p_3line, Class3.CYCLE: report.p_triangle}
    return {
        Class4.CHAIN: report.p_4line,
        Class4.FOUR_CYCLE: report.p_square,
        Class4.WINNER_TRIANGLE: report.p_winner_tri,
        Class4.LOSER_TRIANGLE: report.p_loser_tri,
    }


# ---------------------------------------------------------------------------
# rendering


def decimal_string(q: Fraction, digits: int = 9) -> str:
    """Round to ``digits`` significant digits, keeping trailing zeros."""
    if q == 0:
        return "0"
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    d = ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
    d = d.quantize(Decimal(1).scaleb(d.adjusted() - digits + 1), context=ctx)
    return format(d, "f")


def rational_record(q: Fraction) -> dict:
    return {"exact": format_rational(q), "decimal": decimal_string(q)}
