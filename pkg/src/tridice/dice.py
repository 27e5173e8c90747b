"""Three-sided dice in the balanced uniform model, and their event polytopes.

A die is three sorted faces in [0, 1] summing to 3/2. In polytope
coordinates only the two smallest faces are kept (the third is
``3/2 - f1 - f2``), so k dice live in a 2k-dimensional space with
coordinates ``(a1, a2, b1, b2, ...)``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .polytope import HalfSpace, HPolytope, dimension, volume

FACE_SUM = Fraction(3, 2)

SigmaWord = tuple  # tuple[int, ...] with letters in {1, 2, 3}


class BoundaryError(ValueError):
    """Two dice share a face value at the same sorted position."""


@dataclass(frozen=True, order=True)
class Die:
    faces: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        fs = tuple(sorted(Fraction(f) for f in self.faces))
        if len(fs) != 3:
            raise ValueError("a die has exactly three faces")
        if fs[0] < 0 or fs[2] > 1:
            raise ValueError(f"faces out of [0, 1]: {fs}")
        if sum(fs) != FACE_SUM:
            raise ValueError(f"faces must sum to 3/2, got {sum(fs)}")
        object.__setattr__(self, "faces", fs)

    @classmethod
    def from_pair(cls, f1, f2) -> "Die":
        f1, f2 = Fraction(f1), Fraction(f2)
        return cls((f1, f2, FACE_SUM - f1 - f2))

    def __iter__(self):
        return iter(self.faces)

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.faces) + ")"


class Outcome(enum.Enum):
    FIRST = "first-dominates"
    SECOND = "second-dominates"
    TIE = "tie"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def sign_sum(a: Die, b: Die) -> int:
    return sum(_sgn(x - y) for x in a.faces for y in b.faces)


def dominance(a: Die, b: Die) -> Outcome:
    s = sign_sum(a, b)
    if s > 0:
        return Outcome.FIRST
    if s < 0:
        return Outcome.SECOND
    return Outcome.TIE


def dominance_mode(a: Die, b: Die) -> Optional[int]:
    """The mode i with ``a >_i b``, or None if a does not dominate b.

    Mode i means the coordinatewise comparison ``a_i > b_i`` fails at
    position i and holds at the other two positions.
    """
    wins = []
    for x, y in zip(a.faces, b.faces):
        if x == y:
            raise BoundaryError(f"equal faces {x} at the same position")
        wins.append(x > y)
    if sum(wins) != 2:
        return None
    return wins.index(False) + 1


def star(a: Die) -> Die:
    """The involution ``(a1, a2, a3) -> (1-a3, 1-a2, 1-a1)``; reverses dominance."""
    f1, f2, f3 = a.faces
    return Die((1 - f3, 1 - f2, 1 - f1))


# ---------------------------------------------------------------------------
# polytopes


def build_Q() -> HPolytope:
    # a1 >= 0, a2 - a1 >= 0, 2a1 + 2a2 - 1 >= 0, 3 - 2a1 - 4a2 >= 0
    return HPolytope.from_tuples(2, [(0, 1, 0), (0, -1, 1), (-1, 2, 2), (3, -2, -4)])


def build_Qk(k: int) -> HPolytope:
    if not 1 <= k <= 4:
        raise ValueError(f"k must be in 1..4, got {k}")
    q = build_Q()
    out = q
    for _ in range(k - 1):
        out = out.product(q)
    return out


def _face_vector(die: int, face: int, k: int) -> list[int]:
    v = [0] * (2 * k)
    if face == 3:
        v[2 * die] = v[2 * die + 1] = -1
    else:
        v[2 * die + face - 1] = 1
    return v


_MODE_SIGNS = ((-1, 1, 1), (1, -1, 1), (1, 1, -1))


def relation_inequalities(m: int, i: int, k: int) -> list[HalfSpace]:
    """Halfspaces asserting that the m-th edge of the k-cycle has mode i.

    Edge m runs from die m-1 to die m (mod k): A->B, B->C, ..., last->A.
    """
    if k not in (3, 4):
        raise ValueError(f"k must be 3 or 4, got {k}")
    if not 1 <= m <= k:
        raise ValueError(f"edge index must be in 1..{k}, got {m}")
    if i not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {i}")
    src, dst = m - 1, m % k
    out = []
    for face, s in zip((1, 2, 3), _MODE_SIGNS[i - 1]):
        x = _face_vector(src, face, k)
        y = _face_vector(dst, face, k)
        out.append(HalfSpace(0, tuple(s * (p - q) for p, q in zip(x, y))))
    return out


def parse_sigma(word: Union[str, Iterable[int]]) -> SigmaWord:
    if isinstance(word, str):
        text = word.strip().replace(",", "")
        if not text.isdigit():
            raise ValueError(f"malformed sigma word {word!r}")
        letters = tuple(int(c) for c in text)
    else:
        letters = tuple(int(c) for c in word)
    if len(letters) not in (3, 4) or any(c not in (1, 2, 3) for c in letters):
        raise ValueError(f"sigma word must have 3 or 4 letters from 1,2,3: {word!r}")
    return letters


def sigma_str(sigma: Sequence[int]) -> str:
    return "".join(str(c) for c in sigma)


def _cycle_event(sigma: SigmaWord) -> HPolytope:
    k = len(sigma)
    hs = []
    for m, i in enumerate(sigma, 1):
        hs.extend(relation_inequalities(m, i, k))
    return build_Qk(k) + HPolytope(2 * k, tuple(hs))


def build_E(sigma) -> HPolytope:
    sigma = parse_sigma(sigma)
    if len(sigma) != 3:
        raise ValueError("E needs a word of length 3")
    return _cycle_event(sigma)


def build_G(sigma) -> HPolytope:
    sigma = parse_sigma(sigma)
    if len(sigma) != 4:
        raise ValueError("G needs a word of length 4")
    return _cycle_event(sigma)


def build_event(sigma) -> HPolytope:
    sigma = parse_sigma(sigma)
    return build_E(sigma) if len(sigma) == 3 else build_G(sigma)


def event_probability(sigma) -> Fraction:
    """P(event) = vol(event) / vol(Q^k) with vol(Q^k) = 8^-k.

    Lower-dimensional events get probability 0 without integration.
    """
    sigma = parse_sigma(sigma)
    return volume(build_event(sigma)) * 8 ** len(sigma)


def is_degenerate_sigma(sigma) -> bool:
    return len(set(parse_sigma(sigma))) <= 2


def rotations(sigma: Sequence[int]) -> list[SigmaWord]:
    s = tuple(sigma)
    return [s[r:] + s[:r] for r in range(len(s))]


def cyclic_classes(length: int = 4) -> dict[SigmaWord, list[SigmaWord]]:
    """Non-degenerate words grouped by rotation, keyed by least rotation."""
    classes: dict[SigmaWord, list[SigmaWord]] = {}
    for w in itertools.product((1, 2, 3), repeat=length):
        if len(set(w)) <= 2:
            continue
        classes.setdefault(min(rotations(w)), []).append(w)
    return dict(sorted(classes.items()))


def cyclic_representatives() -> list[SigmaWord]:
    return list(cyclic_classes(4))


def event_dimension(sigma) -> int:
    return dimension(build_event(sigma))
