"""Exact convex polytopes: H/V representations, vertex enumeration, volume.

A halfspace is the closed condition ``offset + normal . x >= 0`` and is
written as the tuple ``(offset, normal_1, ..., normal_n)``.

Vertex enumeration uses the double description method on the homogenized
cone ``{(t, x) : t >= 0, offset*t + normal.x >= 0}`` with integer rays, so
no rational arithmetic happens inside the main loop. Faces are handled
purely combinatorially through vertex/halfspace incidence bitmasks.

Volume is the sum over a pulling triangulation: every face is coned from
its lowest-indexed vertex onto the facets that miss it. :func:`triangulate`
lists those simplices explicitly; :func:`volume` computes the same sum but
memoizes each face's contribution so shared faces are only visited once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Optional, Sequence

from .linalg import (
    RatVector,
    determinant,
    format_rational,
    int_determinant,
    integer_row,
    parse_rational,
    rank,
    row_echelon,
    solve_linear,
    vector,
)


class UnboundedPolytopeError(ValueError):
    """Raised when a feasible inequality system has a recession direction."""


class DegeneratePolytopeError(ValueError):
    """Raised when a full-dimensional polytope is required but not given."""


class PolytopeParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class HalfSpace:
    offset: Fraction
    normal: RatVector

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "normal", vector(self.normal))

    @classmethod
    def from_tuple(cls, values: Sequence) -> "HalfSpace":
        return cls(values[0], tuple(values[1:]))

    def as_tuple(self) -> RatVector:
        return (self.offset,) + self.normal

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        return self.offset + sum((a * b for a, b in zip(self.normal, x)), Fraction(0))

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.evaluate(x) >= 0


@dataclass(frozen=True)
class HPolytope:
    ambient_dim: int
    halfspaces: tuple[HalfSpace, ...]

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        hs = tuple(self.halfspaces)
        for h in hs:
            if len(h.normal) != self.ambient_dim:
                raise ValueError(
                    f"halfspace has {len(h.normal)} coefficients, expected {self.ambient_dim}"
                )
        object.__setattr__(self, "halfspaces", hs)

    @classmethod
    def from_tuples(cls, dim: int, rows: Iterable[Sequence]) -> "HPolytope":
        return cls(dim, tuple(HalfSpace.from_tuple(r) for r in rows))

    def tuples(self) -> list[RatVector]:
        return [h.as_tuple() for h in self.halfspaces]

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def __add__(self, other: "HPolytope") -> "HPolytope":
        """Intersection of two polytopes in the same space (halfspace concatenation)."""
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return HPolytope(self.ambient_dim, self.halfspaces + other.halfspaces)

    def product(self, other: "HPolytope") -> "HPolytope":
        """Cartesian product; the inequality matrix is block diagonal."""
        d1, d2 = self.ambient_dim, other.ambient_dim
        z1, z2 = (Fraction(0),) * d1, (Fraction(0),) * d2
        hs = [HalfSpace(h.offset, h.normal + z2) for h in self.halfspaces]
        hs += [HalfSpace(h.offset, z1 + h.normal) for h in other.halfspaces]
        return HPolytope(d1 + d2, tuple(hs))


@dataclass(frozen=True)
class VPolytope:
    ambient_dim: int
    vertices: tuple[RatVector, ...] = ()
    # For each vertex, indices of the generating halfspaces tight at it.
    incidence: tuple[frozenset, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[RatVector, ...]

    def __post_init__(self):
        vs = tuple(vector(v) for v in self.vertices)
        if not vs or any(len(v) != len(vs) - 1 for v in vs):
            raise ValueError("a d-simplex needs d+1 vertices in dimension d")
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def box(lows: Sequence, highs: Sequence) -> HPolytope:
    d = len(lows)
    rows = []
    for i, (lo, hi) in enumerate(zip(lows, highs)):
        e = [0] * d
        e[i] = 1
        rows.append([-Fraction(lo)] + e)
        rows.append([Fraction(hi)] + [-v for v in e])
    return HPolytope.from_tuples(d, rows)


def standard_simplex(d: int) -> HPolytope:
    """``{x >= 0, sum(x) <= 1}``, volume ``1/d!``."""
    rows = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        rows.append([0] + e)
    rows.append([1] + [-1] * d)
    return HPolytope.from_tuples(d, rows)


# ---------------------------------------------------------------------------
# vertex enumeration


def _homogenized(p: HPolytope) -> list[tuple[int, ...]]:
    return [integer_row(h.as_tuple()) for h in p.halfspaces]


def _initial_basis(rows: list[tuple[int, ...]], n: int) -> list[int]:
    chosen: list[int] = []
    echelon: list[tuple[int, ...]] = []
    for i, r in enumerate(rows):
        if rank(echelon + [r]) > len(echelon):
            echelon.append(r)
            chosen.append(i)
            if len(chosen) == n:
                break
    return chosen


def _normalize(ray: list[int]) -> tuple[int, ...]:
    g = 0
    for v in ray:
        g = gcd(g, v)
    if g > 1:
        return tuple(v // g for v in ray)
    return tuple(ray)


def _double_description(rows: list[tuple[int, ...]], n: int):
    """Extreme rays of the pointed cone ``{y : r.y >= 0 for r in rows}``.

    ``rows`` must have rank ``n``. Returns ``(ray, zero_mask)`` pairs where
    bit ``i`` of ``zero_mask`` is set iff ``rows[i].y == 0``.
    """
    basis = _initial_basis(rows, n)
    inv_cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        sol = solve_linear([rows[i] for i in basis], e)
        inv_cols.append(integer_row(sol))
    all_basis = 0
    for i in basis:
        all_basis |= 1 << i
    rays = [r for r in inv_cols]
    zeros = [all_basis & ~(1 << basis[j]) for j in range(n)]

    for h, row in enumerate(rows):
        if (all_basis >> h) & 1:
            continue
        bit = 1 << h
        vals = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        new_rays = []
        new_zeros = []
        for i, v in enumerate(vals):
            if v > 0:
                new_rays.append(rays[i])
                new_zeros.append(zeros[i])
            elif v == 0:
                new_rays.append(rays[i])
                new_zeros.append(zeros[i] | bit)
        if pos and neg:
            need = n - 2
            for ip in pos:
                zp = zeros[ip]
                vp = vals[ip]
                rp = rays[ip]
                for im in neg:
                    common = zp & zeros[im]
                    if common.bit_count() < need:
                        continue
                    # Combinatorial adjacency: no third ray's zero set covers
                    # the common zero set.
                    hits = 0
                    for z in zeros:
                        if z & common == common:
                            hits += 1
                            if hits > 2:
                                break
                    if hits > 2:
                        continue
                    vm = -vals[im]
                    rm = rays[im]
                    new_rays.append(_normalize([vp * b + vm * a for a, b in zip(rp, rm)]))
                    new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
        all_basis |= bit
    return list(zip(rays, zeros))


def vertex_enumerate(p: HPolytope) -> VPolytope:
    """All vertices of ``p`` with their tight-halfspace sets.

    Raises :class:`UnboundedPolytopeError` if ``p`` is nonempty and
    unbounded; returns an empty VPolytope if ``p`` is infeasible.
    """
    d = p.ambient_dim
    m = len(p.halfspaces)
    n = d + 1
    rows = _homogenized(p)
    t_row = (1,) + (0,) * d
    system = rows + [t_row]

    if rank(system) < n:
        if _feasible_modulo_lineality(system, n):
            raise UnboundedPolytopeError("polytope contains a line")
        return VPolytope(d)

    verts: list[RatVector] = []
    inc: list[frozenset] = []
    unbounded = False
    for ray, zmask in _double_description(system, n):
        t = ray[0]
        if t == 0:
            unbounded = True
            continue
        verts.append(tuple(Fraction(v, t) for v in ray[1:]))
        inc.append(frozenset(i for i in range(m) if (zmask >> i) & 1))
    if verts and unbounded:
        raise UnboundedPolytopeError("polytope has an extreme ray")
    order = sorted(range(len(verts)), key=lambda i: verts[i])
    return VPolytope(d, tuple(verts[i] for i in order), tuple(inc[i] for i in order))


def _feasible_modulo_lineality(system: list[tuple[int, ...]], n: int) -> bool:
    # Free columns of the echelon form span a complement of the lineality
    # space; fixing them to zero preserves feasibility.
    _, pivots = row_echelon(system)
    reduced = [tuple(r[c] for c in pivots) for r in system]
    for ray, _ in _double_description(reduced, len(pivots)):
        if ray[0] > 0:
            return True
    return False


def vertex_enumerate_bruteforce(p: HPolytope) -> VPolytope:
    """Basis enumeration: solve every d-subset of halfspaces as equalities.

    Exponential; kept as an independent oracle for small inputs. Assumes
    ``p`` is bounded.
    """
    d = p.ambient_dim
    hs = p.halfspaces
    found: dict[RatVector, None] = {}
    for combo in itertools.combinations(range(len(hs)), d):
        a = [hs[i].normal for i in combo]
        if rank(a) < d:
            continue
        x = solve_linear(a, [-hs[i].offset for i in combo])
        if x is not None and p.contains(x):
            found.setdefault(x, None)
    verts = sorted(found)
    inc = tuple(
        frozenset(i for i, h in enumerate(hs) if h.evaluate(v) == 0) for v in verts
    )
    return VPolytope(d, tuple(verts), inc)


# ---------------------------------------------------------------------------
# faces


def _affine_dim(points: Sequence[RatVector]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(q, p0)] for q in points[1:]]) if len(points) > 1 else 0


def dimension(p) -> int:
    """Dimension of the affine hull; -1 for the empty set.

    Accepts an HPolytope (enumerated first) or a VPolytope.
    """
    v = p if isinstance(p, VPolytope) else vertex_enumerate(p)
    return _affine_dim(v.vertices)


class _FaceLattice:
    """Combinatorial face access for a full-dimensional VPolytope."""

    def __init__(self, v: VPolytope):
        self.v = v
        tight: dict[int, int] = {}
        for vi, hs in enumerate(v.incidence):
            for h in hs:
                tight[h] = tight.get(h, 0) | (1 << vi)
        self.tight = list(tight.values())
        self._facets: dict[int, list[int]] = {}
        self._charts: dict[int, tuple] = {}

    def facets(self, face: int) -> list[int]:
        """Vertex masks of the facets of ``face``: maximal proper traces."""
        cached = self._facets.get(face)
        if cached is not None:
            return cached
        cands = {face & t for t in self.tight}
        cands.discard(face)
        cands.discard(0)
        ordered = sorted(cands, key=lambda s: -s.bit_count())
        out: list[int] = []
        for s in ordered:
            if not any(s & f == s for f in out):
                out.append(s)
        self._facets[face] = out
        return out

    def points(self, face: int) -> list[RatVector]:
        vs = self.v.vertices
        return [vs[i] for i in _bits(face)]

    def chart(self, face: int, k: int):
        """Affine parametrization ``x = base + y M`` of the face's hull.

        ``M`` is k x d in reduced echelon form, so ``y`` are the coordinates
        of ``x - base`` at the pivot columns.
        """
        cached = self._charts.get(face)
        if cached is not None:
            return cached
        pts = self.points(face)
        base = pts[0]
        diffs = []
        basis: list = []
        for q in pts[1:]:
            diffs.append([a - b for a, b in zip(q, base)])
            if len(diffs) >= k:
                basis, pivots = row_echelon(diffs)
                if len(pivots) == k:
                    break
                diffs = basis
        else:
            basis, pivots = row_echelon(diffs) if diffs else ([], [])
        if len(basis) != k:
            raise DegeneratePolytopeError(f"face has dimension {len(basis)}, expected {k}")
        out = (base, basis)
        self._charts[face] = out
        return out


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def triangulate(v: VPolytope) -> list[Simplex]:
    """Pulling triangulation of a full-dimensional polytope."""
    d = v.ambient_dim
    if v.is_empty or _affine_dim(v.vertices) != d:
        raise DegeneratePolytopeError("triangulation needs a full-dimensional polytope")
    lat = _FaceLattice(v)
    memo: dict[int, list[tuple[int, ...]]] = {}

    def tri(face: int, k: int) -> list[tuple[int, ...]]:
        if k == 0:
            return [(_lowest_bit(face),)]
        got = memo.get(face)
        if got is not None:
            return got
        v0 = _lowest_bit(face)
        out = []
        for f in lat.facets(face):
            if (f >> v0) & 1:
                continue
            out.extend((v0,) + s for s in tri(f, k - 1))
        memo[face] = out
        return out

    full = (1 << len(v.vertices)) - 1
    return [Simplex(tuple(v.vertices[i] for i in s)) for s in tri(full, d)]


def simplex_volume(s: Simplex) -> Fraction:
    v0 = s.vertices[0]
    rows = [[a - b for a, b in zip(q, v0)] for q in s.vertices[1:]]
    return abs(determinant(rows)) / factorial(s.dim)


def _vpolytope_volume(v: VPolytope) -> Fraction:
    d = v.ambient_dim
    lat = _FaceLattice(v)
    memo: dict[int, Fraction] = {}

    def pvol(face: int, k: int) -> Fraction:
        # k-volume of the face projected onto its chart's pivot coordinates.
        if k == 0:
            return Fraction(1)
        got = memo.get(face)
        if got is not None:
            return got
        _, basis = lat.chart(face, k)
        pivots = [next(c for c, x in enumerate(row) if x != 0) for row in basis]
        v0 = _lowest_bit(face)
        apex = v.vertices[v0]
        total = Fraction(0)
        for f in lat.facets(face):
            if (f >> v0) & 1:
                continue
            fbase, fbasis = lat.chart(f, k - 1)
            rows = [[row[c] for c in pivots] for row in fbasis]
            rows.append([apex[c] - fbase[c] for c in pivots])
            total += abs(_rat_det(rows)) * pvol(f, k - 1)
        total /= k
        memo[face] = total
        return total

    full = (1 << len(v.vertices)) - 1
    return pvol(full, d)


def _rat_det(rows: list[list[Fraction]]) -> Fraction:
    # Common denominator per row, integer Bareiss.
    scale = 1
    ints = []
    for r in rows:
        l = 1
        for x in r:
            q = x.denominator
            if q != 1:
                l = l // gcd(l, q) * q
        scale *= l
        ints.append([x.numerator * (l // x.denominator) for x in r])
    return Fraction(int_determinant(ints), scale)


def volume(p) -> Fraction:
    """Exact d-volume; 0 for empty or lower-dimensional input."""
    v = p if isinstance(p, VPolytope) else vertex_enumerate(p)
    if v.is_empty or _affine_dim(v.vertices) < v.ambient_dim:
        return Fraction(0)
    return _vpolytope_volume(v)


# ---------------------------------------------------------------------------
# text format


def format_polytope(p: HPolytope, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"dim {p.ambient_dim}")
    for row in p.tuples():
        lines.append(" ".join(format_rational(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_polytope(text: str) -> HPolytope:
    dim: Optional[int] = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim":
                raise PolytopeParseError(lineno, "expected 'dim n'")
            try:
                dim = int(parts[1])
            except ValueError:
                raise PolytopeParseError(lineno, f"bad dimension {parts[1]!r}") from None
            if dim < 1:
                raise PolytopeParseError(lineno, "dimension must be positive")
            continue
        parts = line.split()
        if len(parts) != dim + 1:
            raise PolytopeParseError(lineno, f"expected {dim + 1} values, got {len(parts)}")
        try:
            rows.append([parse_rational(x) for x in parts])
        except (ValueError, ZeroDivisionError) as exc:
            raise PolytopeParseError(lineno, str(exc)) from None
    if dim is None:
        raise PolytopeParseError(0, "missing 'dim n' header")
    return HPolytope.from_tuples(dim, rows)


def read_polytope(path) -> HPolytope:
    with open(path) as fh:
        return parse_polytope(fh.read())


def write_polytope(p: HPolytope, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(format_polytope(p, comments))
