"""Downward-closed convex polytopes in [0,1]^n, exactly.

A :class:`DcPolytope` is stored through its canonical generators: the
unique antichain of extreme points ``V`` with ``P = dwc(conv(V))``. Since
that antichain is unique, two polytopes are equal iff their sorted generator
tuples are equal, which makes polytopes cheap to hash and deduplicate.

Two-dimensional polytopes (the common case) go through a staircase-chain
fast path; other dimensions use exact linear programming and brute-force
vertex enumeration, which is fine for n <= 4.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, InfeasibleSystemError, ResourceLimitError, ValidationError
from .lp import in_dominated_hull, max_uniform_slack
from .model import as_fraction

Point = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class Limits:
    max_generators: int = 10_000
    max_facets: int = 10_000


LIMITS = Limits()


@dataclass(frozen=True)
class HalfSpace:
    """The constraint ``normal . x <= offset``."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        if not any(self.normal):
            raise ValidationError("half-space normal must be non-zero")

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.normal, x)), ZERO)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.value(x) <= self.offset

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.normal):
            if a:
                terms.append(f"{'' if a == 1 else a}x{i + 1}")
        return " + ".join(terms) + f" <= {self.offset}"


def box_constraints(dim: int) -> list[HalfSpace]:
    out = []
    for i in range(dim):
        e = tuple(ONE if j == i else ZERO for j in range(dim))
        out.append(HalfSpace(e, ONE))
        out.append(HalfSpace(tuple(-v for v in e), ZERO))
    return out


def _is_box(h: HalfSpace) -> bool:
    return h.offset == 1 and sum(1 for a in h.normal if a) == 1 and max(h.normal) == 1


def _primitive(normal: Sequence[Fraction], offset: Fraction) -> HalfSpace:
    """Scale to coprime integers."""
    values = list(normal) + [offset]
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in values]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    g = g or 1
    return HalfSpace(tuple(Fraction(v // g) for v in ints[:-1]), Fraction(ints[-1] // g))


@dataclass(frozen=True)
class DcPolytope:
    """dwc(conv(generators)) in [0,1]^dim, generators canonical and sorted.

    Build instances with :func:`canonicalize` (or the operators below);
    the constructor trusts its input.
    """

    dim: int
    generators: tuple

    @cached_property
    def upper(self) -> tuple:
        """Componentwise maximum over the polytope."""
        return tuple(max(g[i] for g in self.generators) for i in range(self.dim))

    @cached_property
    def facets(self) -> tuple:
        return tuple(_compute_facets(self))

    def __contains__(self, x) -> bool:
        return contains_point(self, x)

    def __repr__(self) -> str:
        gens = ", ".join("(" + ",".join(str(v) for v in g) + ")" for g in self.generators)
        return f"dwc{{{gens}}}"

    def to_json(self) -> dict:
        return {"dim": self.dim, "generators": [[str(v) for v in g] for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "DcPolytope":
        gens = [tuple(Fraction(v) for v in g) for g in data["generators"]]
        return canonicalize(gens, dim=data["dim"])


def point(*coords) -> Point:
    return tuple(as_fraction(c) for c in coords)


def zero(dim: int) -> DcPolytope:
    return DcPolytope(dim, ((ZERO,) * dim,))


def full(dim: int) -> DcPolytope:
    return DcPolytope(dim, ((ONE,) * dim,))


def dwc(*points, dim: Optional[int] = None) -> DcPolytope:
    """Shorthand: ``dwc((1, 0), (0, 1))``; coordinates may be strings."""
    return canonicalize([tuple(as_fraction(c) for c in p) for p in points], dim=dim)


# -- canonicalisation -----------------------------------------------------------


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chain2d(points: Iterable[Point]) -> tuple:
    """Pareto-maximal upper-right concave chain, x ascending."""
    pts = sorted(set(points), key=lambda p: (-p[0], -p[1]))
    pareto = []
    best = None
    for p in pts:
        if best is None or p[1] > best:
            pareto.append(p)
            best = p[1]
    pareto.reverse()
    hull: list = []
    for p in pareto:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    return tuple(hull)


def _pareto_filter(points: Sequence[Point]) -> list:
    pts = sorted(set(points), reverse=True)
    kept: list = []
    for p in pts:
        # anything dominating p sorts before it
        if not any(all(a >= b for a, b in zip(q, p)) for q in kept):
            kept.append(p)
    return kept


def _canonical_general(points: Sequence[Point]) -> tuple:
    current = _pareto_filter(points)
    i = 0
    while i < len(current) and len(current) > 1:
        others = current[:i] + current[i + 1:]
        if in_dominated_hull(current[i], others):
            current = others
        else:
            i += 1
    return tuple(sorted(current))


def _check_points(points, dim) -> tuple[list, int]:
    pts = [tuple(p) for p in points]
    if not pts:
        raise ValidationError("canonicalize needs at least one point")
    d = len(pts[0]) if dim is None else dim
    for p in pts:
        if len(p) != d:
            raise DimensionError(f"point {p} does not have dimension {d}")
        for v in p:
            if not isinstance(v, Fraction):
                raise ValidationError(f"coordinate {v!r} is not a Fraction")
            if not 0 <= v <= 1:
                raise ValidationError(f"coordinate {v} outside [0,1]")
    return pts, d


def _make(dim: int, gens: tuple) -> DcPolytope:
    if len(gens) > LIMITS.max_generators:
        raise ResourceLimitError(
            f"polytope has {len(gens)} generators (limit {LIMITS.max_generators})"
        )
    return DcPolytope(dim, gens)


def _canonical(points, dim: int) -> DcPolytope:
    if dim == 2:
        return _make(2, _chain2d(points))
    return _make(dim, _canonical_general(list(points)))


def canonicalize(points: Iterable[Point], dim: Optional[int] = None) -> DcPolytope:
    """Canonical polytope ``dwc(conv(points))``; idempotent on generator sets."""
    pts, d = _check_points(points, dim)
    return _canonical(pts, d)


def canonicalize_general(points: Iterable[Point], dim: Optional[int] = None) -> DcPolytope:
    """LP-only canonicalisation in every dimension (reference route for 2-D)."""
    pts, d = _check_points(points, dim)
    return _make(d, _canonical_general(pts))


# -- membership -----------------------------------------------------------------


def _check_dims(*items) -> int:
    dims = {p.dim if isinstance(p, DcPolytope) else len(p) for p in items}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def _as_point(x) -> Point:
    return tuple(as_fraction(v) for v in x)


def _contains2d(gens, x) -> bool:
    if x[0] > gens[-1][0] or x[1] > gens[0][1]:
        return False
    if x[0] < 0 or x[1] < 0:
        return False
    for a, b in zip(gens, gens[1:]):
        if _cross(a, b, x) > 0:
            return False
    return True


def _strict2d(gens, x) -> bool:
    if not (x[0] < gens[-1][0] and x[1] < gens[0][1]):
        return False
    for a, b in zip(gens, gens[1:]):
        if _cross(a, b, x) >= 0:
            return False
    return True


def contains_point(p: DcPolytope, x) -> bool:
    """Is ``x`` dominated by a convex combination of generators?"""
    x = _as_point(x)
    _check_dims(p, x)
    if any(v < 0 for v in x):
        return False
    if any(a > b for a, b in zip(x, p.upper)):
        return False
    if p.dim == 2:
        return _contains2d(p.generators, x)
    if p.dim == 1 or len(p.generators) == 1:
        return True  # bounded by ``upper`` already
    if any(all(a <= b for a, b in zip(x, g)) for g in p.generators):
        return True
    return in_dominated_hull(x, p.generators)


def contains_point_lp(p: DcPolytope, x) -> bool:
    """LP-only membership (reference route)."""
    x = _as_point(x)
    _check_dims(p, x)
    if any(v < 0 for v in x):
        return False
    return in_dominated_hull(x, p.generators)


def contains_strictly(p: DcPolytope, x) -> bool:
    """Is there ``y`` in ``p`` with ``y_i > x_i`` for every i?"""
    x = _as_point(x)
    _check_dims(p, x)
    if any(a >= b for a, b in zip(x, p.upper)):
        return False
    if p.dim == 2:
        return _strict2d(p.generators, x)
    if p.dim == 1:
        return True
    slack = max_uniform_slack(x, p.generators)
    return slack is not None and slack > 0


def contains_strictly_lp(p: DcPolytope, x) -> bool:
    x = _as_point(x)
    _check_dims(p, x)
    slack = max_uniform_slack(x, p.generators)
    return slack is not None and slack > 0


def satisfies_facets(p: DcPolytope, x) -> bool:
    """Membership through the half-space description."""
    x = _as_point(x)
    _check_dims(p, x)
    if any(v < 0 or v > 1 for v in x):
        return False
    return all(h.contains(x) for h in p.facets)


def includes(p: DcPolytope, q: DcPolytope) -> bool:
    """``q`` is a subset of ``p``."""
    _check_dims(p, q)
    if p is q or p == q:
        return True
    if any(a > b for a, b in zip(q.upper, p.upper)):
        return False
    return all(contains_point(p, g) for g in q.generators)


# -- half-space <-> vertex conversions -------------------------------------------


def _solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[list]:
    """Solve a square system exactly; None when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        pr = m[c]
        inv = 1 / pr[c]
        pr = m[c] = [v * inv for v in pr]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], pr)]
    return [m[r][n] for r in range(n)]


def _rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][c] != 0:
                f = rows[r][c] / pr[c]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    return rank


def _enumerate_vertices(normals: Sequence[Sequence[Fraction]], offsets: Sequence[Fraction], dim: int) -> set:
    """All vertices of {x : normals . x <= offsets} by brute force over
    dim-subsets of tight constraints."""
    found = set()
    rows = [tuple(r) for r in normals]
    for idx in itertools.combinations(range(len(rows)), dim):
        sol = _solve([rows[i] for i in idx], [offsets[i] for i in idx])
        if sol is None:
            continue
        if all(sum((a * b for a, b in zip(r, sol)), ZERO) <= o for r, o in zip(rows, offsets)):
            found.add(tuple(sol))
    return found


def vertices_of(halfspaces: Sequence[HalfSpace], dim: Optional[int] = None) -> set:
    """Vertices of the half-space system intersected with the unit box."""
    halfspaces = list(halfspaces)
    if dim is None:
        if not halfspaces:
            raise ValueError("dimension required for an empty system")
        dim = len(halfspaces[0].normal)
    for h in halfspaces:
        if len(h.normal) != dim:
            raise DimensionError("half-spaces of mixed dimension")
    system = list(dict.fromkeys(halfspaces + box_constraints(dim)))
    verts = _enumerate_vertices([h.normal for h in system], [h.offset for h in system], dim)
    if not verts:
        raise InfeasibleSystemError("half-space system is empty")
    return verts


def _facets2d(gens) -> list:
    out = []
    for a, b in zip(gens, gens[1:]):
        normal = (a[1] - b[1], b[0] - a[0])
        out.append(_primitive(normal, normal[0] * a[0] + normal[1] * a[1]))
    last, first = gens[-1], gens[0]
    single = len(gens) == 1
    if single or last[1] > 0:
        out.append(_primitive((ONE, ZERO), last[0]))
    if single or first[0] > 0:
        out.append(_primitive((ZERO, ONE), first[1]))
    return out


def _facets_general(p: DcPolytope) -> list:
    dim = p.dim
    support = [i for i in range(dim) if p.upper[i] > 0]
    out = []
    for i in range(dim):
        if i not in support:
            out.append(HalfSpace(tuple(ONE if j == i else ZERO for j in range(dim)), ZERO))
    d = len(support)
    if d == 0:
        return out
    gens = [tuple(g[i] for i in support) for g in p.generators]
    # polar-like region {w >= 0 : w . g <= 1}; its non-zero vertices are
    # candidate facets w . x <= 1
    normals = [g for g in gens] + [
        tuple(-ONE if j == i else ZERO for j in range(d)) for i in range(d)
    ]
    offsets = [ONE] * len(gens) + [ZERO] * d
    zeroings = set()
    for g in gens:
        for mask in itertools.product((0, 1), repeat=d):
            zeroings.add(tuple(v if keep else ZERO for v, keep in zip(g, mask)))
    for w in _enumerate_vertices(normals, offsets, d):
        if not any(w):
            continue
        tight = [z for z in zeroings if sum((a * b for a, b in zip(w, z)), ZERO) == 1]
        if len(tight) < d:
            continue
        base = tight[0]
        if _rank([[a - b for a, b in zip(z, base)] for z in tight[1:]]) < d - 1:
            continue
        full_normal = [ZERO] * dim
        for j, i in enumerate(support):
            full_normal[i] = w[j]
        out.append(_primitive(full_normal, ONE))
    return out


def _compute_facets(p: DcPolytope) -> list:
    raw = _facets2d(p.generators) if p.dim == 2 else _facets_general(p)
    out = sorted(
        {h for h in raw if not _is_box(h)},
        key=lambda h: (h.normal, h.offset),
    )
    if len(out) > LIMITS.max_facets:
        raise ResourceLimitError(f"polytope has {len(out)} facets (limit {LIMITS.max_facets})")
    return out


def dual_representation(p: DcPolytope) -> list:
    """Non-box facets; together with ``0 <= x <= 1`` they carve out ``p``."""
    return list(p.facets)


def facets_general(p: DcPolytope) -> list:
    """Facets through the LP/polar route in every dimension (reference for 2-D)."""
    return sorted({h for h in _facets_general(p) if not _is_box(h)}, key=lambda h: (h.normal, h.offset))


# -- the four operators -----------------------------------------------------------


def _height2d(gens, xs, t) -> Fraction:
    """Upper boundary of a 2-D staircase at abscissa ``t`` (t <= max x)."""
    if t <= xs[0]:
        return gens[0][1]
    i = bisect.bisect_left(xs, t)
    if xs[i] == t:
        return gens[i][1]
    a, b = gens[i - 1], gens[i]
    return a[1] + (b[1] - a[1]) * (t - a[0]) / (b[0] - a[0])


def _intersect2d(p: DcPolytope, q: DcPolytope) -> DcPolytope:
    gp, gq = p.generators, q.generators
    xp, xq = [g[0] for g in gp], [g[0] for g in gq]
    limit = min(xp[-1], xq[-1])
    ts = sorted({ZERO, limit} | {x for x in xp + xq if x <= limit})
    pts = []
    prev = None
    for t in ts:
        hp, hq = _height2d(gp, xp, t), _height2d(gq, xq, t)
        pts.append((t, min(hp, hq)))
        diff = hp - hq
        if prev is not None:
            t0, d0 = prev
            if (d0 < 0 < diff) or (diff < 0 < d0):
                tc = t0 + (t - t0) * d0 / (d0 - diff)
                pts.append((tc, _height2d(gp, xp, tc)))
        prev = (t, diff)
    return _make(2, _chain2d(pts))


def _intersect_general(p: DcPolytope, q: DcPolytope) -> DcPolytope:
    system = list(p.facets) + list(q.facets)
    verts = vertices_of(system, p.dim) if system else vertices_of([], p.dim)
    return _make(p.dim, _canonical_general(list(verts)))


def intersect(p: DcPolytope, q: DcPolytope) -> DcPolytope:
    dim = _check_dims(p, q)
    if p == q:
        return p
    if includes(p, q):
        return q
    if includes(q, p):
        return p
    if dim == 2:
        return _intersect2d(p, q)
    return _intersect_general(p, q)


def intersect_general(p: DcPolytope, q: DcPolytope) -> DcPolytope:
    """Facet-concatenation intersection in every dimension (reference for 2-D)."""
    _check_dims(p, q)
    system = list(facets_general(p)) + list(facets_general(q))
    verts = vertices_of(system, p.dim)
    return _make(p.dim, _canonical_general(list(verts)))


def intersect_all(ps: Sequence[DcPolytope]) -> DcPolytope:
    ps = list(ps)
    if not ps:
        raise ValueError("intersection of an empty family")
    _check_dims(*ps)
    return reduce(intersect, ps)


def convex_union(ps: Sequence[DcPolytope]) -> DcPolytope:
    ps = list(ps)
    if not ps:
        raise ValueError("convex union of an empty family")
    dim = _check_dims(*ps)
    if len(ps) == 1:
        return ps[0]
    return _canonical([g for p in ps for g in p.generators], dim)


def weighted_sum(terms: Sequence[tuple[Fraction, DcPolytope]]) -> DcPolytope:
    """Minkowski combination ``sum_j w_j P_j`` with weights summing to 1."""
    terms = [(as_fraction(w), p) for w, p in terms]
    if not terms:
        raise ValueError("weighted sum of an empty family")
    dim = _check_dims(*(p for _, p in terms))
    for w, _ in terms:
        if not 0 < w <= 1:
            raise ValidationError(f"weight {w} not in (0,1]")
    if sum(w for w, _ in terms) != 1:
        raise ValidationError("weights must sum to 1")
    if len(terms) == 1:
        return terms[0][1]
    w0, p0 = terms[0]
    acc = [tuple(w0 * v for v in g) for g in p0.generators]
    for w, p in terms[1:]:
        scaled = [tuple(w * v for v in g) for g in p.generators]
        combos = [tuple(a + b for a, b in zip(x, y)) for x in acc for y in scaled]
        acc = list(_canonical(combos, dim).generators)
    return _make(dim, tuple(acc))


# -- sets of polytopes ---------------------------------------------------------------


def dedupe(ps: Iterable[DcPolytope]) -> tuple:
    return tuple(dict.fromkeys(ps))


def minimize_antichain(ps: Iterable[DcPolytope]) -> tuple:
    """Keep the inclusion-minimal elements (order preserved)."""
    items = dedupe(ps)
    if len(items) <= 1:
        return items
    keep = []
    for i, p in enumerate(items):
        if not any(j != i and includes(p, q) for j, q in enumerate(items)):
            keep.append(p)
    return tuple(keep)


def set_to_json(ps: Iterable[DcPolytope]) -> list:
    return [p.to_json() for p in ps]


def set_from_json(data: list) -> tuple:
    return dedupe(DcPolytope.from_json(d) for d in data)
