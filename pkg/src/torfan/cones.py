"""Exact lattice-cone algebra in 3-space.

Cones are strongly convex (pointed) rational polyhedral cones given by their
primitive extremal rays.  Everything is decided with integer determinants or
exact fractions; cones handed to the semigroup routines (irreducibility,
Hilbert bases) must live in the non-negative octant, which is where the
componentwise decomposition search is valid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, int, int]

ZERO: Vec = (0, 0, 0)


def dot(a: Vec, b: Vec) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vneg(a: Vec) -> Vec:
    return (-a[0], -a[1], -a[2])


def unimodular_det(v1: Vec, v2: Vec, v3: Vec) -> int:
    """Exact determinant of the 3x3 matrix with columns v1, v2, v3."""
    return dot(v1, cross(v2, v3))


def primitive(v: Sequence[int]) -> Vec:
    """Divide out the gcd of the coordinates; error on the zero vector."""
    t = (int(v[0]), int(v[1]), int(v[2]))
    g = gcd(gcd(abs(t[0]), abs(t[1])), abs(t[2]))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return (t[0] // g, t[1] // g, t[2] // g)


def _rank(vectors: Sequence[Vec]) -> int:
    vs = [v for v in vectors if v != ZERO]
    if not vs:
        return 0
    for a, b, c in combinations(vs, 3):
        if unimodular_det(a, b, c) != 0:
            return 3
    for a, b in combinations(vs, 2):
        if cross(a, b) != ZERO:
            return 2
    return 1


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination; unique solution of rows*x=rhs or None."""
    m, n = len(rows), len(rows[0])
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if len(pivots) < n:
        return None  # underdetermined; caller relies on smaller subsets
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = aug[i][n]
    return sol


def _zero_in_convex_hull(points: Sequence[Vec]) -> bool:
    """Exact test, by Caratheodory over affinely independent subsets."""
    pts = list(dict.fromkeys(points))
    if ZERO in pts:
        return True
    for k in (2, 3, 4):
        for subset in combinations(pts, k):
            rows = [[Fraction(p[i]) for p in subset] for i in range(3)]
            rows.append([Fraction(1)] * k)
            lam = _solve_exact(rows, [Fraction(0), Fraction(0), Fraction(0), Fraction(1)])
            if lam is not None and all(l >= 0 for l in lam):
                return True
    return False


def _in_cone_span(v: Vec, gens: Sequence[Vec]) -> bool:
    """Is v a non-negative rational combination of gens?  (Caratheodory.)"""
    if v == ZERO:
        return True
    for g in gens:
        if cross(v, g) == ZERO and dot(v, g) > 0:
            return True
    for g1, g2 in combinations(gens, 2):
        n = cross(g1, g2)
        if n == ZERO or dot(n, v) != 0:
            continue
        for i, j in ((0, 1), (0, 2), (1, 2)):
            d = g1[i] * g2[j] - g1[j] * g2[i]
            if d:
                da = v[i] * g2[j] - v[j] * g2[i]
                db = g1[i] * v[j] - g1[j] * v[i]
                if da * d >= 0 and db * d >= 0:
                    return True
                break  # representation in this pair is unique
    for g1, g2, g3 in combinations(gens, 3):
        d = unimodular_det(g1, g2, g3)
        if d == 0:
            continue
        d1 = unimodular_det(v, g2, g3)
        d2 = unimodular_det(g1, v, g3)
        d3 = unimodular_det(g1, g2, v)
        if d > 0:
            if d1 >= 0 and d2 >= 0 and d3 >= 0:
                return True
        elif d1 <= 0 and d2 <= 0 and d3 <= 0:
            return True
    return False


def extremal_rays(vectors: Iterable[Sequence[int]]) -> tuple[Vec, ...]:
    """Minimal primitive generating set of the pointed cone spanned by vectors."""
    rays: list[Vec] = []
    for v in vectors:
        t = (int(v[0]), int(v[1]), int(v[2]))
        if t == ZERO:
            continue
        p = primitive(t)
        if p not in rays:
            rays.append(p)
    if not rays:
        return ()
    if _zero_in_convex_hull(rays):
        raise ValueError("generators span a non-pointed cone")
    kept = [g for g in rays if not _in_cone_span(g, [h for h in rays if h != g])]
    return tuple(sorted(kept))


@dataclass(frozen=True)
class Cone:
    """Pointed rational cone; ``generators`` are its primitive extremal rays.

    For 3-dimensional cones ``facet_normals[i]`` is the primitive inner normal
    of the 2-face spanned by the ray pair ``facets[i]`` (indices into
    ``generators``); membership is the conjunction of those inequalities.
    ``plane_normal`` is set for 2-dimensional cones only.
    """

    generators: tuple[Vec, ...]
    dim: int
    facet_normals: tuple[Vec, ...] = ()
    facets: tuple[tuple[int, int], ...] = ()
    plane_normal: Vec | None = None

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[int]]) -> "Cone":
        gens = extremal_rays(vectors)
        if not gens:
            raise ValueError("a cone needs at least one nonzero generator")
        dim = _rank(gens)
        if dim == 3:
            normals, pairs = _facet_data(gens)
            return cls(gens, dim, normals, pairs, None)
        if dim == 2:
            n = primitive(cross(gens[0], gens[1]))
            return cls(gens, dim, (), ((0, 1),), n)
        return cls(gens, dim, (), (), None)

    def is_simplicial(self) -> bool:
        return len(self.generators) == self.dim

    def contains(self, v: Sequence[int]) -> bool:
        t = (int(v[0]), int(v[1]), int(v[2]))
        if t == ZERO:
            return True
        if self.dim == 3:
            return all(dot(n, t) >= 0 for n in self.facet_normals)
        if self.dim == 2:
            n = self.plane_normal
            if dot(n, t) != 0:
                return False
            g1, g2 = self.generators
            return dot(cross(g1, t), n) >= 0 and dot(cross(t, g2), n) >= 0
        g = self.generators[0]
        return cross(t, g) == ZERO and dot(t, g) > 0

    def interior_point(self) -> Vec:
        """An integer point in the relative interior (the ray sum)."""
        s = ZERO
        for g in self.generators:
            s = vadd(s, g)
        return s

    def in_octant(self) -> bool:
        return all(c >= 0 for g in self.generators for c in g)

    def __str__(self) -> str:
        inner = ",".join("(%d,%d,%d)" % g for g in self.generators)
        return f"<{inner}>"


def _facet_data(gens: tuple[Vec, ...]) -> tuple[tuple[Vec, ...], tuple[tuple[int, int], ...]]:
    normals: list[Vec] = []
    pairs: list[tuple[int, int]] = []
    for (i, g1), (j, g2) in combinations(enumerate(gens), 2):
        n = cross(g1, g2)
        if n == ZERO:
            continue
        values = [dot(n, g) for g in gens]
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            n = vneg(n)
        else:
            continue
        n = primitive(n)
        if n in normals:
            continue
        normals.append(n)
        pairs.append((i, j))
    order = sorted(range(len(normals)), key=lambda k: normals[k])
    return (
        tuple(normals[k] for k in order),
        tuple(pairs[k] for k in order),
    )


def contains(c: Cone, v: Sequence[int]) -> bool:
    return c.contains(v)


def is_regular(c: Cone) -> bool:
    """Unimodularity; non-simplicial cones are reported as not regular."""
    if not c.is_simplicial():
        return False
    if c.dim == 3:
        return abs(unimodular_det(*c.generators)) == 1
    if c.dim == 2:
        g1, g2 = c.generators
        minors = cross(g1, g2)  # the three 2x2 minors up to sign
        return gcd(gcd(abs(minors[0]), abs(minors[1])), abs(minors[2])) == 1
    return True  # a primitive ray extends to a lattice basis


def triangulate(c: Cone, apex: str = "lexmin") -> tuple[Cone, ...]:
    """Split into simplicial cones by fanning boundary facets out of one ray.

    ``apex`` picks the distinguished ray ("lexmin" or "lexmax"); the result is
    deterministic and face-to-face.  Simplicial cones come back unchanged.
    """
    if c.is_simplicial():
        return (c,)
    if c.dim != 3:
        raise ValueError("non-simplicial cones of dimension < 3 cannot be pointed")
    if apex == "lexmin":
        v0 = min(c.generators)
    elif apex == "lexmax":
        v0 = max(c.generators)
    else:
        raise ValueError(f"unknown apex rule {apex!r}")
    i0 = c.generators.index(v0)
    pieces = []
    for i, j in c.facets:
        if i0 in (i, j):
            continue
        pieces.append(Cone.from_generators((v0, c.generators[i], c.generators[j])))
    return tuple(sorted(pieces, key=lambda p: p.generators))


def _box_range(gens: Sequence[Vec], coordinate: int) -> range:
    lo = sum(min(0, g[coordinate]) for g in gens)
    hi = sum(max(0, g[coordinate]) for g in gens)
    return range(lo, hi + 1)


def parallelepiped_points(c: Cone) -> tuple[Vec, ...]:
    """Lattice points of {sum t_i * g_i : 0 <= t_i <= 1} for a simplicial cone."""
    if not c.is_simplicial():
        raise ValueError("parallelepiped needs a simplicial cone; triangulate first")
    gens = c.generators
    if c.dim == 1:
        return tuple(sorted({ZERO, gens[0]}))
    boxes = [_box_range(gens, i) for i in range(3)]
    points: list[Vec] = []
    if c.dim == 3:
        g1, g2, g3 = gens
        d = unimodular_det(g1, g2, g3)
        s = 1 if d > 0 else -1
        bound = s * d
        n1, n2, n3 = cross(g2, g3), cross(g3, g1), cross(g1, g2)
        for u in product(*boxes):
            if (
                0 <= s * dot(u, n1) <= bound
                and 0 <= s * dot(u, n2) <= bound
                and 0 <= s * dot(u, n3) <= bound
            ):
                points.append(u)
    else:
        g1, g2 = gens
        n = cross(g1, g2)
        k = dot(n, n)  # cross(g1,g2).n, positive
        for u in product(*boxes):
            if dot(n, u) != 0:
                continue
            a = dot(cross(u, g2), n)
            b = dot(cross(g1, u), n)
            if 0 <= a <= k and 0 <= b <= k:
                points.append(u)
    return tuple(sorted(points))


def _require_octant_semigroup(c: Cone) -> None:
    if not c.in_octant():
        raise ValueError(
            "semigroup operations require a cone inside the non-negative octant"
        )


def is_irreducible(c: Cone, v: Sequence[int]) -> bool:
    """No way to write v as a sum of two nonzero lattice points of the cone.

    Valid for cones in the octant: both summands of any decomposition are then
    componentwise between 0 and v, so a bounded search is complete.
    """
    t = (int(v[0]), int(v[1]), int(v[2]))
    if t == ZERO:
        raise ValueError("the zero vector is not in the semigroup")
    if not c.contains(t):
        raise ValueError(f"{t} is not in the cone")
    _require_octant_semigroup(c)
    half = sum(t)  # decompositions have a part of weight <= sum(v)/2
    for a in product(range(t[0] + 1), range(t[1] + 1), range(t[2] + 1)):
        if a == ZERO or a == t or 2 * sum(a) > half:
            continue
        if c.contains(a) and c.contains(vsub(t, a)):
            return False
    return True


@dataclass(frozen=True)
class HilbertBasis:
    """Minimal generating set of cone ∩ Z^3, sorted lexicographically."""

    cone: Cone
    elements: tuple[Vec, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def hilbert_basis(c: Cone, apex: str = "lexmin") -> HilbertBasis:
    """Irreducible lattice points of a pointed cone in the octant.

    Candidates come from the parallelepipeds of a triangulation (every
    irreducible point of the cone is irreducible in the piece containing it,
    hence lies in that piece's parallelepiped); the result is independent of
    ``apex``, which only changes the candidate superset.
    """
    _require_octant_semigroup(c)
    candidates: set[Vec] = set()
    for piece in triangulate(c, apex=apex):
        candidates.update(parallelepiped_points(piece))
    candidates.discard(ZERO)

    # Reducibility is checked against all cone points in the candidate box;
    # any decomposition v = a + b has a, b <= v componentwise, and the box
    # [0, componentwise sum of generators] contains every candidate.
    box = [_box_range(c.generators, i) for i in range(3)]
    cone_points = [u for u in product(*box) if u != ZERO and c.contains(u)]
    by_weight: dict[int, list[Vec]] = {}
    for u in cone_points:
        by_weight.setdefault(sum(u), []).append(u)
    point_set = set(cone_points)

    elements = []
    for v in sorted(candidates):
        w = sum(v)
        reducible = False
        for weight in sorted(by_weight):
            if 2 * weight > w:
                break
            for a in by_weight[weight]:
                if a != v and a[0] <= v[0] and a[1] <= v[1] and a[2] <= v[2]:
                    rest = vsub(v, a)
                    if rest != ZERO and rest in point_set:
                        reducible = True
                        break
            if reducible:
                break
        if not reducible:
            elements.append(v)
    return HilbertBasis(c, tuple(elements))


_CONE_TEXT = re.compile(r"^\s*<\s*(.*?)\s*>\s*$", re.S)
_VECTOR_TEXT = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_cone(text: str) -> Cone:
    """Parse cone text like ``"<(0,0,1),(1,0,2),(0,1,2),(2,7,4)>"``."""
    m = _CONE_TEXT.match(text)
    if not m:
        raise ValueError(f"cone text must look like <(a,b,c),...>: {text!r}")
    body = m.group(1)
    vectors = [tuple(int(g) for g in v) for v in _VECTOR_TEXT.findall(body)]
    remainder = _VECTOR_TEXT.sub("", body).replace(",", "").strip()
    if not vectors or remainder:
        raise ValueError(f"malformed cone text: {text!r}")
    return Cone.from_generators(vectors)
