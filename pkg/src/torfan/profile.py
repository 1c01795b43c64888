"""Profiles of lattice cones and their bounding hyperplanes.

The profile of a cone is the region between the origin and the convex hull
of the primitive generators: for a simplicial cone it is cut out by the
single functional taking value 1 on every generator, otherwise by the
facets of conv({0} ∪ generators) that miss the origin.  Bounding
functionals are oriented so that the inside satisfies ℓ ≤ 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Sequence

from .cones import Cone, Vec, ZERO, _solve_exact, cross, dot, vsub
from .polyparse import parse_polynomial

_ONE = Fraction(1)


@dataclass(frozen=True)
class AffineFunctional:
    """a·x + b·y + c·z + d with exact rational coefficients."""

    coeffs: tuple[Fraction, Fraction, Fraction]
    constant: Fraction = Fraction(0)

    @classmethod
    def from_integers(cls, a: int, b: int, c: int, d: int = 0) -> "AffineFunctional":
        return cls((Fraction(a), Fraction(b), Fraction(c)), Fraction(d))

    def __call__(self, v: Sequence) -> Fraction:
        a, b, c = self.coeffs
        return a * v[0] + b * v[1] + c * v[2] + self.constant

    def negated(self) -> "AffineFunctional":
        a, b, c = self.coeffs
        return AffineFunctional((-a, -b, -c), -self.constant)

    def integer_primitive(self) -> "AffineFunctional":
        """Smallest positive multiple with integer coefficients."""
        parts = list(self.coeffs) + [self.constant]
        scale = 1
        for p in parts:
            scale = scale * p.denominator // gcd(scale, p.denominator)
        ints = [int(p * scale) for p in parts]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        if g > 1:
            ints = [x // g for x in ints]
        return AffineFunctional.from_integers(*ints)

    def __str__(self) -> str:
        out = []
        for coeff, name in zip(self.coeffs, "xyz"):
            if coeff == 0:
                continue
            sign = "-" if coeff < 0 else ("+" if out else "")
            mag = abs(coeff)
            body = name if mag == 1 else f"{mag}{name}"
            out.append(sign + body)
        if self.constant != 0 or not out:
            sign = "-" if self.constant < 0 else ("+" if out else "")
            out.append(sign + str(abs(self.constant)))
        return "".join(out)


def parse_functional(text: str) -> AffineFunctional:
    """Read an affine expression in x, y, z with integer coefficients, e.g. "4x-y-1"."""
    p = parse_polynomial(text)
    coeffs = [Fraction(0)] * 3
    constant = Fraction(0)
    for exponent, coeff in p:
        degree = sum(exponent)
        if degree == 0:
            constant = Fraction(coeff)
        elif degree == 1:
            coeffs[exponent.index(1)] = Fraction(coeff)
        else:
            raise ValueError(f"not an affine expression: {text!r}")
    return AffineFunctional(tuple(coeffs), constant)


def facet_equation(bounding: AffineFunctional) -> str:
    """Hyperplane text with the first nonzero coefficient positive, e.g. 8x-3y-3z+3."""
    f = bounding.integer_primitive()
    for part in (*f.coeffs, f.constant):
        if part > 0:
            return str(f)
        if part < 0:
            return str(f.negated())
    return str(f)


@dataclass(frozen=True)
class Profile:
    cone: Cone
    bounding: tuple[AffineFunctional, ...]
    kind: str  # "simplicial" | "convex-hull"


def l_functional(c: Cone) -> AffineFunctional:
    """The linear functional with value 1 on every generator (simplicial, 3-D)."""
    if c.dim != 3 or not c.is_simplicial():
        raise ValueError("l functional requires a full-dimensional simplicial cone")
    rows = [[Fraction(x) for x in g] for g in c.generators]
    sol = _solve_exact(rows, [_ONE, _ONE, _ONE])
    assert sol is not None  # rows are linearly independent
    return AffineFunctional(tuple(sol))


def _l_any_dim(c: Cone) -> AffineFunctional:
    if c.dim == 3:
        return l_functional(c)
    if c.dim == 2:
        g1, g2 = c.generators
        n = cross(g1, g2)
        rows = [[Fraction(x) for x in v] for v in (g1, g2, n)]
        sol = _solve_exact(rows, [_ONE, _ONE, Fraction(0)])
        assert sol is not None
        return AffineFunctional(tuple(sol))
    (g,) = c.generators
    scale = Fraction(1, dot(g, g))
    return AffineFunctional(tuple(Fraction(x) * scale for x in g))


def _hull_facets_off_origin(points: Sequence[Vec]) -> list[AffineFunctional]:
    """Facets of conv(points) not through 0, oriented inside ≤ 0."""
    seen = {}
    for p1, p2, p3 in combinations(points, 3):
        n = cross(vsub(p2, p1), vsub(p3, p1))
        if n == ZERO:
            continue
        offset = dot(n, p1)
        values = [dot(n, q) - offset for q in points]
        if any(v > 0 for v in values):
            if any(v < 0 for v in values):
                continue
            n = (-n[0], -n[1], -n[2])
            offset = -offset
        if offset == 0:
            continue  # facet through the origin bounds the cone, not the profile
        g = gcd(gcd(gcd(abs(n[0]), abs(n[1])), abs(n[2])), abs(offset))
        key = (n[0] // g, n[1] // g, n[2] // g, -offset // g)
        seen.setdefault(key, AffineFunctional.from_integers(*key))
    return sorted(seen.values(), key=lambda f: (f.coeffs, f.constant))


def profile(c: Cone) -> Profile:
    if c.is_simplicial():
        l = _l_any_dim(c)
        return Profile(c, (AffineFunctional(l.coeffs, l.constant - 1),), "simplicial")
    bounding = _hull_facets_off_origin([ZERO, *c.generators])
    return Profile(c, tuple(bounding), "convex-hull")


def contains_point(p: Profile, v: Sequence[int]) -> bool:
    return p.cone.contains(v) and all(f(v) <= 0 for f in p.bounding)


def profile_lattice_points(p: Profile) -> list[Vec]:
    box = [max(g[i] for g in p.cone.generators) for i in range(3)]
    out = []
    for v in product(*(range(b + 1) for b in box)):
        if v != ZERO and contains_point(p, v):
            out.append(v)
    return sorted(out)


@dataclass(frozen=True)
class SubprofileSpec:
    """Bounding hyperplanes inside a profile, as given per catalog family."""

    cone: Cone
    hyperplanes: tuple[AffineFunctional, ...]
    recomputed: bool = False

    def __post_init__(self):
        for h in self.hyperplanes:
            tight = sum(1 for g in self.cone.generators if h(g) == 0)
            if tight < 2:
                raise ValueError(
                    f"hyperplane {h} passes through {tight} generator(s); need >= 2"
                )


@dataclass(frozen=True)
class SubprofileEntry:
    vector: Vec
    reaches: tuple[int, ...]
    in_region: bool


@dataclass(frozen=True)
class SubprofileReport:
    spec: SubprofileSpec
    entries: tuple[SubprofileEntry, ...]
    all_reach: bool

    def to_obj(self) -> dict:
        return {
            "hyperplanes": [str(h) for h in self.spec.hyperplanes],
            "recomputed": self.spec.recomputed,
            "vectors": [
                {
                    "vector": list(e.vector),
                    "reaches": list(e.reaches),
                    "in_region": e.in_region,
                }
                for e in self.entries
            ],
            "all_reach": self.all_reach,
        }


def subprofile_check(
    spec: SubprofileSpec, vectors: Sequence[Sequence[int]]
) -> SubprofileReport:
    """Which hyperplanes each vector meets exactly, and an overall reach flag.

    Each hyperplane bounds the one-sided region containing the origin;
    ``in_region`` means membership in the union of those regions within the
    cone (the subprofile is a union of cones, one per hyperplane).
    """
    orientations = []
    for h in spec.hyperplanes:
        if h.constant == 0:
            raise ValueError(f"subprofile hyperplane {h} passes through the origin")
        orientations.append(-1 if h.constant > 0 else 1)
    entries = []
    for v in vectors:
        vec = (int(v[0]), int(v[1]), int(v[2]))
        values = [h(vec) for h in spec.hyperplanes]
        reaches = tuple(i for i, val in enumerate(values) if val == 0)
        in_region = spec.cone.contains(vec) and any(
            s * val <= 0 for s, val in zip(orientations, values)
        )
        entries.append(SubprofileEntry(vec, reaches, in_region))
    return SubprofileReport(
        spec, tuple(entries), all(e.reaches for e in entries)
    )
