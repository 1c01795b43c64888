"""Newton polyhedra with recession octant, and their dual fans.

NP(f) is the convex hull of support(f) + the non-negative octant; its normal
fan lives exactly on the octant (the recession cone is self-dual), so the
dual fan is complete there.  Maximal dual cones correspond to vertices of
NP(f), rays to facets, and strictly positive cones to compact faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .cones import (
    Cone,
    Vec,
    ZERO,
    _rank,
    cross,
    dot,
    primitive,
    triangulate,
    unimodular_det,
    vadd,
    vneg,
    vsub,
)
from .polyparse import Polynomial

E1: Vec = (1, 0, 0)
E2: Vec = (0, 1, 0)
E3: Vec = (0, 0, 1)


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Vertices, facet inequalities (w·x >= o), and compact faces of NP(f)."""

    vertices: tuple[Vec, ...]
    facets: tuple[tuple[Vec, int], ...]
    compact_faces: tuple[tuple[tuple[Vec, ...], int], ...]


@dataclass(frozen=True)
class FanCone:
    rays: tuple[int, ...]
    label: str | None = None


@dataclass(frozen=True)
class Fan:
    """Serializable fan: primitive rays (lex sorted) and cones by ray index."""

    rays: tuple[Vec, ...]
    cones: tuple[FanCone, ...]

    @classmethod
    def from_cones(
        cls, cones: Sequence[Cone], labels: Sequence[str | None] | None = None
    ) -> "Fan":
        rays = sorted({r for c in cones for r in c.generators})
        index = {r: i for i, r in enumerate(rays)}
        fan_cones = []
        for k, c in enumerate(cones):
            label = labels[k] if labels is not None else None
            fan_cones.append(
                FanCone(tuple(sorted(index[r] for r in c.generators)), label)
            )
        return cls(tuple(rays), tuple(sorted(fan_cones, key=lambda fc: (fc.rays, fc.label or ""))))

    def cone_objects(self) -> list[Cone]:
        return [
            Cone.from_generators([self.rays[i] for i in fc.rays]) for fc in self.cones
        ]

    def to_obj(self) -> dict:
        cones = []
        for fc in self.cones:
            entry: dict = {"rays": list(fc.rays)}
            if fc.label is not None:
                entry["label"] = fc.label
            cones.append(entry)
        return {"rays": [list(r) for r in self.rays], "cones": cones}

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_obj(cls, obj: dict) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in obj["rays"])
        if any(len(r) != 3 for r in rays):
            raise ValueError("fan rays must be 3-vectors")
        cones = []
        for entry in obj["cones"]:
            idx = tuple(int(i) for i in entry["rays"])
            if any(i < 0 or i >= len(rays) for i in idx):
                raise ValueError("cone ray index out of range")
            cones.append(FanCone(idx, entry.get("label")))
        return cls(rays, tuple(cones))

    @classmethod
    def from_json(cls, text: str) -> "Fan":
        return cls.from_obj(json.loads(text))


def _normal_cone_rays(s: Vec, support: Sequence[Vec]) -> list[Vec]:
    """Extremal rays of {w >= 0 : w·a >= w·s for all support points a}."""
    constraints = [E1, E2, E3] + [vsub(a, s) for a in support if a != s]
    rays: set[Vec] = set()
    for n1, n2 in combinations(constraints, 2):
        d = cross(n1, n2)
        if d == ZERO:
            continue
        for cand in (d, vneg(d)):
            if all(dot(n, cand) >= 0 for n in constraints):
                rays.add(primitive(cand))
    return sorted(rays)


def dual_newton_cones(p: Polynomial) -> list[tuple[Cone, Vec]]:
    """Maximal cones of the dual fan, each with the NP vertex it selects."""
    support = sorted(p.support())
    out = []
    for s in support:
        rays = _normal_cone_rays(s, support)
        if _rank(rays) == 3:
            out.append((Cone.from_generators(rays), s))
    return out


def fan_faces(maximal: Sequence[Cone]) -> list[tuple[tuple[Vec, ...], int]]:
    """All distinct non-zero faces of the cones in a fan, as (rays, dim)."""
    seen: dict[tuple[Vec, ...], int] = {}
    for c in maximal:
        seen.setdefault(tuple(sorted(c.generators)), c.dim)
        if c.dim == 3:
            for i, j in c.facets:
                seen.setdefault(
                    tuple(sorted((c.generators[i], c.generators[j]))), 2
                )
        for g in c.generators:
            seen.setdefault((g,), 1)
    return sorted(seen.items(), key=lambda t: (t[1], t[0]))


def newton_polyhedron(p: Polynomial) -> NewtonPolyhedron:
    support = sorted(p.support())
    cones = dual_newton_cones(p)
    vertices = tuple(s for _, s in cones)
    ray_union = sorted({r for c, _ in cones for r in c.generators})
    facets = tuple((w, min(dot(w, a) for a in support)) for w in ray_union)

    compact: list[tuple[tuple[Vec, ...], int]] = []
    for rays, cone_dim in fan_faces([c for c, _ in cones]):
        if cone_dim == 3:
            continue  # dual face is a vertex; those live in .vertices
        sample = ZERO
        for r in rays:
            sample = vadd(sample, r)
        if not all(x > 0 for x in sample):
            continue
        o = min(dot(sample, a) for a in support)
        tight = tuple(v for v in vertices if dot(sample, v) == o)
        face = (tight, 3 - cone_dim)
        if face not in compact:
            compact.append(face)
    compact.sort(key=lambda t: (t[1], t[0]))
    return NewtonPolyhedron(vertices, facets, tuple(compact))


def dual_newton_fan(p: Polynomial) -> Fan:
    cones = dual_newton_cones(p)
    return Fan.from_cones(
        [c for c, _ in cones], ["vertex (%d,%d,%d)" % s for _, s in cones]
    )


def _functional_value(v: Vec) -> int:
    return v[0] + v[1] + v[2]


def octant_solid_volume(cones: Iterable[Cone]) -> Fraction:
    """Exact volume of union-of-cones truncated by x+y+z <= 1 (tiling assumed)."""
    total = Fraction(0)
    for c in cones:
        for piece in triangulate(c):
            a, b, d = piece.generators
            det = abs(unimodular_det(a, b, d))
            total += Fraction(
                det, 6 * _functional_value(a) * _functional_value(b) * _functional_value(d)
            )
    return total


def _is_face_of(c: Cone, rays: Sequence[Vec]) -> bool:
    rs = set(rays)
    if not rs <= set(c.generators):
        return False
    if rs == set(c.generators):
        return True
    return any(all(dot(n, r) == 0 for r in rs) for n in c.facet_normals)


def fan_consistency_report(cones: Sequence[Cone]) -> dict:
    """Covering and face-to-face bookkeeping for maximal cones on the octant."""
    covering_ok = octant_solid_volume(cones) == Fraction(1, 6)
    face_fitting_ok = True
    for c1, c2 in combinations(cones, 2):
        shared = [r for r in c1.generators if c2.contains(r)]
        shared += [r for r in c2.generators if c1.contains(r) and r not in shared]
        if shared:
            if not (_is_face_of(c1, shared) and _is_face_of(c2, shared)):
                face_fitting_ok = False
        if c2.contains(c1.interior_point()) or c1.contains(c2.interior_point()):
            face_fitting_ok = False
    return {"covering_ok": covering_ok, "face_fitting_ok": face_fitting_ok}
