"""Weight orders, initial forms, Groebner fan, tropical variety, jets.

For a hypersurface the Groebner fan is the normal fan of the Newton
polyhedron, so its cones are taken straight from the dual fan machinery
and only the labels (initial forms) are computed here.  Weights live in
the closed octant: the catalog cones use boundary rays such as (0,1,2),
so equivalence-class closures are restricted to w >= 0 rather than taken
over strictly positive weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .cones import Cone, Vec, dot
from .newton import Fan, dual_newton_cones, fan_faces
from .polyparse import Polynomial


def w_order(p: Polynomial, w: Sequence[int]) -> int:
    """Minimum of w . a over the support of p."""
    if len(p) == 0:
        raise ValueError("the zero polynomial has no w-order")
    t = (int(w[0]), int(w[1]), int(w[2]))
    return min(dot(t, e) for e in p.support())


def initial_form(p: Polynomial, w: Sequence[int]) -> Polynomial:
    """Sub-sum of the terms of p attaining the w-order, coefficients kept."""
    if len(p) == 0:
        raise ValueError("the zero polynomial has no initial form")
    t = (int(w[0]), int(w[1]), int(w[2]))
    o = min(dot(t, e) for e in p.support())
    return p.restricted_to(e for e in p.support() if dot(t, e) == o)


@dataclass(frozen=True)
class GroebnerCone:
    """Closure of a weight equivalence class, with its shared initial form."""

    cone: Cone
    initial_form: Polynomial


def groebner_fan(p: Polynomial) -> list[GroebnerCone]:
    """All octant-restricted Groebner cones of p.

    Weights are equivalent when they pick the same initial form, and a
    Groebner cone is the closure of one equivalence class.  The dual fan
    of the Newton polyhedron refines that partition: a face on the octant
    boundary can share its initial form with a larger cone (its dual
    Newton-polyhedron face is unbounded but meets the support in the same
    set), in which case it is part of the same class and is absorbed.
    For a monomial every weight is equivalent and the whole octant is the
    single Groebner cone.
    """
    if len(p) == 0:
        raise ValueError("the zero polynomial has no Groebner fan")
    maximal = [c for c, _ in dual_newton_cones(p)]
    faces = []
    for rays, _dim in fan_faces(maximal):
        c = Cone.from_generators(rays)
        faces.append((c, initial_form(p, c.interior_point())))
    groups: dict[frozenset, list[int]] = {}
    for k, (_, form) in enumerate(faces):
        groups.setdefault(form.support(), []).append(k)
    out = []
    for members in groups.values():
        for k in members:
            c, form = faces[k]
            absorbed = any(
                j != k
                and faces[j][0].dim > c.dim
                and all(faces[j][0].contains(g) for g in c.generators)
                for j in members
            )
            if not absorbed:
                out.append(GroebnerCone(c, form))
    return sorted(out, key=lambda g: (g.cone.dim, g.cone.generators))


def tropical_variety(p: Polynomial) -> Fan:
    """Subfan of Groebner cones whose initial form is not a monomial."""
    if len(p) < 2:
        raise ValueError("the tropical variety needs at least two terms")
    kept = [g for g in groebner_fan(p) if not g.initial_form.is_monomial()]
    return Fan.from_cones(
        [g.cone for g in kept], [str(g.initial_form) for g in kept]
    )


# jet systems: x(t) = x_0 + x_1 t + ... + x_m t^m and likewise for y, z;
# F_i is the t^i coefficient of f(x(t), y(t), z(t)).  Variables are
# ordered x0,y0,z0,x1,y1,z1,... and a jet monomial is an exponent tuple
# over that list.

JetTerm = tuple[int, ...]
_AXES = "xyz"


def _jet_variables(m: int) -> tuple[str, ...]:
    return tuple(f"{_AXES[axis]}{j}" for j in range(m + 1) for axis in range(3))


def _poly_mul(a: dict[JetTerm, int], b: dict[JetTerm, int]) -> dict[JetTerm, int]:
    out: dict[JetTerm, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(key, 0) + ca * cb
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return out


def _series_mul(
    s: list[dict[JetTerm, int]], t: list[dict[JetTerm, int]]
) -> list[dict[JetTerm, int]]:
    m = len(s) - 1
    out: list[dict[JetTerm, int]] = [dict() for _ in range(m + 1)]
    for i, si in enumerate(s):
        if not si:
            continue
        for j in range(m + 1 - i):
            if not t[j]:
                continue
            piece = _poly_mul(si, t[j])
            tgt = out[i + j]
            for e, c in piece.items():
                c2 = tgt.get(e, 0) + c
                if c2:
                    tgt[e] = c2
                else:
                    tgt.pop(e, None)
    return out


def _jet_monomial_string(term: JetTerm, coeff: int, variables: Sequence[str]) -> str:
    # factors ordered x before y before z, then by series index
    order = sorted(range(len(term)), key=lambda k: (k % 3, k // 3))
    parts = [
        variables[k] if term[k] == 1 else f"{variables[k]}^{term[k]}"
        for k in order
        if term[k]
    ]
    mag = abs(coeff)
    if not parts:
        return str(mag)
    if mag != 1:
        parts.insert(0, str(mag))
    return "*".join(parts)


@dataclass(frozen=True)
class JetSystem:
    """Equations of the m-jet space of f = 0, F_0 .. F_m."""

    order: int
    variables: tuple[str, ...]
    equations: tuple[tuple[tuple[JetTerm, int], ...], ...]

    def equation_dicts(self) -> list[dict[JetTerm, int]]:
        return [dict(eq) for eq in self.equations]

    def equation_strings(self) -> list[str]:
        out = []
        for eq in self.equations:
            if not eq:
                out.append("0")
                continue
            text = ""
            for term, coeff in eq:
                mono = _jet_monomial_string(term, coeff, self.variables)
                if not text:
                    text = mono if coeff > 0 else f"-{mono}"
                else:
                    text += f" + {mono}" if coeff > 0 else f" - {mono}"
            out.append(text)
        return out

    def __iter__(self) -> Iterator[tuple[tuple[JetTerm, int], ...]]:
        return iter(self.equations)

    def to_obj(self) -> dict:
        return {
            "m": self.order,
            "variables": list(self.variables),
            "equations": self.equation_strings(),
        }


def jet_equations(p: Polynomial, m: int) -> JetSystem:
    """Coefficients F_0..F_m of f along degree-m truncated coordinate series."""
    if m < 0:
        raise ValueError("jet order must be non-negative")
    nv = 3 * (m + 1)
    one: dict[JetTerm, int] = {(0,) * nv: 1}
    coordinate: list[list[dict[JetTerm, int]]] = []
    for axis in range(3):
        series = []
        for j in range(m + 1):
            e = [0] * nv
            e[3 * j + axis] = 1
            series.append({tuple(e): 1})
        coordinate.append(series)

    total: list[dict[JetTerm, int]] = [dict() for _ in range(m + 1)]
    for exponent, coeff in p:
        prod = [dict(one)] + [dict() for _ in range(m)]
        for axis in range(3):
            for _ in range(exponent[axis]):
                prod = _series_mul(prod, coordinate[axis])
        for i in range(m + 1):
            tgt = total[i]
            for e, c in prod[i].items():
                c2 = tgt.get(e, 0) + coeff * c
                if c2:
                    tgt[e] = c2
                else:
                    tgt.pop(e, None)

    equations = tuple(
        tuple(sorted(eq.items(), key=lambda kv: kv[0], reverse=True))
        for eq in total
    )
    return JetSystem(m, _jet_variables(m), equations)
