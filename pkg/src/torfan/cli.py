"""Command-line front end: JSON reports and SVG fan cross-sections.

Every verb emits a deterministic artifact: JSON (validated against the
shipped schema in ``data/cli_schema.json``) to stdout or ``--out``, a
plain-text summary with ``--format text``, or an SVG cross-section for
``render``.  Exit codes: 0 success, 1 any verification flag false,
2 malformed input or usage.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .catalog import (
    CatalogError,
    appendix_fixture,
    default_grid,
    entry,
    equation,
    families,
    fixture_instances,
    stated_maximal_cones,
    subprofile_hyperplanes,
    verify,
)
from .cones import hilbert_basis, parse_cone
from .newton import Fan, dual_newton_cones, fan_consistency_report
from .polyparse import ParseError, parse_polynomial
from .profile import contains_point, facet_equation, profile, profile_lattice_points
from .refine import refine_fan
from .valuation import groebner_fan, jet_equations, tropical_variety

PARAM_FLAGS = ("r", "n", "k", "l", "m")


@dataclass(frozen=True)
class Command:
    """One validated invocation: a single verb plus its raw inputs."""

    verb: str
    inputs: tuple[str, ...]
    out: str | None
    format: str


# ---------------------------------------------------------------------------
# output schema


class SchemaError(ValueError):
    pass


_SCHEMA_CACHE: dict | None = None


def load_schema() -> dict:
    global _SCHEMA_CACHE
    if _SCHEMA_CACHE is None:
        text = (
            resources.files("torfan").joinpath("data/cli_schema.json").read_text()
        )
        _SCHEMA_CACHE = json.loads(text)
    return _SCHEMA_CACHE


_TYPES = {
    "object": dict,
    "array": list,
    "string": str,
    "integer": int,
    "boolean": bool,
    "number": (int, float),
}


def _check_schema(obj, schema: dict, defs: dict, path: str) -> None:
    if "$ref" in schema:
        _check_schema(obj, defs[schema["$ref"]], defs, path)
        return
    t = schema.get("type")
    if t is not None:
        ok = isinstance(obj, _TYPES[t])
        if t in ("integer", "number") and isinstance(obj, bool):
            ok = False
        if not ok:
            raise SchemaError(f"{path}: expected {t}, got {type(obj).__name__}")
    if "enum" in schema and obj not in schema["enum"]:
        raise SchemaError(f"{path}: {obj!r} not in {schema['enum']}")
    if isinstance(obj, dict):
        props = schema.get("properties", {})
        for key in schema.get("required", []):
            if key not in obj:
                raise SchemaError(f"{path}: missing key {key!r}")
        extra_ok = schema.get("additionalProperties", True)
        for key, val in obj.items():
            if key in props:
                _check_schema(val, props[key], defs, f"{path}.{key}")
            elif extra_ok is False:
                raise SchemaError(f"{path}: unexpected key {key!r}")
    if isinstance(obj, list):
        if "minItems" in schema and len(obj) < schema["minItems"]:
            raise SchemaError(f"{path}: fewer than {schema['minItems']} items")
        if "maxItems" in schema and len(obj) > schema["maxItems"]:
            raise SchemaError(f"{path}: more than {schema['maxItems']} items")
        items = schema.get("items")
        if items is not None:
            for i, val in enumerate(obj):
                _check_schema(val, items, defs, f"{path}[{i}]")


def validate_output(verb_key: str, obj) -> None:
    """Raise SchemaError unless obj matches the shipped schema for the verb."""
    schema = load_schema()
    _check_schema(obj, schema["verbs"][verb_key], schema["definitions"], "$")


# ---------------------------------------------------------------------------
# SVG rendering

_SIDE = 480.0
_E1 = (60.0, 540.0)
_E2 = (540.0, 540.0)
_E3 = (300.0, 540.0 - _SIDE * math.sqrt(3.0) / 2.0)
_CENTER = ((_E1[0] + _E2[0] + _E3[0]) / 3.0, (_E1[1] + _E2[1] + _E3[1]) / 3.0)
_FILLS = (
    "#dbeafe", "#dcfce7", "#fee2e2", "#fef9c3",
    "#f3e8ff", "#e0f2fe", "#fce7f3", "#ecfccb",
)


def _project(v) -> tuple[float, float]:
    s = float(v[0] + v[1] + v[2])
    a, b, c = v[0] / s, v[1] / s, v[2] / s
    return (
        a * _E1[0] + b * _E2[0] + c * _E3[0],
        a * _E1[1] + b * _E2[1] + c * _E3[1],
    )


def _ray_label(v) -> str:
    units = {(1, 0, 0): "e1", (0, 1, 0): "e2", (0, 0, 1): "e3"}
    return units.get(tuple(v), "(%d,%d,%d)" % tuple(v))


def _points_attr(pts) -> str:
    return " ".join("%.2f,%.2f" % p for p in pts)


def render_svg(fan: Fan) -> str:
    """Cross-section of an octant fan with the plane x+y+z = 1.

    Every maximal cone becomes one polygon (degenerate for cones of
    dimension below 3, which draw as segments or points); rays carry
    their lattice coordinates.  Output is deterministic.
    """
    if not fan.cones:
        raise ValueError("cannot render an empty fan")
    for v in fan.rays:
        if len(v) != 3 or min(v) < 0 or sum(v) <= 0:
            raise ValueError(f"fan must lie in the octant: bad ray {v}")
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" '
        'viewBox="0 0 600 600">',
        '<rect width="600" height="600" fill="white"/>',
    ]
    for k, fc in enumerate(fan.cones):
        pts = [_project(fan.rays[i]) for i in fc.rays]
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        fill = _FILLS[k % len(_FILLS)] if len(pts) >= 3 else "none"
        title = f"<title>{fc.label}</title>" if fc.label else ""
        parts.append(
            f'<polygon points="{_points_attr(pts)}" fill="{fill}" '
            f'stroke="#333333" stroke-width="1.5"/>{title}'
        )
    corners = "M %.2f %.2f L %.2f %.2f L %.2f %.2f Z" % (*_E1, *_E2, *_E3)
    parts.append(
        f'<path d="{corners}" fill="none" stroke="#111111" stroke-width="1.5"/>'
    )
    for v in fan.rays:
        x, y = _project(v)
        dx, dy = x - _CENTER[0], y - _CENTER[1]
        norm = math.hypot(dx, dy)
        if norm < 1e-9:
            lx, ly = x, y - 14.0
        else:
            lx, ly = x + 20.0 * dx / norm, y + 20.0 * dy / norm
        parts.append('<circle cx="%.2f" cy="%.2f" r="2.5" fill="#111111"/>' % (x, y))
        parts.append(
            '<text x="%.2f" y="%.2f" font-family="monospace" font-size="12" '
            'text-anchor="middle">%s</text>' % (lx, ly + 4.0, _ray_label(v))
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# input helpers

_VEC_TEXT = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def _read_vectors(path: str) -> list[tuple[int, int, int]]:
    """Vectors from a file: (a,b,c) literals, or whitespace triples per line."""
    text = Path(path).read_text()
    vecs = [tuple(int(g) for g in m.groups()) for m in _VEC_TEXT.finditer(text)]
    if not vecs:
        for lineno, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            toks = body.replace(",", " ").split()
            if len(toks) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 integers, got {body!r}")
            vecs.append(tuple(int(t) for t in toks))
    if not vecs:
        raise ValueError(f"no vectors found in {path}")
    return vecs


def _params_from(ns: argparse.Namespace) -> dict[str, int] | None:
    params = {f: getattr(ns, f) for f in PARAM_FLAGS if getattr(ns, f, None) is not None}
    return params or None


def _vecs(vs) -> list[list[int]]:
    return [list(v) for v in vs]


# ---------------------------------------------------------------------------
# verb handlers: each returns (flags_ok, schema_key, payload)


def _run_dnp(ns) -> tuple[bool, str, dict]:
    p = parse_polynomial(ns.poly)
    pairs = dual_newton_cones(p)
    if not pairs:
        raise ValueError("the dual Newton fan has no full-dimensional cones")
    fan = Fan.from_cones(
        [c for c, _ in pairs], ["vertex (%d,%d,%d)" % v for _, v in pairs]
    )
    by_label = {"vertex (%d,%d,%d)" % v: v for _, v in pairs}
    consistency = fan_consistency_report([c for c, _ in pairs])
    obj = fan.to_obj()
    for row in obj["cones"]:
        row["vertex"] = list(by_label[row["label"]])
    obj["equation"] = str(p)
    obj.update(consistency)
    ok = consistency["covering_ok"] and consistency["face_fitting_ok"]
    return ok, "dnp", obj


def _run_hilbert(ns) -> tuple[bool, str, list]:
    c = parse_cone(ns.cone)
    return True, "hilbert", _vecs(hilbert_basis(c).elements)


def _run_resolve(ns) -> tuple[bool, str, dict]:
    p = parse_polynomial(ns.poly)
    cones = [c for c, _ in dual_newton_cones(p)]
    if not cones:
        raise ValueError("the dual Newton fan has no full-dimensional cones")
    inserted = _read_vectors(ns.rays) if ns.rays else None
    report = refine_fan(cones, inserted)
    obj = {
        "equation": str(p),
        "source_rays": _vecs(sorted({g for c in cones for g in c.generators})),
        "refinement": report.to_obj(),
    }
    if inserted is not None:
        obj["inserted"] = _vecs(inserted)
    rep = obj["refinement"]
    ok = (
        rep["regular"]
        and rep["covering_ok"]
        and rep["face_fitting_ok"]
        and rep["all_rays_irreducible"]
    )
    return ok, "resolve", obj


def _run_profile(ns) -> tuple[bool, str, dict]:
    text = ns.input.strip()
    obj: dict = {}
    if text.startswith("<"):
        cones = [parse_cone(text)]
        obj["cone"] = _vecs(cones[0].generators)
        rows = [{}]
    else:
        p = parse_polynomial(text)
        pairs = dual_newton_cones(p)
        if not pairs:
            raise ValueError("the dual Newton fan has no full-dimensional cones")
        cones = [c for c, _ in pairs]
        obj["equation"] = str(p)
        rows = [{"vertex": list(v)} for _, v in pairs]
    profiles = [profile(c) for c in cones]
    entries = []
    for c, prof, row in zip(cones, profiles, rows):
        entries.append(
            {
                "rays": _vecs(c.generators),
                "kind": prof.kind,
                "bounding": [facet_equation(f) for f in prof.bounding],
                "lattice_points": _vecs(profile_lattice_points(prof)),
                **row,
            }
        )
    obj["profiles"] = entries
    ok = True
    if ns.vectors:
        results = []
        for v in _read_vectors(ns.vectors):
            containing = [i for i, c in enumerate(cones) if c.contains(v)]
            outside = [i for i in containing if not contains_point(profiles[i], v)]
            results.append(
                {
                    "vector": list(v),
                    "containing_cones": containing,
                    "outside_profile_of": outside,
                    "ok": not outside,
                }
            )
            ok = ok and not outside
        obj["vectors"] = results
    return ok, "profile", obj


def _run_groebner(ns) -> tuple[bool, str, dict]:
    p = parse_polynomial(ns.poly)
    if ns.tropical:
        fan = tropical_variety(p)
        obj = fan.to_obj()
        obj["equation"] = str(p)
        return True, "groebner-tropical", obj
    cones = groebner_fan(p)
    return True, "groebner", {
        "equation": str(p),
        "cones": [
            {
                "rays": _vecs(g.cone.generators),
                "dim": g.cone.dim,
                "initial_form": str(g.initial_form),
            }
            for g in cones
        ],
    }


def _run_jets(ns) -> tuple[bool, str, dict]:
    p = parse_polynomial(ns.poly)
    system = jet_equations(p, ns.m)
    obj = {"equation": str(p)}
    obj.update(system.to_obj())
    return True, "jets", obj


def _run_catalog(ns) -> tuple[bool, str, dict]:
    if ns.action == "list":
        fams = []
        for name in families():
            ent = entry(name)
            row = {
                "name": name,
                "parameters": list(ent.parameters),
                "constraint": ent.constraint,
                "template": ent.template,
                "rtp": ent.rtp,
                "grid": default_grid(name),
                "fixtures": [p for f, p in fixture_instances() if f == name],
            }
            if ent.note:
                row["note"] = ent.note
            fams.append(row)
        return True, "catalog-list", {"families": fams}
    ent = entry(ns.family)
    params = _params_from(ns)
    poly = equation(ns.family, params)
    resolved = params or (dict(ent.grid[0]) if ent.parameters else {})
    obj = {
        "name": ent.name,
        "parameters": list(ent.parameters),
        "constraint": ent.constraint,
        "template": ent.template,
        "rtp": ent.rtp,
        "grid": default_grid(ns.family),
        "params": resolved,
        "equation": str(poly),
        "fixture": _fixture_available(ns.family, params),
    }
    if ent.note:
        obj["note"] = ent.note
    try:
        stated = stated_maximal_cones(ns.family, params)
        obj["stated_maximal_cones"] = [_vecs(c.generators) for c in stated]
        obj["subprofiles"] = [
            [
                {"equation": str(h), "recomputed": h.recomputed}
                for h in subprofile_hyperplanes(ns.family, params, i)
            ]
            for i in range(len(stated))
        ]
    except CatalogError:
        pass
    return True, "catalog-show", obj


def _fixture_available(family: str, params) -> bool:
    try:
        appendix_fixture(family, params)
        return True
    except CatalogError:
        return False


def _run_verify(ns) -> tuple[bool, str, dict]:
    report = verify(ns.family, _params_from(ns))
    return report.overall, "verify", report.to_obj()


def _run_render(ns) -> tuple[bool, None, str]:
    fan = Fan.from_json(Path(ns.fan).read_text())
    return True, None, render_svg(fan)


# ---------------------------------------------------------------------------
# text rendering


def _pv(v) -> str:
    return "(%d,%d,%d)" % tuple(v)


def _text_lines(key: str, obj) -> list[str]:
    if key == "hilbert":
        return [_pv(v) for v in obj]
    if key == "dnp":
        lines = [f"equation: {obj['equation']}"]
        for row in obj["cones"]:
            rays = " ".join(_pv(obj["rays"][i]) for i in row["rays"])
            lines.append(f"{row['label']}: {rays}")
        lines.append(f"covering_ok: {obj['covering_ok']}")
        lines.append(f"face_fitting_ok: {obj['face_fitting_ok']}")
        return lines
    if key == "resolve":
        rep = obj["refinement"]
        return [
            f"equation: {obj['equation']}",
            f"pieces: {len(rep['certificates'])}",
            f"new rays: {' '.join(_pv(v) for v in rep['new_rays']) or '(none)'}",
            f"regular: {rep['regular']}",
            f"covering_ok: {rep['covering_ok']}",
            f"face_fitting_ok: {rep['face_fitting_ok']}",
            f"all_rays_irreducible: {rep['all_rays_irreducible']}",
        ]
    if key == "profile":
        lines = []
        if "equation" in obj:
            lines.append(f"equation: {obj['equation']}")
        for i, prof in enumerate(obj["profiles"]):
            rays = " ".join(_pv(v) for v in prof["rays"])
            lines.append(f"cone {i} [{prof['kind']}]: {rays}")
            for eq in prof["bounding"]:
                lines.append(f"  facet: {eq} = 0")
            lines.append(f"  lattice points: {len(prof['lattice_points'])}")
        for row in obj.get("vectors", []):
            state = "ok" if row["ok"] else f"outside in cones {row['outside_profile_of']}"
            lines.append(f"vector {_pv(row['vector'])}: {state}")
        return lines
    if key == "groebner":
        lines = [f"equation: {obj['equation']}"]
        for g in obj["cones"]:
            rays = " ".join(_pv(v) for v in g["rays"])
            lines.append(f"dim {g['dim']}: {rays} | initial: {g['initial_form']}")
        return lines
    if key == "groebner-tropical":
        lines = [f"equation: {obj['equation']}"]
        for row in obj["cones"]:
            rays = " ".join(_pv(obj["rays"][i]) for i in row["rays"])
            lines.append(f"{rays} | initial: {row.get('label', '')}")
        return lines
    if key == "jets":
        lines = [f"equation: {obj['equation']}"]
        lines += [f"F{i} = {eq}" for i, eq in enumerate(obj["equations"])]
        return lines
    if key == "catalog-list":
        return [
            "%-12s %-10s %s" % (f["name"], ",".join(f["parameters"]) or "-", f["template"])
            for f in obj["families"]
        ]
    if key == "catalog-show":
        lines = [f"{k}: {obj[k]}" for k in ("name", "template", "constraint", "equation")]
        lines.append(f"params: {obj['params']}")
        lines.append(f"rtp: {obj['rtp']}  fixture: {obj['fixture']}")
        return lines
    if key == "verify":
        lines = [f"family: {obj['family']}  params: {obj['params']}"]
        for stage, data in obj["stages"].items():
            suffix = " (observational)" if data.get("observational") else ""
            lines.append(f"{stage}: {data['status']}{suffix}")
        lines.append(f"overall: {obj['overall']}")
        return lines
    raise AssertionError(f"no text renderer for {key}")


# ---------------------------------------------------------------------------
# dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torfan",
        description="Exact toric tools for Newton polyhedra of surface "
        "singularities: dual fans, Hilbert bases, unimodular refinements, "
        "profiles, Groebner fans, jets.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(sp, formats=("json", "text")):
        sp.add_argument("--out", help="write the artifact to this file")
        sp.add_argument(
            "--format", choices=formats, default=formats[0], help="output format"
        )

    sp = sub.add_parser("dnp", help="dual Newton fan of a polynomial")
    sp.add_argument("poly")
    common(sp)

    sp = sub.add_parser("hilbert", help="Hilbert basis of a cone literal")
    sp.add_argument("cone", help='cone text like "<(0,1,0),(0,0,1),(6,8,9)>"')
    common(sp)

    sp = sub.add_parser("resolve", help="unimodular refinement of the dual fan")
    sp.add_argument("poly")
    sp.add_argument("--rays", help="file of rays to insert instead of Hilbert bases")
    common(sp)

    sp = sub.add_parser("profile", help="profiles of a polynomial's fan or one cone")
    sp.add_argument("input", help="polynomial, or cone text starting with '<'")
    sp.add_argument("--vectors", help="file of vectors to test for containment")
    common(sp)

    sp = sub.add_parser("groebner", help="Groebner fan, or tropical subfan")
    sp.add_argument("poly")
    sp.add_argument("--tropical", action="store_true")
    common(sp)

    sp = sub.add_parser("jets", help="jet-space equations F_0..F_m")
    sp.add_argument("poly")
    sp.add_argument("--m", type=int, required=True, help="truncation order")
    common(sp)

    sp = sub.add_parser("catalog", help="singularity family registry")
    act = sp.add_subparsers(dest="action", required=True)
    lp = act.add_parser("list", help="all families")
    common(lp)
    shp = act.add_parser("show", help="one family, optionally at parameters")
    shp.add_argument("family")
    for flag in PARAM_FLAGS:
        shp.add_argument(f"--{flag}", type=int)
    common(shp)

    sp = sub.add_parser("verify", help="full verification pipeline for a family")
    sp.add_argument("family")
    for flag in PARAM_FLAGS:
        sp.add_argument(f"--{flag}", type=int)
    common(sp)

    sp = sub.add_parser("render", help="SVG cross-section of a fan JSON file")
    sp.add_argument("fan", help="fan JSON produced by dnp or groebner --tropical")
    sp.add_argument("--out", required=True, help="output SVG path")
    return parser


_HANDLERS = {
    "dnp": _run_dnp,
    "hilbert": _run_hilbert,
    "resolve": _run_resolve,
    "profile": _run_profile,
    "groebner": _run_groebner,
    "jets": _run_jets,
    "catalog": _run_catalog,
    "verify": _run_verify,
    "render": _run_render,
}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str]) -> int:
    """Parse argv, dispatch one verb, emit its artifact; returns exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as status:
        return int(status.code or 0)
    cmd = Command(
        verb=ns.verb,
        inputs=tuple(
            str(getattr(ns, name))
            for name in ("poly", "cone", "input", "family", "fan", "action")
            if getattr(ns, name, None) is not None
        ),
        out=ns.out,
        format="svg" if ns.verb == "render" else ns.format,
    )
    try:
        ok, key, payload = _HANDLERS[cmd.verb](ns)
    except (ParseError, CatalogError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cmd.format == "svg":
        _emit(payload, cmd.out)
    elif cmd.format == "text":
        _emit("\n".join(_text_lines(key, payload)) + "\n", cmd.out)
    else:
        validate_output(key, payload)
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cmd.out)
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
