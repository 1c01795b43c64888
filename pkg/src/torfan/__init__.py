"""Exact toric tools for Newton non-degenerate surface singularities in 3-space.

Everything runs on arbitrary-precision integers and fractions; there is no
floating point in any geometric decision (SVG rendering is the one exception,
and it never feeds back into computation).
"""

__version__ = "0.1.0"

from .polyparse import ParseError, Polynomial, parse_polynomial, support
from .cones import (
    Cone,
    HilbertBasis,
    cross,
    dot,
    extremal_rays,
    hilbert_basis,
    is_irreducible,
    is_regular,
    parallelepiped_points,
    parse_cone,
    primitive,
    triangulate,
    unimodular_det,
)
from .newton import (
    Fan,
    NewtonPolyhedron,
    dual_newton_cones,
    dual_newton_fan,
    fan_consistency_report,
    fan_faces,
    newton_polyhedron,
    octant_solid_volume,
)
from .profile import (
    AffineFunctional,
    Profile,
    SubprofileSpec,
    contains_point,
    facet_equation,
    l_functional,
    parse_functional,
    profile,
    profile_lattice_points,
    subprofile_check,
)
from .refine import (
    RefinementReport,
    check_minimal_embedded,
    refine_fan,
    refinement_from_rays,
    regular_refinement,
)
from .valuation import (
    GroebnerCone,
    JetSystem,
    groebner_fan,
    initial_form,
    jet_equations,
    tropical_variety,
    w_order,
)
from .catalog import (
    CatalogError,
    appendix_fixture,
    default_grid,
    determinant_families,
    embedded_valuations,
    entry,
    equation,
    families,
    fixture_instances,
    groebner_meet,
    profile_discrepancy,
    stated_maximal_cones,
    subprofile_hyperplanes,
    verify,
    verify_grid,
)

__all__ = [
    "ParseError",
    "Polynomial",
    "parse_polynomial",
    "support",
    "Cone",
    "HilbertBasis",
    "cross",
    "dot",
    "extremal_rays",
    "hilbert_basis",
    "is_irreducible",
    "is_regular",
    "parallelepiped_points",
    "parse_cone",
    "primitive",
    "triangulate",
    "unimodular_det",
    "Fan",
    "NewtonPolyhedron",
    "dual_newton_cones",
    "dual_newton_fan",
    "fan_consistency_report",
    "fan_faces",
    "newton_polyhedron",
    "octant_solid_volume",
    "AffineFunctional",
    "Profile",
    "SubprofileSpec",
    "contains_point",
    "facet_equation",
    "l_functional",
    "parse_functional",
    "profile",
    "profile_lattice_points",
    "subprofile_check",
    "RefinementReport",
    "check_minimal_embedded",
    "refine_fan",
    "refinement_from_rays",
    "regular_refinement",
    "GroebnerCone",
    "JetSystem",
    "groebner_fan",
    "initial_form",
    "jet_equations",
    "tropical_variety",
    "w_order",
    "CatalogError",
    "appendix_fixture",
    "default_grid",
    "determinant_families",
    "embedded_valuations",
    "entry",
    "equation",
    "families",
    "fixture_instances",
    "groebner_meet",
    "profile_discrepancy",
    "stated_maximal_cones",
    "subprofile_hyperplanes",
    "verify",
    "verify_grid",
]
