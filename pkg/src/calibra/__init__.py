"""Calibrated geometry toolkit.

Exterior algebra, comass over Grassmannians, a catalog of calibrations,
graph geometry for minimal surface systems, integral simplicial chains and
a discrete Plateau solver with calibration certificates.
"""
from ._accel import USE_NUMBA
from .calibration import (
    comass_at,
    comass_global,
    complete_plane,
    contact_membership,
    exterior_derivative_numeric,
    first_cousin_check,
)
from .complex import Chain, DiscreteCochain, SimplicialComplex
from .currents import boundary, calibration_defect, cone_chain, density_estimate, fill_cycle, mass, pair, stokes_check
from .exterior import KCovector, KVector, interior, simplicity_defect, wedge
from .forms import FormField, catalog_form, standard_calibrations
from .grassmannian import SimplePlane, maximize_over_grassmannian, plane_from_frame
from .graphs import (
    area_integrand,
    difference_operator,
    graph_calibrated_defect,
    lawson_osserman_map,
    mse_coefficients,
    mss_residual,
    slag_phase,
    tangent_plane,
)
from .plateau import (
    PlateauInstance,
    PlateauSolution,
    brute_force_oracle,
    induced_cochain,
    solve,
    uniqueness_probe,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA",
    "Chain",
    "DiscreteCochain",
    "FormField",
    "KCovector",
    "KVector",
    "PlateauInstance",
    "PlateauSolution",
    "SimplePlane",
    "SimplicialComplex",
    "area_integrand",
    "boundary",
    "brute_force_oracle",
    "calibration_defect",
    "catalog_form",
    "comass_at",
    "comass_global",
    "complete_plane",
    "cone_chain",
    "contact_membership",
    "density_estimate",
    "difference_operator",
    "exterior_derivative_numeric",
    "fill_cycle",
    "first_cousin_check",
    "graph_calibrated_defect",
    "induced_cochain",
    "interior",
    "lawson_osserman_map",
    "mass",
    "maximize_over_grassmannian",
    "mse_coefficients",
    "mss_residual",
    "pair",
    "plane_from_frame",
    "simplicity_defect",
    "slag_phase",
    "solve",
    "standard_calibrations",
    "stokes_check",
    "tangent_plane",
    "uniqueness_probe",
    "verify_certificate",
    "wedge",
]
