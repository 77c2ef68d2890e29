"""Plane-wave dispersion, band gaps and interface scattering for
Cauchy / micromorphic half-spaces."""

from .materials import (CauchyMaterial, CharacteristicQuantities,
                        DegenerateModel, Flavor, MaterialError,
                        MicromorphicMaterial, NonPositiveDefinite,
                        WrongFlavor, cauchy_speeds,
                        characteristic_quantities,
                        internal_variable_asymptotes, load_material,
                        material_from_dict, validate)
from .spectral import (BandGap, BranchKind, BranchRoot, WaveFamily,
                       asymptotes_numeric, band_gap, cauchy_wavenumbers,
                       char_polynomial_in_k, dispersion_matrix, omega_of_k,
                       roots_k_of_omega, system_matrices)
from .scattering import (ConnectionType, IncidentWave, ScatteringSolution,
                         assemble_system, boundary_residual,
                         solve_scattering, trivially_reflecting)
from .energetics import (EnergyBudget, flux_cauchy_avg,
                         flux_micromorphic_avg, pointwise_conservation,
                         reflection_transmission)
from .modes import (FieldState, VState, cauchy_traction, decompose_P,
                    double_force, evaluate_fields, evaluate_vstate,
                    reconstruct_P, traction_micromorphic)

__version__ = "0.1.0"

__all__ = [
    "BandGap", "BranchKind", "BranchRoot", "CauchyMaterial",
    "CharacteristicQuantities", "ConnectionType", "DegenerateModel",
    "EnergyBudget", "FieldState", "Flavor", "IncidentWave", "MaterialError",
    "MicromorphicMaterial", "NonPositiveDefinite", "ScatteringSolution",
    "VState", "WaveFamily", "WrongFlavor", "asymptotes_numeric", "band_gap",
    "boundary_residual", "assemble_system", "cauchy_speeds",
    "cauchy_traction", "cauchy_wavenumbers", "char_polynomial_in_k",
    "characteristic_quantities", "decompose_P", "dispersion_matrix",
    "double_force", "evaluate_fields", "evaluate_vstate", "flux_cauchy_avg",
    "flux_micromorphic_avg", "internal_variable_asymptotes",
    "load_material", "material_from_dict", "omega_of_k",
    "pointwise_conservation", "reconstruct_P", "reflection_transmission",
    "roots_k_of_omega", "solve_scattering", "system_matrices",
    "traction_micromorphic", "trivially_reflecting", "validate",
]
