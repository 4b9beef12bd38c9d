"""Van der Waals and Casimir energies and forces from macroscopic QED.

Planar three-layer stacks are handled by :mod:`vdwcasimir.lifshitz` on top of
the Green-function traces in :mod:`vdwcasimir.green`; clusters of
polarizable atoms by :mod:`vdwcasimir.dipoles`. Everything is SI.
"""

__version__ = "0.1.0"

from .dielectric import (Drude, IdealMirror, Lorentz, LorentzSum, OscillatorParams,
                         PermittivityModel, TabulatedImagAxis, Vacuum, eps_imag_axis,
                         eps_real_axis, gas_permittivity, kk_consistency_residual,
                         polarizability, polarizability_imag)
from .dipoles import (DipoleSystem, build_interaction_matrix, casimir_polder_energy,
                      london_energy, pair_energy, pairwise_vdw_energy, vdw_energy, vdw_force)
from .errors import (CasimirError, CoincidenceError, ConfigError, ConvergenceError,
                     DegenerateDenominatorError, DomainError, PoleError, SpectralRadiusError,
                     UnsupportedAxisError)
from .green import (PlanarStack, SpectralPoint, dipole_field_dyadic, free_space_dyadic,
                    fresnel, homogeneous_green_trace, kappa, multiple_reflection,
                    planar_scattering_trace)
from .lifshitz import (ForceResult, InterfaceForces, ThermalState,
                       absorption_rate_spectral_density, bulk_spectral_energy_density,
                       dilute_force_per_area, energy_density_profile, force_per_area,
                       force_per_area_real_axis, free_energy_per_area, local_dos,
                       matsubara_frequencies, noise_energy_spectral_density,
                       surface_force_jumps)
from .quadrature import DEFAULT_SPEC, QuadratureSpec

__all__ = [name for name in dir() if not name.startswith("_")]
