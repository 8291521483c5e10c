"""Coupled kicked maps on the torus: classical phase-space densities
under the truncated transfer operator, the matching quantized maps, and
Schmidt-spectrum entanglement measures for both."""

from .analysis import (PowerLawFit, TorusPoint, fit_power_law,
                       lyapunov_exponents, map_step, tangent_step)
from .classical import (ClassicalState, MapParams, ModeCutoff,
                        apply_interaction, apply_single_particle,
                        dense_fp_matrix, evolve, fp_step, new_state)
from .bessel import bessel_j, bessel_j_row
from .entanglement import (SchmidtSpectrum, reduced_density_oracle,
                           schmidt_of_classical, schmidt_of_quantum,
                           schmidt_spectrum, von_neumann_entropy)
from .errors import (BudgetError, ConfigError, DegenerateStateError,
                     DimensionError, DomainError, KickentError)
from .experiments import (EntropyRecord, EntropySeries, LinearWindow,
                          detect_linear_window, provenance_hash,
                          run_chaotic_sweep, run_coupling_sweep,
                          run_time_sweep)
from .initial import (GaussianSpec, TruncationWarning,
                      classical_gaussian_coeffs, coherent_state,
                      product_initial, sigma_for_dimension)
from .quantum import (QuantumDims, QuantumPropagator, QuantumState,
                      build_interaction_phases, build_propagator,
                      build_single_map, qstep, unitarity_report)

__version__ = "0.1.0"
