"""Symplectic tomography of quantum electrical circuits.

Gaussian circuit states and their tomograms, a numerical Radon transform
with a Fourier-slice inverse, tomographic information measures, parametric
Josephson-junction dynamics, and covariance propagation for two coupled
resonant circuits, each paired with an independent oracle.
"""

from .coupled import (
    CoupledCircuitParams,
    PropagatorCoefficients,
    apply_propagator_coefficients,
    ground_state_tomogram_2c,
    normal_mode_frequencies,
    propagate_dispersions,
    propagator_coefficients,
    symplectic_oracle,
    transition_matrix,
)
from .errors import NumericalError, ValidationError
from .gaussian import (
    GaussianState,
    GaussianTomogram,
    PhysicalityResult,
    ReferenceFrame,
    SampledTomogram,
    Tomogram,
    mean_quanta,
    physicality_check,
    quadrature_stats,
    random_frame,
    random_state,
    squeezed_state,
    symplectic_form,
    tomogram_density,
    vacuum_state,
)
from .josephson import (
    DriveCurrent,
    EpsilonTrajectory,
    FrequencyProfile,
    ShotNoiseResult,
    casimir_quanta_curve,
    evolve_epsilon,
    junction_tomogram,
    plasma_frequency,
    shot_noise_check,
    state_from_epsilon,
    time_averaged_quanta,
)
from .measures import (
    MeasureResult,
    bounds_check,
    entropy_1mode,
    entropy_2mode,
    fidelity,
    fidelity_wigner_overlap,
    purity,
    tomographic_information,
)
from .tomography import (
    CharacteristicSlice,
    UniformAxis,
    WignerGrid,
    characteristic_slice,
    forward_slices,
    gaussian_slices,
    optical_slice,
    radon_forward,
    radon_inverse,
    wigner_of_gaussian,
)

__version__ = "0.1.0"
