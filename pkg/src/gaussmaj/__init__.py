"""Numerical toolkit for majorization of phase-insensitive bosonic Gaussian channel outputs."""

from .channels import (
    AdditiveNoise,
    Amplifier,
    ChannelSpec,
    KrausSet,
    ThermalAttenuator,
    apply_channel,
    apply_kraus,
    canonical_decomposition,
    kraus_amplifier,
    kraus_attenuator,
)
from .concave import CONCAVE_BATTERY, ClippedLinear, ClippedQuadratic, ConcaveFunctionSpec, PowerGap, ShannonTerm, SqrtGap
from .dilation import complementary_amplifier_check, dilation_outputs, phase_conjugate
from .errors import (
    ConfigError,
    CutoffError,
    DimensionError,
    FunctionClassError,
    GaussmajError,
    NoWitnessError,
    ParameterError,
    PositivityError,
    UnphysicalStateError,
)
from .fock import (
    DensityOperator,
    PureState,
    Spectrum,
    coherent_vector,
    fidelity,
    fock_vector,
    purity,
    random_pure,
    spectrum,
    thermal_density,
)
from .functionals import (
    OptimizerOptions,
    concave_trace_functional,
    maximize_beamsplitter_purity,
    minimize_output_functional,
    renyi_entropy,
    von_neumann_entropy,
)
from .gaussian import Coherent, GaussianState, Thermal, apply_channel_gaussian, gaussian_entropy, gaussian_of, gaussian_spectrum
from .majorization import ConcaveWitness, MajorizationReport, build_witness, eval_concave_sum, majorizes

__version__ = "0.1.0"
