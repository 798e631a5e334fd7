"""Gaussian wave packet dynamics for one-dimensional quadratic Hamiltonians.

Evolves Gaussian packets through four equivalent formulations (complex
Riccati width, real amplitude pair, complex classical trajectory, coupled
second moments), exposes the exact propagator kernel and the phase-space
density, and verifies the conservation laws that tie the formulations
together.
"""

from .core import (
    BlowUpError,
    CausticError,
    Centroid,
    ConstantFrequency,
    DegenerateInitialStateError,
    ErmakovState,
    FrequencyProfile,
    GaussianWavePacket,
    GridTooCoarseError,
    IntegratorConfig,
    LambdaState,
    NegativeRadicandError,
    NumericalFailure,
    PiecewiseConstantFrequency,
    RiccatiState,
    SampledFrequency,
    SingularityError,
    SystemSpec,
    UncertaintyTriple,
    UnphysicalStateError,
    WronskianError,
    ZeroCentroidError,
    ermakov_from_riccati,
    ermakov_from_uncertainties,
    riccati_from_ermakov,
    riccati_from_uncertainties,
    schroedinger_robertson_defect,
    uncertainties_from_ermakov,
    wavepacket_amplitude,
)
from . import complex_newton, ermakov, propagator, riccati, uncertainty, wigner

__version__ = "0.1.0"

__all__ = [
    "BlowUpError",
    "CausticError",
    "Centroid",
    "ConstantFrequency",
    "DegenerateInitialStateError",
    "ErmakovState",
    "FrequencyProfile",
    "GaussianWavePacket",
    "GridTooCoarseError",
    "IntegratorConfig",
    "LambdaState",
    "NegativeRadicandError",
    "NumericalFailure",
    "PiecewiseConstantFrequency",
    "RiccatiState",
    "SampledFrequency",
    "SingularityError",
    "SystemSpec",
    "UncertaintyTriple",
    "UnphysicalStateError",
    "WronskianError",
    "ZeroCentroidError",
    "complex_newton",
    "ermakov",
    "ermakov_from_riccati",
    "ermakov_from_uncertainties",
    "propagator",
    "riccati",
    "riccati_from_ermakov",
    "riccati_from_uncertainties",
    "schroedinger_robertson_defect",
    "uncertainty",
    "uncertainties_from_ermakov",
    "wavepacket_amplitude",
    "wigner",
]
