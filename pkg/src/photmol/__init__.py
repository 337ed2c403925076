"""Thermal T-matrix, Keldysh tools and nonlinear-phase gates for photon molecules in waveguides."""
from . import boundstate, gate, keldysh, physics, tmatrix
from ._kernels import BACKEND
from .boundstate import PairAmplitude, PhaseResult, chi_delta_bound, molecule_wavefunction, nonlinear_phase, propagate_pair
from .errors import (
    ConfigError,
    DistributionPoleError,
    GridCoverageError,
    NoBracketError,
    PhotmolError,
    QuadratureError,
)
from .gate import cnot, compose, cz_from_phase, hadamard, tensor
from .keldysh import SpectralGrid, fdt_components, lorentzian_spectral, retarded_from_spectral, time_domain_retarded
from .physics import ThermalState, WaveguideParams, bose_occupation, bose_occupation_bar, coth_factor, dispersion
from .tmatrix import (
    CriticalPoint,
    TMatrixQuery,
    coth_integral,
    critical_temperature,
    denominator_scan,
    g2_retarded_numeric,
    pair_propagator_upsilon,
    tmatrix_retarded_1d,
)

__version__ = "0.1.0"
