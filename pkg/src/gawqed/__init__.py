"""Single-photon scattering and EIT analysis for double-giant-atom waveguide QED."""

from .core import (
    CharQuantities,
    ConfigError,
    CouplingPoint,
    GawqedError,
    GiantAtom,
    SystemConfig,
    Topology,
    TopologyError,
    characteristics,
    classify_topology,
    detunings,
    symmetric_config,
)
from .eit import (
    DarkState,
    EitVerdict,
    Regime,
    SABasisQuantities,
    Scheme,
    classify_eit,
    collective_eit_amplitudes,
    lambda_reference,
    maximum_symmetric_quantities,
    sa_basis,
    single_atom_eit_amplitudes,
)
from .fano import (
    FanoFit,
    LorentzPair,
    fano_fit,
    fano_regime,
    lorentz_decompose,
    rabi_approximation,
)
from .lindblad import (
    DriveSpec,
    LindbladResult,
    SpectrumResult,
    SteadyState,
    build_liouvillian,
    inelastic_spectrum,
    scattering_from_master,
    steady_state,
)
from .scattering import (
    Loci,
    RealSpaceSolution,
    ScatterPoint,
    amplitudes_general,
    amplitudes_topology,
    peak_minimum_loci,
    solve_real_space,
)

__all__ = [
    "CharQuantities",
    "ConfigError",
    "CouplingPoint",
    "DarkState",
    "DriveSpec",
    "EitVerdict",
    "FanoFit",
    "GawqedError",
    "GiantAtom",
    "LindbladResult",
    "Loci",
    "LorentzPair",
    "RealSpaceSolution",
    "Regime",
    "SABasisQuantities",
    "ScatterPoint",
    "Scheme",
    "SpectrumResult",
    "SteadyState",
    "SystemConfig",
    "Topology",
    "TopologyError",
    "amplitudes_general",
    "amplitudes_topology",
    "build_liouvillian",
    "characteristics",
    "classify_eit",
    "classify_topology",
    "collective_eit_amplitudes",
    "detunings",
    "fano_fit",
    "fano_regime",
    "inelastic_spectrum",
    "lambda_reference",
    "lorentz_decompose",
    "maximum_symmetric_quantities",
    "peak_minimum_loci",
    "rabi_approximation",
    "sa_basis",
    "scattering_from_master",
    "single_atom_eit_amplitudes",
    "solve_real_space",
    "steady_state",
    "symmetric_config",
]

__version__ = "0.1.0"
