"""Entanglement analysis for pure states of identical fermions."""
__version__ = "0.1.0"

from ._accel import backend
from .criteria import (
    Classification,
    Correlation,
    PurityBounds,
    Verdict,
    classify,
    correlation_criterion,
    fermionic_concurrence,
    purity_bounds,
)
from .fock import (
    DistinguishableState,
    FermionState,
    ProductState,
    antisymmetrize,
    build_reference_state,
    freeze,
    overlap,
    rank_subset,
    single_particle_transform,
    unrank_subset,
)
from .io import load_state, save_state
from .rdm import DensityMatrix, Spectrum, linear_entropy, purity, reduce, reduce_bipartite, spectral
from .slater import (
    CoeffMatrix,
    SchmidtDecomposition,
    SlaterDecomposition,
    coeff_matrix,
    concurrence_2f,
    concurrence_2qubit,
    schmidt_decompose,
    slater_decompose,
    slater_rank,
)
from .trap import (
    Kernel,
    TrapGrid,
    TrapReport,
    hermite_mode,
    kernel_purity,
    one_body_kernel,
    psi_gs,
    psi_ordered,
    trap_report,
)
