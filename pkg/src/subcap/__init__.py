"""Capacity scaling of multi-path MIMO channels: fading matrices, structural
certificates, Foschini-Gans capacity and sub-linear capacity bounds."""
from .bounds import (
    BoundReport,
    capacity_bound_exponential,
    capacity_bound_power,
    counting_bound_generic,
    counting_bound_power,
    verify_capacity_bound,
    verify_counting_bound,
    verify_densta_domination,
)
from .capacity import (
    CapacityResult,
    capacity_from_counting_integral,
    capacity_from_fading_eigs,
    capacity_from_singular_values,
    capacity_logdet,
)
from .channel import (
    ArrayGeometry,
    ScatteringPath,
    ScatteringScenario,
    fading_matrix,
    fourier_basis,
    iid_gaussian_transfer_matrix,
    normalize_total_power,
    scattering_transfer_matrix,
)
from .linalg import (
    BACKEND,
    SpectralSummary,
    check_interlacing_counting,
    counting_function,
    hermitian_eigen,
    operator_norm,
    row_sum_norm_bound,
    split_diag_offdiag,
    trailing_principal_submatrix,
)
from .structure import (
    StructureReport,
    build_structure_report,
    check_a1_prime,
    fit_power_envelope,
    minimal_alpha,
    sort_diagonal_descending,
)

__version__ = "0.1.0"
