"""Lowest-eigenvalue statistics of k-body bosonic embedded Gaussian ensembles.

The package builds BEGOE(k)/BEGUE(k) ensembles (a GOE/GUE drawn in k-boson
space and propagated to the m-boson space), diagonalizes the members, and
characterizes the distribution of the lowest eigenvalue and lowest spacing
against Gaussian, modified Gumbel, Tracy-Widom and Poisson/Wigner-surmise
references, parameterized by the q-normal shape parameter q(N, m, k).
"""

__version__ = "0.1.0"

from .distributions import (
    DistributionTable,
    GumbelParams,
    gaussian_std,
    gumbel_pdf,
    gumbel_standardize,
    gumbel_table,
    spacing_reference,
    tracy_widom,
    tracy_widom_standardized,
    tw_normalize,
)
from .eigen import Spectrum, eigenvalues_selfadjoint, lowest_two
from .ensemble import (
    EmbeddedHamiltonian,
    EmbeddingPlan,
    EnsembleSpec,
    dump_kbody_csv,
    embed,
    embed_kbody,
    embedding_plan,
    generate_ensemble,
    member_seed,
    sample_kbody,
)
from .fock import (
    apply_pair_monomial,
    dimension,
    enumerate_basis,
    index_state,
    state_index,
)
from .kernels import USING_COMPILED_KERNEL
from .qnormal import (
    q_factorial,
    q_from_eigenvalues,
    q_hermite,
    q_normal_pdf,
    q_number,
    q_parameter,
    q_support,
    spectral_variance,
    propagation_factor,
    unitary_block_dimension,
)
from .runner import (
    RunConfig,
    RunManifest,
    compute_records,
    config_from_dict,
    config_from_yaml,
    run,
    sweep_q,
)
from .stats import (
    EnsembleRecord,
    FitReport,
    Histogram,
    MomentSummary,
    alpha_ergodic,
    alpha_from_centroid,
    fit_distribution,
    fit_spacing,
    histogram,
    moments,
    scale_lowest,
    spacing_sample,
    width_exponents,
)
