"""Fourier analysis of random and structured subsets of F_p^d."""

__version__ = "0.1.0"

from .constructions import affine_subspace, paraboloid, sphere  # noqa: E402
from .deviation import (  # noqa: E402
    DeviationParams,
    TheoremParams,
    chebyshev_size_bound,
    cosine_identity_check,
    deviation_bound,
    failure_prob_bound,
    hayes_threshold,
    main_threshold,
    proof_alpha,
    proof_lambda,
    proof_mu2,
)
from .errors import InputError, ResourceError  # noqa: E402
from .explore import SearchResult, conjecture_explore  # noqa: E402
from .field import SpaceParams, coords_of, dot, index_of  # noqa: E402
from .harness import (  # noqa: E402
    ExperimentSummary,
    VariableSpec,
    expectation_identity_experiment,
    lemma_oracle_experiment,
    percolation_tail_experiment,
    real_imag_tail_experiment,
    size_concentration_experiment,
    uniform_tail_experiment,
)
from .sampling import SeedSpec, sample_bernoulli, sample_uniform_m  # noqa: E402
from .spectral import (  # noqa: E402
    PhiResult,
    PointSet,
    Spectrum,
    character,
    dft_full,
    dft_single,
    dft_tolerance,
    phi,
    plancherel_residual,
    salem_ratio,
    weak_salem_check,
)
