"""Effect operators, POVM norm-1 diagnostics, and phase / phase-space models.

The package builds quantum observables (finite-outcome POVMs and
truncations of phase, phase-space, and localization observables) as
validated effect operators and checks their order-theoretic properties:
the norm-1 property and its equivalence with epsilon-decidability,
regularity, infima of effects with their complements, coarse-graining
channels, and the Gaussian probability laws of two-photon coherent states.
"""

from .effects import (
    DEFAULT_TOL,
    Effect,
    SpectralDecomposition,
    ToleranceConfig,
    complement,
    diagonal_effect,
    glb_with_rank1,
    identity_effect,
    infimum_with_complement,
    is_lower_bound,
    is_regular,
    operator_norm,
    projection_effect,
    psd_leq,
    reduced_operators,
    sqrt_effect,
    validate_effect,
    zero_effect,
)
from .povm import (
    PartitionPOVM,
    algebra_effect,
    epsilon_decider,
    has_norm1_property,
    is_regular_povm,
    lueders_coarse_graining,
    coarse_graining_limit_check,
    norm1_implies_regular_check,
    partition_povm,
    spectrum_endpoints_check,
    variance,
    variance_probe,
)
from .phase import (
    ArcSet,
    GramKernel,
    arc_fourier,
    canonical_kernel,
    canonical_norm_scan,
    canonical_spectrum_fill,
    covariance_check,
    elementary_eigenvalues,
    elementary_kernel,
    explicit_kernel,
    phase_effect,
)
from .phase_space import (
    PolarRegion,
    RealRegion,
    angle_margin,
    angle_margin_norm1_probe,
    cartesian_margin_effect,
    cartesian_symbol,
    coherent_amplitudes,
    coherent_overlap,
    number_margin,
    phase_space_effect,
    truncated_coherent_state,
)
from .tcs import (
    TCSParams,
    angle_density,
    angle_density_limits,
    cartesian_marginal_prob,
    coherent_family,
    marginal_variance,
    q_density,
    squeezed_family,
    tcs_overlap,
    uncertainty_product,
)
from .measures import (
    BorelDescriptor,
    CyclicCovarianceModel,
    FatCantorModel,
    cantor_effect_norm,
    cantor_norm1_on_opens_check,
    compact_exhaustion_norm,
    covariant_null_check,
    haar_identity_check,
)

__version__ = "0.1.0"
