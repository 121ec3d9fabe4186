"""Numerics for the resource theory of imaginarity."""
from .core import (
    DEFAULT_TOL,
    DimensionError,
    ImaginarityError,
    InvalidStateError,
    NotCPTPError,
    NotUnitaryError,
    Tolerance,
    is_hermitian,
    is_psd,
    is_symmetric,
    partial_transpose_a,
    trace_norm,
    unvec,
    vec,
)
from .states import (
    BlochVector,
    CanonicalForm,
    bloch_of_qubit,
    canonical_pure_form,
    decompose_pure,
    density_matrix,
    half_diagonal_form,
    is_free_state,
    maximally_imaginary,
    pure_state,
    qubit_of_bloch,
    split_real_imag,
    theta_state,
)
from .channels import (
    Channel,
    Dilation,
    FreeUnitaryFactorization,
    apply,
    apply_batch,
    choi_from_kraus,
    dilation_from_kraus,
    is_completely_rng,
    is_free_unitary,
    is_rng,
    is_transposition_covariant,
    kraus_from_choi,
    rng_oracle,
    sample_channel,
    sample_real_choi_channel,
)
from .measures import MeasureReport, measure_m, measure_m_qubit, robustness
from .transforms import (
    AffineMap,
    NotConvertibleError,
    TransformPlan,
    bloch_affine_to_choi,
    synthesize,
    synthesize_to_mixed,
    theorem5_affine,
    transform_exists,
)

__version__ = "0.1.0"
