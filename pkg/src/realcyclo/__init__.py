"""Exact and fast arithmetic in Z[x]/(Psi_n) for conductors n = 2^r p^s.

Psi_n is the minimal polynomial of 2 cos(2 pi / n); the modified
Chebyshev polynomials V_0 .. V_{m-1} are its integral basis and the
native representation throughout. On top of the ring sit a DCT-based
quasilinear multiplier, closed-form condition-number checks for the
coefficient-to-embedding change of basis, and a root-attack scanner
for PLWE instances over the same quotients.
"""

from .attacks import (
    PRESETS,
    CampaignSummary,
    PlweParams,
    PlweSample,
    ScanReport,
    campaign_csv,
    campaign_json,
    cyclotomic_poly,
    discrete_gaussian,
    distinguisher,
    find_k_ideal_factors,
    find_roots,
    preset_check,
    run_campaign,
    sample_plwe,
    scan_json,
    scan_pair,
    standard_conductor_set,
)
from .dct import DctPlan, OpCount, dct2, dct3
from .embedding import (
    CosineMatrix,
    EliminationF,
    EmbeddingMatrix,
    cosine_condition,
    elimination_check,
    embedding_condition,
    frobenius_closed_form,
    gram_check,
)
from .errors import (
    DegreeTooLarge,
    DomainMismatch,
    IllConditioned,
    InvalidConductor,
    InvalidK,
    ModulusUnsuitable,
    NoSuchRoot,
    NotARoot,
    RealcycloError,
    SingularMatrix,
    SizeMismatch,
    ZeroElement,
)
from .finitefield import (
    CrtModulus,
    PrimeField,
    is_prime,
    mul_order,
    primes_in_range,
    root_of_unity,
)
from .minpoly import (
    Conductor,
    MinimalPolynomial,
    build_min_poly,
    conductors_up_to,
    verify_min_poly_numeric,
)
from .ring import (
    RingElement,
    UnreducedProduct,
    mul_fast,
    mul_fast_real,
    mul_schoolbook,
    random_element,
    reduce,
    to_power_basis,
    to_v_basis,
)

__version__ = "0.1.0"
