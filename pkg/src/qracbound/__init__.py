"""Bloch-vector geometry of N-level states and bounds on quantum random access codes."""

from .basis import bloch_to_density, density_to_bloch, gellmann_generators, overlap
from .constructions import construct_known
from .errors import (
    DegenerateFactorizationError,
    DegenerateScalingError,
    NumericError,
    QracError,
    StrategyFormatError,
    UnsupportedConstructionError,
    ValidationError,
)
from .geometry import (
    boundary_radius,
    boundary_scaling,
    geometry_constants,
    halfspace_contains,
    is_valid_bloch,
    midpoint_construction,
    pair_distance,
)
from .linalg import eigenspace_projector, eigh, min_eigenvalue
from .oracles import mancinska_check, parseval_sign_identity, run_campaign
from .qrac import (
    BinaryPovmBloch,
    QracStrategy,
    avg_success,
    avg_success_decomposed,
    is_projective,
    povm_factorize,
    povm_matrices,
    simulate,
    upper_bound,
    worst_case_success,
    xor_randomized_worst_case,
)
from .seesaw import SeesawConfig, seesaw

__version__ = "0.1.0"
