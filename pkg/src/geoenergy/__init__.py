"""
Energies of equally spaced points on closed curves: exact sums, complete
asymptotic expansions in N, and numerical checkers for both.
"""

from .asymptotics import (
    Expansion,
    ExpansionTerm,
    build_expansion,
    evaluate_expansion,
    expansion_euclid,
    expansion_from_json,
    expansion_geodesic,
    expansion_log,
    expansion_riesz,
    expansion_to_json,
)
from .energy import (
    Configuration,
    Curve,
    brute_force_energy,
    continuous_energy,
    equally_spaced,
    euclid_exact,
    exact_energy,
    log_exact,
    neg_int_exact,
    riesz_exact,
)
from .errors import (
    ConfigurationError,
    DomainError,
    GeoEnergyError,
    ParityMismatchError,
    PoleError,
    UnsupportedOrderError,
)
from .kernels import (
    ExpInv,
    Kernel,
    LaplaceDiscrete,
    Laurent,
    Log,
    PowerSeries,
    Riesz,
    SincWeighted,
    Weighted,
    parse_kernel,
)
from .verify import identity_suite, kernel_order_fit, optimality_search, order_fit

__version__ = "0.1.0"
