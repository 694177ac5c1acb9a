"""renormlab: entropy, renormalization and period doubling for interval maps
and the Hénon family.

Set RENORMLAB_NO_NUMBA=1 to run the pure-numpy kernels instead of numba.
"""
from .errors import (
    BracketError,
    CertificateError,
    EntropyGateError,
    EscapeError,
    InputError,
    NonRecurrenceError,
    NumericalFailure,
    RenormlabError,
)
from .maps import (
    PiecewiseLinear,
    Quadratic,
    Rescaled,
    derivative,
    evaluate,
    iterate,
    orbit,
    parse_breakpoints,
    tent,
    turning_point,
)
from .symbolic import (
    CoveringGraph,
    EntropyEstimate,
    covering_graph,
    graph_entropy,
    itinerary,
    lap_entropy,
    misiurewicz_certificate,
    search_misiurewicz,
    separation_count,
    separation_entropy,
    spectral_radius,
)
from .renorm import (
    ConvergesToFixed,
    Renormalizable,
    RenormCertificate,
    period_set_validator,
    renorm_depth,
    renorm_operator,
    zero_entropy_dichotomy,
)
from .periodic import (
    CascadeRecord,
    PeriodicOrbitRecord,
    find_a_star,
    find_periods,
    localize_periodic,
    superstable_parameters,
)
from .henon import (
    HenonParams,
    attractor_sample,
    classify_orbit_fate,
    henon_cascade,
    henon_periodic_orbits,
    henon_step,
    mild_dissipation,
)
from .prototype import (
    AdicInteger,
    ChainGraph,
    adic_successor,
    build_prototype_chain,
    chain_period_set,
    cylinder_frequency,
    odometer_conjugacy_check,
)

__version__ = "0.1.0"
