"""Green's functions, hitting times, exit frequencies, and exact mixing measures for random walks on weighted digraphs."""

from .duality import (
    DualityReport,
    duality_checks,
    forget_distribution,
    forget_time,
    pi_core,
    reverse_chain,
)
from .errors import (
    GreenWalkError,
    IntegrityError,
    NumericalError,
    ParseError,
    RunawayError,
    ValidationError,
)
from .graph import (
    Distribution,
    TransitionMatrix,
    WeightedDigraph,
    load_graph,
    parse_graph,
    stationary_distribution,
    strongly_connected,
    transition_matrix,
)
from .greens import (
    ExitFrequencyMatrix,
    GreensMatrix,
    MixingReport,
    access_time,
    access_times,
    exit_frequency_matrix,
    greens_function,
    greens_general,
    hitting_from_greens,
    mixing_report,
    verify_green_constraints,
)
from .hitting import (
    FundamentalMatrix,
    HittingTimeMatrix,
    access_to_vertex,
    check_cycle_identities,
    fundamental_matrix,
    hit_time,
    hitting_times,
    return_times,
)
from .montecarlo import SimStats, empirical_hitting, empirical_random_target, simulate_walk
from .pipeline import ChainAnalysis, analyze
from .spectral import (
    SpectralDecomposition,
    decompose,
    eigensystem,
    normalized_laplacian,
    spectral_access_from_stationary,
    spectral_greens,
    spectral_hitting,
    spectral_mixing,
)

__version__ = "0.1.0"
