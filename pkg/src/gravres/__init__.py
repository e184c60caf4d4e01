"""Resource-theoretic analysis of gravitationally induced entanglement between two masses.

Each mass is an orbital qubit (|L>, |R>). Gravity multiplies each branch of the
joint state by a phase, which converts the local coherence of each mass into
entanglement between them.
"""

from .complementarity import (
    COLUMNS,
    ComplementarityReport,
    Relation,
    SweepRecord,
    check_relations,
    evaluate,
    sweep_initial_coherence,
    sweep_phases,
)
from .errors import ConfigError, GravresError, InvalidInputError, NumericalError
from .gravity import (
    GravUnitary,
    PhaseSet,
    PhysicalConfig,
    build_unitary,
    compute_phases,
    evolve,
    is_incoherent_unitary,
)
from .linalg import Spectrum, dagger, hermitian_eig, kron, matmul, trace_norm
from .measures import (
    Measure,
    MeasureValue,
    binary_entropy,
    concurrence,
    entanglement_entropy,
    l1_coherence,
    negativity,
    relative_entropy_coherence,
    von_neumann_entropy,
)
from .states import (
    AmplitudeSet,
    DensityMatrix,
    ProductStateParams,
    PureState,
    build_product_state,
    is_incoherent_state,
    is_maximally_coherent,
    partial_trace,
    partial_transpose,
    pure_to_density,
)

__version__ = "0.1.0"
