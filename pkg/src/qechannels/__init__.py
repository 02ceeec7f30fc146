"""Time-averaged unraveling of qubit states into per-qubit multi-tone dynamics."""

__version__ = "0.1.0"

from .analysis import (
    Cut,
    SpectrumLine,
    bipartite_determinant,
    reduced_purity,
    schmidt_rank,
    schmidt_values,
    spectrum,
    time_series,
)
from .averaging import (
    QuadratureGrid,
    ResonanceTerm,
    expand_terms,
    leakage_estimate,
    numeric_average,
    symbolic_average,
    window_average,
    window_averages,
)
from .errors import AliasingWarning, BudgetError, InvalidStateError, QECError, SynthesisError
from .statecore import (
    DynamicComposite,
    DynamicQubit,
    StaticState,
    Tone,
    evaluate,
    evaluate_many,
    fidelity,
    inner_product,
    tensor_product_static,
)
from .unraveler import (
    FrequencyAssignment,
    SynthesisConfig,
    assign_frequencies,
    collision_scan,
    preset_bell,
    preset_w,
    set_amplitudes,
    synthesize,
    synthesize_detailed,
)
