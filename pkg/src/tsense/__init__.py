"""Fisher-information analysis of trilinear bosonic coupling sensing."""

from .dynamics import (
    AmplitudeSet,
    EvolutionParams,
    Spectrum,
    diagonalize,
    evolve,
    evolve_vector,
    outcome_probabilities,
)
from .errors import (
    ConfigurationError,
    NumericError,
    ResourceError,
    TsenseError,
    UndefinedBoundError,
)
from .ladder import FockConfig, InteractionKind, Ladder, build_ladder
from .metrology import (
    BinaryFock,
    FullPNR,
    MeasurementScheme,
    PreparedProbe,
    SensitivityProfile,
    SequentialS0,
    cramer_rao,
    dynamic_range,
    dynamic_range_formula,
    fisher,
    fisher_limit_closed_form,
    qfi_coherent,
    qfi_variance,
    scan,
)
from .optimize import (
    OptimalResult,
    asymptotic_prediction,
    lagrange_relaxation,
    optimize_config,
    optimize_config_weighted,
    scaling_table,
)
from .probes import (
    CoherentProduct,
    Component,
    NoisyFock,
    Probe,
    PureFock,
    WeightedComponents,
    decompose,
    mean_occupations,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSet",
    "BinaryFock",
    "CoherentProduct",
    "Component",
    "ConfigurationError",
    "EvolutionParams",
    "FockConfig",
    "FullPNR",
    "InteractionKind",
    "Ladder",
    "MeasurementScheme",
    "NoisyFock",
    "NumericError",
    "OptimalResult",
    "PreparedProbe",
    "Probe",
    "PureFock",
    "ResourceError",
    "SensitivityProfile",
    "SequentialS0",
    "Spectrum",
    "TsenseError",
    "UndefinedBoundError",
    "WeightedComponents",
    "asymptotic_prediction",
    "build_ladder",
    "cramer_rao",
    "decompose",
    "diagonalize",
    "dynamic_range",
    "dynamic_range_formula",
    "evolve",
    "evolve_vector",
    "fisher",
    "fisher_limit_closed_form",
    "lagrange_relaxation",
    "mean_occupations",
    "optimize_config",
    "optimize_config_weighted",
    "outcome_probabilities",
    "qfi_coherent",
    "qfi_variance",
    "scaling_table",
    "scan",
]
