"""Predictability and coherence of quantum states relative to observable bases."""

from .channels import (
    KrausChannel,
    dephasing_channel,
    double_dephasing,
    monitoring_lambda,
    monitoring_theta,
)
from .composite import BipartiteState, joint_predictability, mutual_information_diag
from .errors import PredictabilityError
from .linalg import partial_trace, relative_entropy, trace_distance, von_neumann_entropy
from .measures import (
    coherence_re,
    information_measure,
    minimize_over_free_states,
    predictability_linear,
    predictability_vn,
    predictability_yasin,
    witness_operator,
)
from .states import (
    ObservableBasis,
    b2_basis,
    computational_basis,
    fourier_mub_partner,
    free_state,
    gell_mann_basis,
    haar_random_pure,
    random_basis,
    random_density,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteState",
    "KrausChannel",
    "ObservableBasis",
    "PredictabilityError",
    "b2_basis",
    "coherence_re",
    "computational_basis",
    "dephasing_channel",
    "double_dephasing",
    "fourier_mub_partner",
    "free_state",
    "gell_mann_basis",
    "haar_random_pure",
    "information_measure",
    "joint_predictability",
    "minimize_over_free_states",
    "monitoring_lambda",
    "monitoring_theta",
    "mutual_information_diag",
    "partial_trace",
    "predictability_linear",
    "predictability_vn",
    "predictability_yasin",
    "random_basis",
    "random_density",
    "relative_entropy",
    "trace_distance",
    "von_neumann_entropy",
    "witness_operator",
]
