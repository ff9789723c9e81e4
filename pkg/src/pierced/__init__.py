"""Recognition and ball realization of inductively pierced combinatorial codes."""

from pierced.code import (
    Code,
    CodeError,
    Interval,
    MissingEmptyCodeword,
    NeuronMap,
    canonicalize,
    delete_neurons,
    interval_contained,
    is_full_power_set_on,
    parse_code,
)
from pierced.geometry import Ball, Realization, WitnessRegistry, realize
from pierced.ideal import (
    CanonicalForm,
    LimitExceeded,
    PseudoMonomial,
    canonical_form,
    canonical_form_oracle,
)
from pierced.piercing import (
    NotChordal,
    NotDegreeTwo,
    Pierced,
    PiercingOrder,
    PiercingStep,
    compute_piercing_order,
    random_pierced_code,
    replay,
)
from pierced.splitting import SplitCertificate, is_splittable, min_realization_dim

__all__ = [
    "Ball",
    "CanonicalForm",
    "Code",
    "CodeError",
    "Interval",
    "LimitExceeded",
    "MissingEmptyCodeword",
    "NeuronMap",
    "NotChordal",
    "NotDegreeTwo",
    "Pierced",
    "PiercingOrder",
    "PiercingStep",
    "PseudoMonomial",
    "Realization",
    "SplitCertificate",
    "WitnessRegistry",
    "canonical_form",
    "canonical_form_oracle",
    "canonicalize",
    "compute_piercing_order",
    "delete_neurons",
    "interval_contained",
    "is_full_power_set_on",
    "is_splittable",
    "min_realization_dim",
    "parse_code",
    "random_pierced_code",
    "realize",
    "replay",
]
