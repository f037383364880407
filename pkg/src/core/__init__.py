from src.core.jet import Jet
from src.core.sequence import CompositeSequence, Pulse, canonical_phase, phase_distance
from src.core.propagator import (
    Propagator,
    bloch_inversion,
    cayley_klein,
    compose,
    inversion,
    jet_compose,
    probabilities,
    probability_series,
    probability_series_scaled,
    pulse_propagator,
    transition_probability,
)

__all__ = [
    "Jet",
    "Pulse",
    "CompositeSequence",
    "Propagator",
    "canonical_phase",
    "phase_distance",
    "pulse_propagator",
    "compose",
    "cayley_klein",
    "transition_probability",
    "probabilities",
    "inversion",
    "bloch_inversion",
    "jet_compose",
    "probability_series",
    "probability_series_scaled",
]
