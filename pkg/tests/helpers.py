import numpy as np

from src.core import CompositeSequence


def sin_half(eps):
    return np.sin(0.5 * np.pi * np.asarray(eps, dtype=float))


def random_sequence(rng, max_pulses: int = 6) -> CompositeSequence:
    n = int(rng.integers(1, max_pulses + 1))
    areas = rng.choice([0.5, 1.0], size=n)
    phases = rng.uniform(0.0, 2.0, size=n)
    return CompositeSequence.from_phases(areas.tolist(), phases.tolist(), label=f"random{n}")
