from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Tuple

from src.errors import InvalidPulseError


def canonical_phase(phase_pi: float) -> float:
    """Map a phase (units of π) into [0, 2)."""
    x = math.fmod(phase_pi, 2.0)
    if x < 0:
        x += 2.0
    # fmod of values like -1e-17 lands on 2.0 after the shift
    return 0.0 if x >= 2.0 else x


def phase_distance(p: float, q: float) -> float:
    """Distance between two phases on the circle, units of π, in [0, 1]."""
    d = canonical_phase(p - q)
    return min(d, 2.0 - d)


@dataclass(frozen=True)
class Pulse:
    """One resonant pulse: nominal area and phase, both in units of π."""

    area_pi: float
    phase_pi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.area_pi) or self.area_pi <= 0:
            raise InvalidPulseError(f"pulse area must be positive and finite, got {self.area_pi}")
        if not math.isfinite(self.phase_pi):
            raise InvalidPulseError(f"pulse phase must be finite, got {self.phase_pi}")

    @property
    def canonical(self) -> "Pulse":
        return Pulse(self.area_pi, canonical_phase(self.phase_pi))

    def shifted(self, delta_pi: float) -> "Pulse":
        return Pulse(self.area_pi, self.phase_pi + delta_pi)

    def __str__(self) -> str:
        letter = {0.5: "A", 1.0: "B"}.get(self.area_pi, f"({self.area_pi:g})")
        return f"{letter}[{canonical_phase(self.phase_pi):.4f}]"


@dataclass(frozen=True)
class CompositeSequence:
    """Ordered pulse train; pulse 1 acts first.

    ``family``, ``n``, ``theta_pi`` and ``p_target`` record where the sequence
    came from and travel with it into documents.
    """

    pulses: Tuple[Pulse, ...]
    label: str = ""
    family: Optional[str] = None
    n: Optional[int] = None
    theta_pi: Optional[float] = None
    p_target: Optional[float] = None
    variant: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        pulses = tuple(self.pulses)
        if not pulses:
            raise InvalidPulseError("a composite sequence needs at least one pulse")
        for p in pulses:
            if not isinstance(p, Pulse):
                raise InvalidPulseError(f"not a Pulse: {p!r}")
        object.__setattr__(self, "pulses", pulses)

    @classmethod
    def from_phases(cls, areas_pi: Sequence[float], phases_pi: Sequence[float], **info) -> "CompositeSequence":
        if len(areas_pi) != len(phases_pi):
            raise InvalidPulseError(
                f"{len(areas_pi)} areas but {len(phases_pi)} phases"
            )
        return cls(tuple(Pulse(float(a), float(p)) for a, p in zip(areas_pi, phases_pi)), **info)

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    def __add__(self, other: "CompositeSequence") -> "CompositeSequence":
        return CompositeSequence(self.pulses + other.pulses, label=f"{self.label}+{other.label}")

    @property
    def areas_pi(self) -> Tuple[float, ...]:
        return tuple(p.area_pi for p in self.pulses)

    @property
    def phases_pi(self) -> Tuple[float, ...]:
        return tuple(p.phase_pi for p in self.pulses)

    @property
    def canonical_phases_pi(self) -> Tuple[float, ...]:
        return tuple(canonical_phase(p.phase_pi) for p in self.pulses)

    @property
    def total_area_pi(self) -> float:
        return float(sum(self.areas_pi))

    def with_phases(self, phases_pi: Iterable[float], **info) -> "CompositeSequence":
        phases = tuple(phases_pi)
        if len(phases) != len(self.pulses):
            raise InvalidPulseError(f"expected {len(self.pulses)} phases, got {len(phases)}")
        pulses = tuple(Pulse(p.area_pi, float(x)) for p, x in zip(self.pulses, phases))
        return replace(self, pulses=pulses, **info)

    def relabel(self, label: str, **info) -> "CompositeSequence":
        return replace(self, label=label, **info)

    def reversed(self) -> "CompositeSequence":
        return replace(self, pulses=self.pulses[::-1], label=f"reverse({self.label})" if self.label else "")

    def notation(self) -> str:
        return " ".join(str(p) for p in self.pulses)
