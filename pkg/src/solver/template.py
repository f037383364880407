from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from src.core import CompositeSequence, probability_series
from src.errors import InvalidParameterError

LETTER_AREAS = {"A": 0.5, "B": 1.0}


@dataclass(frozen=True)
class SolveTemplate:
    """Fixed pulse areas plus which phases the solver may move.

    Phases not in ``free_mask`` are held at ``fixed_phases_pi`` (zero unless
    given). ``annul_count`` is M, the number of coefficients c_1..c_M driven
    to zero on top of c_0 = P_target; it defaults to one less than the number
    of free phases.
    """

    areas_pi: Tuple[float, ...]
    p_target: float
    free_mask: Optional[Tuple[bool, ...]] = None
    annul_count: Optional[int] = None
    fixed_phases_pi: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        areas = tuple(float(a) for a in self.areas_pi)
        if not areas or any(not math.isfinite(a) or a <= 0 for a in areas):
            raise InvalidParameterError(f"template areas must be positive, got {self.areas_pi}")
        object.__setattr__(self, "areas_pi", areas)

        if not 0.0 <= float(self.p_target) <= 1.0:
            raise InvalidParameterError(f"target probability must lie in [0, 1], got {self.p_target}")

        mask = self.free_mask
        if mask is None:
            mask = (False,) + (True,) * (len(areas) - 1)
        mask = tuple(bool(m) for m in mask)
        if len(mask) != len(areas):
            raise InvalidParameterError(f"free mask has {len(mask)} entries for {len(areas)} pulses")
        object.__setattr__(self, "free_mask", mask)

        fixed = self.fixed_phases_pi
        fixed = tuple(float(x) for x in fixed) if fixed is not None else (0.0,) * len(areas)
        if len(fixed) != len(areas):
            raise InvalidParameterError(f"{len(fixed)} fixed phases for {len(areas)} pulses")
        object.__setattr__(self, "fixed_phases_pi", fixed)

        n_free = sum(mask)
        if n_free < 1:
            raise InvalidParameterError("template has no free phase")
        m = n_free - 1 if self.annul_count is None else int(self.annul_count)
        if m < 0 or m > n_free:
            raise InvalidParameterError(
                f"cannot annul {m} coefficients with {n_free} free phase(s)"
            )
        object.__setattr__(self, "annul_count", m)

    @classmethod
    def from_letters(cls, letters: str, p_target: float, **kwargs) -> "SolveTemplate":
        """Template from a pulse string such as ``"ABBBA"``."""
        letters = letters.strip().upper()
        unknown = set(letters) - set(LETTER_AREAS)
        if not letters or unknown:
            raise InvalidParameterError(f"template letters must be A or B, got {letters!r}")
        return cls(tuple(LETTER_AREAS[c] for c in letters), p_target, **kwargs)

    @property
    def n_free(self) -> int:
        return sum(self.free_mask)

    @property
    def total_area_pi(self) -> float:
        return float(sum(self.areas_pi))

    @property
    def is_palindromic(self) -> bool:
        return self.areas_pi == self.areas_pi[::-1]

    @property
    def letters(self) -> str:
        inv = {v: k for k, v in LETTER_AREAS.items()}
        return "".join(inv.get(a, "?") for a in self.areas_pi)

    def with_annul_count(self, m: int) -> "SolveTemplate":
        return SolveTemplate(self.areas_pi, self.p_target, self.free_mask, m, self.fixed_phases_pi)

    def with_target(self, p_target: float) -> "SolveTemplate":
        return SolveTemplate(self.areas_pi, p_target, self.free_mask, self.annul_count, self.fixed_phases_pi)

    def expand(self, free_values: Sequence[float]) -> np.ndarray:
        """Full phase vector from the free unknowns."""
        free_values = np.asarray(free_values, dtype=float)
        if free_values.size != self.n_free:
            raise InvalidParameterError(f"expected {self.n_free} free phases, got {free_values.size}")
        phases = np.array(self.fixed_phases_pi, dtype=float)
        phases[np.array(self.free_mask)] = free_values
        return phases

    def free_part(self, phases_pi: Sequence[float]) -> np.ndarray:
        return np.asarray(phases_pi, dtype=float)[np.array(self.free_mask)]

    def sequence(self, phases_pi: Sequence[float], label: str = "") -> CompositeSequence:
        if len(phases_pi) != len(self.areas_pi):
            raise InvalidParameterError(
                f"template has {len(self.areas_pi)} pulses, got {len(phases_pi)} phases"
            )
        return CompositeSequence.from_phases(
            self.areas_pi, [float(x) for x in phases_pi],
            label=label or f"{self.letters} P={self.p_target:g}",
            family="solved", n=len(self.areas_pi), p_target=float(self.p_target),
        )


@dataclass(frozen=True)
class SolveResult:
    phases_pi: Tuple[float, ...]
    residual_norm: float
    achieved_order: int
    branch_id: int
    annulled: int = 0
    origin: str = field(default="", compare=False)


def objective(template: SolveTemplate, phases_pi: Sequence[float], annul_count: Optional[int] = None) -> np.ndarray:
    """(c_0 − P_target, c_1, …, c_M) for the full phase vector."""
    m = template.annul_count if annul_count is None else annul_count
    seq = template.sequence(list(phases_pi))
    c = probability_series(seq, max(m, 1))
    res = np.empty(m + 1)
    res[0] = c[0] - template.p_target
    res[1:] = c[1 : m + 1]
    return res
