"""Analytic composite pulse families.

Every constructor returns a ``CompositeSequence`` whose areas and phases are
in units of π. ``A`` denotes a nominal π/2 pulse (area 1/2) and ``B`` a
nominal π pulse (area 1).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from src.core import CompositeSequence, Pulse, compose, transition_probability
from src.errors import InvalidParameterError

logger = logging.getLogger(__name__)

A = 0.5
B = 1.0

TWIN_BASE_TOL = 1e-9


class Family(str, Enum):
    PRIME2 = "prime2"
    PRIME3 = "prime3"
    PRIME4_ABBA = "prime4_abba"
    PRIME4_AAAA = "prime4_aaaa"
    SYM_HALF_PI = "sym_half_pi"
    ASYM_HALF_PI = "asym_half_pi"
    TWIN_SYM = "twin_sym"
    TWIN_ASYM = "twin_asym"
    TWIN_ASYM_REVERSED = "twin_asym_reversed"
    BB1 = "bb1"
    LEVITT_ERNST = "levitt_ernst"


# pulse counts of the fixed-length families
FIXED_SIZES = {
    Family.PRIME2: (2,),
    Family.PRIME3: (3,),
    Family.PRIME4_ABBA: (4,),
    Family.PRIME4_AAAA: (4,),
    Family.BB1: (5,),
    Family.LEVITT_ERNST: (4, 8),
}


@dataclass(frozen=True)
class FamilyDescriptor:
    family: Family
    n: Optional[int] = None
    theta_pi: Optional[float] = None
    variant: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        sizes = FIXED_SIZES.get(self.family)
        if self.n is not None and sizes is not None and self.n not in sizes:
            allowed = " or ".join(str(s) for s in sizes)
            raise InvalidParameterError(f"{self.family.value} has N={allowed}, got N={self.n}")
        if self.theta_pi is not None and not 0.0 < self.theta_pi <= 1.0:
            raise InvalidParameterError(f"theta must lie in (0, 1] (units of pi), got {self.theta_pi}")


# -- helpers -----------------------------------------------------------------

def _check_probability(p_target: float) -> float:
    p = float(p_target)
    if not math.isfinite(p) or not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"target probability must lie in [0, 1], got {p_target}")
    return p


def _check_theta(theta_pi: float) -> float:
    t = float(theta_pi)
    if not math.isfinite(t) or not 0.0 < t <= 1.0:
        raise InvalidParameterError(f"theta must lie in (0, 1] (units of pi), got {theta_pi}")
    return t


def target_probability(theta_pi: float) -> float:
    """𝒫_θ = sin²(θ/2)."""
    t = float(theta_pi)
    if not 0.0 <= t <= 2.0:
        raise InvalidParameterError(f"theta must lie in [0, 2] (units of pi), got {theta_pi}")
    return math.sin(0.5 * math.pi * t) ** 2


def theta_for(p_target: float) -> float:
    """Principal rotation angle (units of π) with sin²(θ/2) = p_target."""
    p = _check_probability(p_target)
    return math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * p))) / math.pi


def _seq(areas: Sequence[float], phases: Sequence[float], family: Family, n: int, label: str,
         p_target: Optional[float] = None, theta_pi: Optional[float] = None,
         variant: Optional[str] = None) -> CompositeSequence:
    if p_target is None and theta_pi is not None:
        p_target = target_probability(theta_pi)
    if theta_pi is None and p_target is not None:
        theta_pi = theta_for(p_target)
    return CompositeSequence.from_phases(
        areas, phases,
        label=label, family=family.value, n=n,
        theta_pi=theta_pi, p_target=p_target, variant=variant,
    )


# -- prime sequences -----------------------------------------------------------

def prime_two(p_target: float, branch: str = "+") -> CompositeSequence:
    """A₀ A_{φ₂} with φ₂ = π ∓ θ; exact to first order."""
    if branch not in ("+", "-"):
        raise InvalidParameterError(f"branch must be '+' or '-', got {branch!r}")
    p = _check_probability(p_target)
    theta = theta_for(p)
    phi2 = 1.0 - theta if branch == "+" else 1.0 + theta
    return _seq([A, A], [0.0, phi2], Family.PRIME2, 2, f"prime2 P={p:g}",
                p_target=p, theta_pi=theta, variant=branch)


def prime_three(p_target: float, variant: int = 4) -> CompositeSequence:
    p = _check_probability(p_target)
    if variant not in (1, 2, 3, 4):
        raise InvalidParameterError(f"prime3 variant must be 1..4, got {variant}")
    theta = theta_for(p)
    alpha = 0.5 * theta
    cos_beta = min(1.0, max(-1.0, math.sqrt(p) - math.sqrt(1.0 - p)))
    beta = math.acos(cos_beta) / math.pi
    phases = {
        1: (beta, alpha, -beta),
        2: (-beta, alpha, beta),
        3: (0.0, alpha - beta, -2.0 * beta),
        4: (0.0, alpha + beta, 2.0 * beta),
    }[variant]
    return _seq([A, B, A], phases, Family.PRIME3, 3, f"prime3 P={p:g} v{variant}",
                p_target=p, theta_pi=theta, variant=str(variant))


def prime_four(p_target: float, cls: str = "ABBA", variant: str = "b") -> CompositeSequence:
    p = _check_probability(p_target)
    cls = cls.upper()
    if variant not in ("a", "b"):
        raise InvalidParameterError(f"prime4 variant must be 'a' or 'b', got {variant!r}")
    t = theta_for(p)
    if cls == "ABBA":
        areas = [A, B, B, A]
        phases = (0.0, 2.0 / 3.0, t - 1.0 / 3.0, t + 1.0) if variant == "a" else \
                 (0.0, 2.0 / 3.0, 5.0 / 3.0 - t, 1.0 - t)
        family = Family.PRIME4_ABBA
    elif cls == "AAAA":
        areas = [A, A, A, A]
        phases = (0.0, 0.5, t - 0.5, t + 1.0) if variant == "a" else \
                 (0.0, 1.5, t + 0.5, t + 1.0)
        family = Family.PRIME4_AAAA
    else:
        raise InvalidParameterError(f"prime4 class must be ABBA or AAAA, got {cls!r}")
    return _seq(areas, phases, family, 4, f"prime4 {cls}-{variant} P={p:g}",
                p_target=p, theta_pi=t, variant=variant)


# -- pi/2 families -------------------------------------------------------------

def half_pi_multipliers(family: str, n: int) -> List[int]:
    """Multipliers m giving further exact π/2 members when the phase formula is scaled by m.

    Only one of m and L − m is listed (they are mirror images under negation),
    where L is the period of the formula's phases.
    """
    family = Family(family)
    if family == Family.SYM_HALF_PI:
        period = 4 * (n - 1)
    elif family == Family.ASYM_HALF_PI:
        period = 2 * n - 1
    else:
        raise InvalidParameterError(f"no multiplier set for family {family.value}")
    if period <= 2:
        return [1]
    return [m for m in range(1, period // 2 + 1) if math.gcd(m, period) == 1]


def symmetric_half_pi(n: int, multiplier: int = 1) -> CompositeSequence:
    """A B…B A with φ_k = (k−1)²π/(2(N−1)); P = 1/2 − sin^{2N−2}(πε/2)/2."""
    if int(n) != n or n < 2:
        raise InvalidParameterError(f"symmetric pi/2 sequences need N >= 2, got {n}")
    n = int(n)
    if math.gcd(multiplier, 4 * (n - 1)) != 1:
        raise InvalidParameterError(f"multiplier {multiplier} shares a factor with {4 * (n - 1)}")
    areas = [A] + [B] * (n - 2) + [A]
    phases = [multiplier * (k - 1) ** 2 / (2.0 * (n - 1)) for k in range(1, n + 1)]
    label = f"sym_half_pi N={n}" + (f" m={multiplier}" if multiplier != 1 else "")
    return _seq(areas, phases, Family.SYM_HALF_PI, n, label, p_target=0.5, theta_pi=0.5,
                variant=str(multiplier) if multiplier != 1 else None)


def asymmetric_half_pi(n: int, multiplier: int = 1) -> CompositeSequence:
    """A B…B with φ_k = 2(k−1)²π/(2N−1); P = 1/2 + sin^{2N−1}(πε/2)/2."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"asymmetric pi/2 sequences need N >= 1, got {n}")
    n = int(n)
    if math.gcd(multiplier, 2 * n - 1) != 1:
        raise InvalidParameterError(f"multiplier {multiplier} shares a factor with {2 * n - 1}")
    areas = [A] + [B] * (n - 1)
    phases = [2.0 * multiplier * (k - 1) ** 2 / (2 * n - 1) for k in range(1, n + 1)]
    label = f"asym_half_pi N={n}" + (f" m={multiplier}" if multiplier != 1 else "")
    return _seq(areas, phases, Family.ASYM_HALF_PI, n, label, p_target=0.5, theta_pi=0.5,
                variant=str(multiplier) if multiplier != 1 else None)


def freeman() -> CompositeSequence:
    """A₀ A_{π/2}, the shortest symmetric π/2 pulse."""
    return symmetric_half_pi(2).relabel("freeman")


def levitt_two() -> CompositeSequence:
    """A₀ B_{2π/3}, the shortest asymmetric π/2 pulse."""
    return asymmetric_half_pi(2).relabel("levitt_two")


# -- equivalence transformations -------------------------------------------------

def reverse(seq: CompositeSequence) -> CompositeSequence:
    return seq.reversed()


def negate(seq: CompositeSequence) -> CompositeSequence:
    return seq.with_phases([-x for x in seq.phases_pi], label=f"negate({seq.label})")


def add_turns(seq: CompositeSequence, turns: Sequence[int]) -> CompositeSequence:
    """Add 2π·k_j to phase j."""
    turns = list(turns)
    if len(turns) != len(seq):
        raise InvalidParameterError(f"expected {len(seq)} multiples of 2pi, got {len(turns)}")
    if any(int(k) != k for k in turns):
        raise InvalidParameterError(f"multiples of 2pi must be integers, got {turns}")
    return seq.with_phases([x + 2.0 * k for x, k in zip(seq.phases_pi, turns)])


def global_shift(seq: CompositeSequence, shift_pi: float) -> CompositeSequence:
    return seq.with_phases([x + shift_pi for x in seq.phases_pi])


def equivalent(seq: CompositeSequence, transform: str, argument=None) -> CompositeSequence:
    """Apply one profile-preserving transformation by name.

    ``transform`` is one of ``negate``, ``add_2pi`` (argument: list of
    integers, one per pulse), ``reverse`` or ``global_shift`` (argument:
    phase offset in units of π).
    """
    if transform == "negate":
        return negate(seq)
    if transform == "reverse":
        return reverse(seq)
    if transform == "add_2pi":
        if argument is None:
            raise InvalidParameterError("add_2pi needs a list of multiples")
        return add_turns(seq, argument)
    if transform == "global_shift":
        if argument is None:
            raise InvalidParameterError("global_shift needs a phase offset")
        return global_shift(seq, float(argument))
    raise InvalidParameterError(f"unknown transform {transform!r}")


# -- twins -----------------------------------------------------------------------

def twin(base: CompositeSequence, theta_pi: float) -> CompositeSequence:
    """Base π/2 sequence followed by its reverse with every phase shifted by π − θ.

    The probability is 4p(1−p)·sin²(θ/2) where p is the base's, so the error
    order doubles.
    """
    t = _check_theta(theta_pi)
    p0 = transition_probability(compose(base, 0.0))
    if abs(p0 - 0.5) > TWIN_BASE_TOL:
        raise InvalidParameterError(
            f"twin base must give probability 1/2 at zero error, '{base.label}' gives {p0:.12g}"
        )
    shift = 1.0 - t
    second = [Pulse(p.area_pi, p.phase_pi + shift) for p in base.pulses[::-1]]
    pulses = tuple(base.pulses) + tuple(second)
    family = {
        Family.SYM_HALF_PI.value: Family.TWIN_SYM,
        Family.ASYM_HALF_PI.value: Family.TWIN_ASYM,
    }.get(base.family)
    if base.label.startswith("reverse(") and base.family == Family.ASYM_HALF_PI.value:
        family = Family.TWIN_ASYM_REVERSED
    return CompositeSequence(
        pulses,
        label=f"twin({base.label}, theta={t:g})",
        family=family.value if family else "twin",
        n=len(pulses),
        theta_pi=t,
        p_target=target_probability(t),
    )


def _zeroed(seq: CompositeSequence) -> CompositeSequence:
    return global_shift(seq, -seq.phases_pi[0])


def twin_sym(n: int, theta_pi: float) -> CompositeSequence:
    return twin(symmetric_half_pi(n), theta_pi)


def twin_asym(n: int, theta_pi: float) -> CompositeSequence:
    return twin(asymmetric_half_pi(n), theta_pi)


def twin_asym_reversed(n: int, theta_pi: float) -> CompositeSequence:
    """Twin over the reversed asymmetric sequence, first phase moved to 0."""
    return twin(_zeroed(reverse(asymmetric_half_pi(n))), theta_pi)


# -- reference sequences -----------------------------------------------------------

def bb1(theta_pi: float) -> CompositeSequence:
    """Θ₀ B_χ B_{3χ} B_{3χ} B_χ with χ = arccos(−θ/(4π))."""
    t = _check_theta(theta_pi)
    ratio = -t / 4.0
    if abs(ratio) > 1.0:
        raise InvalidParameterError(f"BB1 is undefined for theta={theta_pi}")
    chi = math.acos(ratio) / math.pi
    return _seq([t, B, B, B, B], [0.0, chi, 3 * chi, 3 * chi, chi], Family.BB1, 5,
                f"bb1 theta={t:g}", theta_pi=t)


_LEVITT_ERNST = {
    4: (0.0, -0.5, 0.0, 0.5),
    8: (0.0, 1.5, 0.0, 0.5, 1.0, 0.5, 0.0, 0.5),
}


def levitt_ernst(n: int) -> CompositeSequence:
    if n not in _LEVITT_ERNST:
        raise InvalidParameterError(f"Levitt-Ernst sequences exist for n in (4, 8), got {n}")
    phases = _LEVITT_ERNST[n]
    return _seq([A] * n, phases, Family.LEVITT_ERNST, n, f"levitt_ernst {n}", p_target=0.5, theta_pi=0.5)


# -- dispatch ------------------------------------------------------------------------

def construct(desc: FamilyDescriptor, p_target: Optional[float] = None) -> CompositeSequence:
    """Build a sequence from a descriptor; ``p_target`` overrides ``theta_pi`` where both apply."""
    f = desc.family
    if p_target is None and desc.theta_pi is not None:
        p_target = target_probability(desc.theta_pi)
    theta = desc.theta_pi if desc.theta_pi is not None else (
        theta_for(p_target) if p_target is not None else None)

    def need_p():
        if p_target is None:
            raise InvalidParameterError(f"{f.value} needs a target probability or theta")
        return p_target

    def need_n():
        if desc.n is None:
            raise InvalidParameterError(f"{f.value} needs N")
        return desc.n

    def need_theta():
        if theta is None:
            raise InvalidParameterError(f"{f.value} needs theta or a target probability")
        return theta

    def int_variant(default: int) -> int:
        try:
            return int(desc.variant or default)
        except ValueError:
            raise InvalidParameterError(f"{f.value} variant must be an integer, got {desc.variant!r}") from None

    if f == Family.PRIME2:
        return prime_two(need_p(), desc.variant or "+")
    if f == Family.PRIME3:
        return prime_three(need_p(), int_variant(4))
    if f == Family.PRIME4_ABBA:
        return prime_four(need_p(), "ABBA", desc.variant or "b")
    if f == Family.PRIME4_AAAA:
        return prime_four(need_p(), "AAAA", desc.variant or "a")
    if f == Family.SYM_HALF_PI:
        return symmetric_half_pi(need_n(), int_variant(1))
    if f == Family.ASYM_HALF_PI:
        return asymmetric_half_pi(need_n(), int_variant(1))
    if f == Family.TWIN_SYM:
        return twin_sym(need_n(), need_theta())
    if f == Family.TWIN_ASYM:
        return twin_asym(need_n(), need_theta())
    if f == Family.TWIN_ASYM_REVERSED:
        return twin_asym_reversed(need_n(), need_theta())
    if f == Family.BB1:
        return bb1(need_theta())
    if f == Family.LEVITT_ERNST:
        return levitt_ernst(need_n())
    raise InvalidParameterError(f"unsupported family {f}")
