"""Equivalence classes of phase vectors.

Negating every phase, shifting every phase by the same amount, adding whole
turns to single phases and, for mirror-symmetric area patterns, reversing the
order all leave the probability profile unchanged. Two solutions related by
these moves are the same branch.

Templates that pin some phases to nonzero values only admit the moves that
keep those pins; ``shift=False`` and ``negate=False`` switch the
corresponding moves off.
"""
from __future__ import annotations

from typing import List, Sequence, Tuple

from src.core import canonical_phase, phase_distance

Phases = Tuple[float, ...]


def normalize(phases_pi: Sequence[float]) -> Phases:
    """Shift so the first phase is 0, then map every phase into [0, 2)."""
    first = phases_pi[0]
    return tuple(canonical_phase(x - first) for x in phases_pi)


def _fold(phases_pi: Sequence[float], shift: bool) -> Phases:
    return normalize(phases_pi) if shift else tuple(canonical_phase(x) for x in phases_pi)


def variants(phases_pi: Sequence[float], reversible: bool = False,
             negate: bool = True, shift: bool = True) -> List[Phases]:
    forms = [tuple(phases_pi)]
    if negate:
        forms.append(tuple(-x for x in phases_pi))
    if reversible:
        forms += [f[::-1] for f in forms]
    return [_fold(f, shift) for f in forms]


def branch_distance(p: Sequence[float], q: Sequence[float], reversible: bool = False,
                    negate: bool = True, shift: bool = True) -> float:
    """Smallest max-phase distance (units of π) between q and any equivalent form of p."""
    if len(p) != len(q):
        return float("inf")
    target = _fold(q, shift)
    return min(
        max(phase_distance(x, y) for x, y in zip(v, target))
        for v in variants(p, reversible, negate, shift)
    )


def same_branch(p: Sequence[float], q: Sequence[float], reversible: bool = False, tol: float = 1e-6,
                negate: bool = True, shift: bool = True) -> bool:
    return branch_distance(p, q, reversible, negate, shift) < tol


def representative(phases_pi: Sequence[float], reversible: bool = False,
                   negate: bool = True, shift: bool = True) -> Phases:
    """Lexicographically smallest equivalent form, with near-2 entries folded to 0."""
    def key(v: Phases):
        return tuple(round(0.0 if x > 2.0 - 1e-9 else x, 9) for x in v)

    best = min(variants(phases_pi, reversible, negate, shift), key=key)
    return tuple(0.0 if x > 2.0 - 1e-12 else x for x in best)
