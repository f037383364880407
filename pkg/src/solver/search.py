"""Phase search by coefficient annulment.

Seeds come from three places: the exact π/2 families (and their twins) that
fit the template, continuation in the target probability starting from the
π/2 members, and uniform random restarts. Every root is re-checked against
the template before it is reported.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from config.settings import settings
from src import families
from src.core import CompositeSequence, phase_distance
from src.errors import OrderExceedsError, SolverConvergenceError
from src.solver.branches import representative, same_branch
from src.solver.newton import damped_newton
from src.solver.order import series_order
from src.solver.template import SolveResult, SolveTemplate, objective

logger = logging.getLogger(__name__)

HALF = 0.5
EXTEND_MAXITER = 15


@dataclass
class SeedStrategy:
    analytic: bool = True
    continuation: bool = True
    restarts: int = field(default_factory=lambda: settings.solver_restarts)
    seed: int = field(default_factory=lambda: settings.solver_seed)


@dataclass
class _Root:
    phases: np.ndarray
    annulled: int
    origin: str


# -- seeds -------------------------------------------------------------------------

def _pattern(letters: str) -> Optional[Tuple[str, int]]:
    """Which π/2 family has exactly these areas, if any."""
    n = len(letters)
    if n >= 2 and letters == "A" + "B" * (n - 2) + "A":
        return families.Family.SYM_HALF_PI.value, n
    if letters == "A" + "B" * (n - 1):
        return families.Family.ASYM_HALF_PI.value, n
    return None


def _uses_default_pins(template: SolveTemplate) -> bool:
    return not template.free_mask[0] and all(template.free_mask[1:]) and \
        all(x == 0.0 for x in template.fixed_phases_pi)


def _branch_moves(template: SolveTemplate) -> dict:
    """Equivalence moves that keep the template's pinned phases."""
    mask, n = template.free_mask, len(template.free_mask)
    pinned = [i for i in range(n) if not mask[i]]
    shift = all(mask) or _uses_default_pins(template)
    negate = shift or all(
        min(phase_distance(template.fixed_phases_pi[i], 0.0), phase_distance(template.fixed_phases_pi[i], 1.0)) < 1e-12
        for i in pinned
    )
    mirrored = mask == mask[::-1] and all(
        phase_distance(template.fixed_phases_pi[i], template.fixed_phases_pi[n - 1 - i]) < 1e-12 for i in pinned
    )
    return {
        "reversible": template.is_palindromic and (shift or mirrored),
        "negate": negate,
        "shift": shift,
    }


def _half_pi_members(family: str, n: int) -> Iterator[CompositeSequence]:
    build = families.symmetric_half_pi if family == families.Family.SYM_HALF_PI.value \
        else families.asymmetric_half_pi
    for m in families.half_pi_multipliers(family, n):
        yield build(n, m)


def half_pi_seeds(template: SolveTemplate) -> List[Tuple[str, np.ndarray]]:
    """Exact π/2 sequences with the template's areas."""
    found = _pattern(template.letters)
    if found is None or not _uses_default_pins(template):
        return []
    family, n = found
    return [(seq.label, np.array(seq.phases_pi)) for seq in _half_pi_members(family, n)]


def twin_seeds(template: SolveTemplate) -> List[Tuple[str, np.ndarray]]:
    """Twins of π/2 sequences whose doubled areas give the template, at the template's θ."""
    n = len(template.areas_pi)
    if n % 2 or not template.is_palindromic or not _uses_default_pins(template):
        return []
    if template.p_target <= 0.0:
        return []
    found = _pattern(template.letters[: n // 2])
    if found is None:
        return []
    theta = families.theta_for(template.p_target)
    seeds = []
    for base in _half_pi_members(*found):
        seq = families.twin(base, theta)
        seeds.append((seq.label, np.array(seq.phases_pi)))
    return seeds


# -- refinement ----------------------------------------------------------------------

def _newton(template: SolveTemplate, phases: np.ndarray, annul: int, maxiter: int):
    def fun(free):
        return objective(template, template.expand(free), annul)

    return damped_newton(
        fun, template.free_part(phases),
        tol=settings.solver_tol, maxiter=maxiter, step=settings.jacobian_step,
    )


def _annul_cap(template: SolveTemplate) -> int:
    return max(template.annul_count, int(math.ceil(2.0 * template.total_area_pi)) - 1)


def refine(template: SolveTemplate, phases: np.ndarray, annul: Optional[int] = None,
           extend: bool = True) -> Optional[_Root]:
    """Newton from ``phases``; on success keep annulling further coefficients while that still converges."""
    annul = template.annul_count if annul is None else annul
    res = _newton(template, phases, annul, settings.solver_max_iter)
    if not res.success:
        return None
    x = template.expand(res.x)
    if extend:
        cap = _annul_cap(template)
        while annul < cap:
            nxt = _newton(template, x, annul + 1, EXTEND_MAXITER)
            if not nxt.success:
                break
            annul += 1
            x = template.expand(nxt.x)
    return _Root(x, annul, "")


def _continue(template: SolveTemplate, start: _Root) -> Optional[_Root]:
    """Follow a P = 1/2 root to the template's target, keeping its annulment count."""
    target = template.p_target
    p = HALF
    stride = settings.continuation_step
    x, annul = start.phases, start.annulled
    while abs(target - p) > 1e-15:
        step = math.copysign(min(stride, abs(target - p)), target - p)
        moved = None
        for _ in range(4):
            trial = p + step
            nxt = _newton(template.with_target(trial), x, annul, settings.solver_max_iter)
            if nxt.success:
                moved = (trial, template.expand(nxt.x))
                break
            step *= 0.5
        if moved is None:
            if annul <= template.annul_count:
                logger.debug("continuation lost at P=%.4f", p)
                return None
            # fall back to the base annulment and try again from here
            annul = template.annul_count
            continue
        p, x = moved
        if abs(target - p) < 1e-12:
            p = target
        logger.debug("continuation reached P=%.4f (annulled %d)", p, annul)
    root = refine(template, x, annul, extend=True)
    return root


# -- driver --------------------------------------------------------------------------

def _accept(template: SolveTemplate, root: _Root) -> Optional[float]:
    norm = float(np.linalg.norm(objective(template, root.phases)))
    return norm if norm < settings.solver_tol else None


def _achieved_order(template: SolveTemplate, phases) -> int:
    seq = template.sequence(list(phases))
    try:
        return series_order(seq, template.p_target)[0]
    except OrderExceedsError as e:
        return e.order


def _candidates(template: SolveTemplate, strategy: SeedStrategy) -> Iterator[_Root]:
    at_half = abs(template.p_target - HALF) < 1e-12
    if strategy.analytic:
        for label, phases in twin_seeds(template):
            root = refine(template, phases)
            if root is not None:
                root.origin = label
                yield root
        for label, phases in half_pi_seeds(template):
            half_template = template.with_target(HALF)
            root = refine(half_template, phases)
            if root is None:
                continue
            if at_half:
                root.origin = label
                yield root
            elif strategy.continuation:
                cont = _continue(template, root)
                if cont is not None:
                    cont.origin = f"continuation from {label}"
                    yield cont
    if strategy.restarts > 0:
        rng = np.random.default_rng(strategy.seed)
        for i in range(strategy.restarts):
            x0 = template.expand(rng.uniform(0.0, 2.0, template.n_free))
            root = refine(template, x0)
            if root is not None:
                root.origin = f"restart {i}"
                yield root


def solve_phases(template: SolveTemplate, seeds: Optional[SeedStrategy] = None) -> List[SolveResult]:
    """All distinct verified branches found for ``template``, lexicographically ordered."""
    strategy = seeds or SeedStrategy()
    moves = _branch_moves(template)
    kept: List[Tuple[SolveResult, Tuple[float, ...]]] = []
    for index, root in enumerate(_candidates(template, strategy)):
        norm = _accept(template, root)
        if norm is None:
            continue
        rep = representative(root.phases, **moves)
        duplicate = False
        for i, (prev, prev_rep) in enumerate(kept):
            if same_branch(rep, prev_rep, tol=settings.branch_tol, **moves):
                duplicate = True
                if root.annulled > prev.annulled:
                    kept[i] = (_result(template, rep, norm, index, root), rep)
                break
        if duplicate:
            continue
        result = _result(template, rep, norm, index, root)
        logger.info("branch %s (order %d) from %s", np.round(rep, 6).tolist(),
                    result.achieved_order, root.origin)
        kept.append((result, rep))

    if not kept:
        raise SolverConvergenceError(
            f"no root for template {template.letters or template.areas_pi} at P={template.p_target:g} "
            f"(restarts={strategy.restarts})"
        )
    ordered = sorted(kept, key=lambda item: tuple(round(x, 9) for x in item[1]))
    return [r for r, _ in ordered]


def _result(template: SolveTemplate, rep, norm: float, index: int, root: _Root) -> SolveResult:
    return SolveResult(
        phases_pi=tuple(float(x) for x in rep),
        residual_norm=norm,
        achieved_order=_achieved_order(template, rep),
        branch_id=index,
        annulled=root.annulled,
        origin=root.origin,
    )
