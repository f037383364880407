"""Excitation profiles, robustness windows and head-to-head comparisons."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from config.settings import settings
from src import families
from src.core import CompositeSequence, probabilities
from src.errors import InvalidParameterError, WindowUnreachableError
from src.families import Family

logger = logging.getLogger(__name__)

WINDOW_AGREEMENT = 1e-6


@dataclass(frozen=True)
class ExcitationProfile:
    eps_grid: np.ndarray
    probabilities: np.ndarray
    sequence_label: str

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"eps": self.eps_grid, "probability": self.probabilities})


@dataclass(frozen=True)
class RobustnessReport:
    tol: float
    eps_star: float
    family: str
    n: Optional[int]


@dataclass(frozen=True)
class ComparisonReport:
    deviations: pd.DataFrame
    max_deviation: Dict[str, float]
    band: float
    p_target: float

    @property
    def best(self) -> str:
        return min(self.max_deviation, key=self.max_deviation.get)


# -- profiles ----------------------------------------------------------------------

def eps_grid(eps_min: float, eps_max: float, points: int) -> np.ndarray:
    if int(points) != points or points < 2:
        raise InvalidParameterError(f"a profile needs at least 2 points, got {points}")
    if not eps_min < eps_max:
        raise InvalidParameterError(f"eps range must be increasing, got [{eps_min}, {eps_max}]")
    grid = np.linspace(eps_min, eps_max, int(points))
    # exact zero when the grid straddles it symmetrically
    grid[np.abs(grid) < 1e-15] = 0.0
    return grid


def profile(seq: CompositeSequence, eps_min: float = -1.0, eps_max: float = 1.0,
            points: Optional[int] = None) -> ExcitationProfile:
    grid = eps_grid(eps_min, eps_max, points or settings.profile_points)
    return ExcitationProfile(grid, probabilities(seq, grid), seq.label)


def design_target(seq: CompositeSequence) -> float:
    """The sequence's target probability, or its value at zero error when untagged."""
    if seq.p_target is not None:
        return float(seq.p_target)
    return float(probabilities(seq, 0.0))


# -- closed forms ---------------------------------------------------------------------

def _family(name) -> Family:
    try:
        return Family(name)
    except ValueError:
        aliases = {"sym": Family.SYM_HALF_PI, "asym": Family.ASYM_HALF_PI}
        if name in aliases:
            return aliases[name]
        raise InvalidParameterError(f"unknown family {name!r}") from None


def closed_form_probability(family, n: Optional[int], eps, p_target: Optional[float] = None) -> np.ndarray:
    """Known analytic profiles of the π/2 families and the prime sequences."""
    fam = _family(family)
    s = np.sin(0.5 * np.pi * np.asarray(eps, dtype=float))
    if fam == Family.SYM_HALF_PI:
        return 0.5 - 0.5 * s ** (2 * n - 2)
    if fam == Family.ASYM_HALF_PI:
        return 0.5 + 0.5 * s ** (2 * n - 1)
    if p_target is None:
        raise InvalidParameterError(f"{fam.value} needs a target probability")
    power = {
        Family.PRIME2: 2,
        Family.PRIME3: 4,
        Family.PRIME4_AAAA: 4,
        Family.PRIME4_ABBA: 6,
    }.get(fam)
    if power is None:
        raise InvalidParameterError(f"no closed form for {fam.value}")
    return p_target * (1.0 - s ** power)


def _closed_form_exponent(fam: Family, n: int) -> int:
    if fam == Family.SYM_HALF_PI:
        return 2 * n - 2
    if fam == Family.ASYM_HALF_PI:
        return 2 * n - 1
    raise InvalidParameterError(f"closed-form windows exist only for the pi/2 families, not {fam.value}")


def closed_form_window(family, n: int, tol: float, eps_limit: Optional[float] = None) -> float:
    """Half-width of the window where ½·|sin(πε/2)|^k ≤ tol."""
    if tol <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tol}")
    limit = settings.eps_limit if eps_limit is None else eps_limit
    k = _closed_form_exponent(_family(family), n)
    if 2.0 * tol >= 1.0:
        return limit
    edge = (2.0 / math.pi) * math.asin((2.0 * tol) ** (1.0 / k))
    return min(edge, limit)


# -- windows -----------------------------------------------------------------------------

def _symmetric_deviation(seq: CompositeSequence, p_target: float, eps) -> np.ndarray:
    eps = np.asarray(eps, dtype=float)
    return np.maximum(np.abs(probabilities(seq, eps) - p_target),
                      np.abs(probabilities(seq, -eps) - p_target))


def robustness_window(seq: CompositeSequence, p_target: float, tol: float,
                      eps_limit: Optional[float] = None) -> RobustnessReport:
    """Largest e with |P(ε) − P_target| ≤ tol for every |ε| ≤ e.

    Violations are located on a dense guard grid first; the edge between the
    last good and the first bad grid point is then refined with Brent's method.
    """
    if tol <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tol}")
    limit = settings.eps_limit if eps_limit is None else eps_limit
    grid = np.linspace(0.0, limit, settings.guard_points)
    dev = _symmetric_deviation(seq, p_target, grid)
    bad = np.nonzero(dev > tol)[0]
    if bad.size == 0:
        eps_star = limit
    elif bad[0] == 0:
        eps_star = 0.0
    else:
        j = int(bad[0])
        f = lambda e: float(_symmetric_deviation(seq, p_target, e)) - tol  # noqa: E731
        eps_star = brentq(f, grid[j - 1], grid[j], xtol=settings.window_xtol)
    return RobustnessReport(tol, float(eps_star), seq.family or seq.label, seq.n)


def _build(fam: Family, n: int) -> CompositeSequence:
    return families.symmetric_half_pi(n) if fam == Family.SYM_HALF_PI else families.asymmetric_half_pi(n)


def _smallest_n(fam: Family) -> int:
    return 2 if fam == Family.SYM_HALF_PI else 1


def min_pulses_for_window(family, tol: float, eps_req: float, n_max: int = 30) -> int:
    """Smallest family member whose window half-width reaches ``eps_req``."""
    fam = _family(family)
    if fam not in (Family.SYM_HALF_PI, Family.ASYM_HALF_PI):
        raise InvalidParameterError(f"window queries need a pi/2 family, not {fam.value}")
    if not 0.0 < eps_req <= 1.0:
        raise InvalidParameterError(f"required window must lie in (0, 1], got {eps_req}")
    if tol <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tol}")
    for n in range(_smallest_n(fam), n_max + 1):
        closed = closed_form_window(fam, n, tol)
        if closed >= eps_req:
            oracle = robustness_window(_build(fam, n), 0.5, tol).eps_star
            if abs(oracle - closed) > WINDOW_AGREEMENT:
                logger.warning("%s N=%d: closed-form window %.8f, propagator window %.8f",
                               fam.value, n, closed, oracle)
            return n
    raise WindowUnreachableError(
        f"{fam.value}: a window of {eps_req} at tol {tol} is not achievable with N <= {n_max}"
    )


def oracle_min_pulses(family, tol: float, eps_req: float, n_max: int = 30) -> int:
    """Same query answered purely from propagator products."""
    fam = _family(family)
    if fam not in (Family.SYM_HALF_PI, Family.ASYM_HALF_PI):
        raise InvalidParameterError(f"window queries need a pi/2 family, not {fam.value}")
    for n in range(_smallest_n(fam), n_max + 1):
        if robustness_window(_build(fam, n), 0.5, tol).eps_star >= eps_req:
            return n
    raise WindowUnreachableError(
        f"{fam.value}: a window of {eps_req} at tol {tol} is not achievable with N <= {n_max}"
    )


def window_audit(tol: float = 1e-4, eps_list: Sequence[float] = (0.1, 0.2, 0.3),
                 claims: Optional[Dict[str, Sequence[int]]] = None) -> List[dict]:
    """Minimal pulse counts per family and window, next to previously claimed counts.

    Each row carries the closed-form answer, the propagator answer, the two
    window widths at that N, and whether the claim (if any) agrees. Nothing
    here raises on disagreement with a claim.
    """
    claims = claims or {}
    rows = []
    for name in (Family.SYM_HALF_PI, Family.ASYM_HALF_PI):
        claimed = list(claims.get(name.value, []))
        for i, eps in enumerate(eps_list):
            row = {"family": name.value, "eps": float(eps), "tol": float(tol)}
            try:
                n_closed = min_pulses_for_window(name, tol, eps)
                n_oracle = oracle_min_pulses(name, tol, eps)
                closed_w = closed_form_window(name, n_closed, tol)
                oracle_w = robustness_window(_build(name, n_closed), 0.5, tol).eps_star
                row.update({
                    "closed_form_n": n_closed,
                    "oracle_n": n_oracle,
                    "closed_form_window": closed_w,
                    "oracle_window": oracle_w,
                    "methods_agree": n_closed == n_oracle and abs(closed_w - oracle_w) <= WINDOW_AGREEMENT,
                    "success": True,
                })
            except WindowUnreachableError as e:
                row.update({"closed_form_n": None, "oracle_n": None, "methods_agree": False,
                            "success": False, "error": str(e)})
            row["claimed_n"] = claimed[i] if i < len(claimed) else None
            row["matches_claim"] = row["claimed_n"] is not None and row["claimed_n"] == row.get("closed_form_n")
            rows.append(row)
    return rows


# -- comparison ----------------------------------------------------------------------------

def _unique_labels(seqs: Sequence[CompositeSequence]) -> List[str]:
    seen: Dict[str, int] = {}
    labels = []
    for i, s in enumerate(seqs):
        base = s.label or f"seq{i + 1}"
        k = seen.get(base, 0)
        seen[base] = k + 1
        labels.append(base if k == 0 else f"{base}#{k + 1}")
    return labels


def compare(seqs: Sequence[CompositeSequence], grid: Optional[Sequence[float]] = None,
            band: Optional[float] = None) -> ComparisonReport:
    """|P − P_target| per sequence on a common ε grid, with the max inside |ε| ≤ band."""
    if not seqs:
        raise InvalidParameterError("nothing to compare")
    targets = [design_target(s) for s in seqs]
    if max(targets) - min(targets) > 1e-9:
        raise InvalidParameterError(f"sequences have different target probabilities: {targets}")
    p_target = targets[0]
    band = settings.comparison_band if band is None else band
    eps = np.asarray(grid if grid is not None else eps_grid(-1.0, 1.0, settings.profile_points), dtype=float)
    table = pd.DataFrame({"eps": eps})
    summary = {}
    inside = np.abs(eps) <= band + 1e-12
    for label, seq in zip(_unique_labels(seqs), seqs):
        dev = np.abs(probabilities(seq, eps) - p_target)
        table[label] = dev
        summary[label] = float(dev[inside].max()) if inside.any() else float("nan")
    return ComparisonReport(table, summary, band, p_target)


def band_deviation(seq: CompositeSequence, band: Optional[float] = None, points: int = 2001) -> float:
    """Max |P − P_target| on |ε| ≤ band, on a dense grid."""
    band = settings.comparison_band if band is None else band
    eps = np.linspace(-band, band, points)
    return float(np.max(np.abs(probabilities(seq, eps) - design_target(seq))))
