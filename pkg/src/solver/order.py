"""Error-compensation order of a sequence.

The order is read off the probability series and then cross-checked against
the log–log slope of the actual deviation |P(ε) − P_target| near ε = 0.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from src.core import CompositeSequence, probabilities, probability_series_scaled
from src.errors import InvalidParameterError, OrderExceedsError, SeriesConsistencyError

logger = logging.getLogger(__name__)

DESIGN_POINT_TOL = 1e-9
SLOPE_FLOOR = 1e-12
SLOPE_POINTS = 17


@dataclass(frozen=True)
class OrderReport:
    order: int
    leading_coefficient: float
    slope: Optional[float]
    window: Optional[Tuple[float, float]]
    consistent: bool


def series_order(seq: CompositeSequence, p_target: float, max_order: Optional[int] = None) -> Tuple[int, float]:
    """Index and value of the first non-vanishing coefficient c_k, k ≥ 1."""
    if max_order is None:
        # P is a polynomial of degree 2·(total area) in sin(πε/2)
        max_order = int(math.ceil(2.0 * seq.total_area_pi)) + 1
    c, scale = probability_series_scaled(seq, max_order)
    if abs(c[0] - p_target) > DESIGN_POINT_TOL:
        raise InvalidParameterError(
            f"'{seq.label or seq.notation()}' gives P(0)={c[0]:.12g}, not the target {p_target:.12g}"
        )
    threshold = settings.order_rel_tol * np.maximum(1.0, 1e-3 * scale)
    for k in range(1, max_order + 1):
        if abs(c[k]) > threshold[k]:
            return k, float(c[k])
    raise OrderExceedsError(f"all coefficients up to order {max_order} vanish", max_order)


def _slope_window(seq: CompositeSequence, p_target: float) -> Optional[Tuple[float, float]]:
    lo = 1e-3
    j = 0
    while abs(probabilities(seq, lo) - p_target) <= SLOPE_FLOOR:
        j += 1
        lo = 1e-3 * 10 ** (j / 8)
        if lo > 0.3:
            return None
    hi = min(10.0 * lo, 0.6)
    if hi < 2.5 * lo:
        return None
    return lo, hi


def loglog_slope(seq: CompositeSequence, p_target: float) -> Tuple[Optional[float], Optional[Tuple[float, float]]]:
    """Extrapolated exponent of |P(ε) − P_target| as ε → 0.

    Fits log|ΔP| = a + m·log ε + b·(ε/ε_hi)² + c·(ε/ε_hi)⁴ on geometric points.
    """
    window = _slope_window(seq, p_target)
    if window is None:
        return None, None
    lo, hi = window
    eps = np.geomspace(lo, hi, SLOPE_POINTS)
    dev = np.abs(probabilities(seq, eps) - p_target)
    keep = dev > 0
    if keep.sum() < 6:
        return None, window
    eps, dev = eps[keep], dev[keep]
    u = eps / hi
    design = np.column_stack([np.ones_like(eps), np.log(eps), u ** 2, u ** 4])
    coef, *_ = np.linalg.lstsq(design, np.log(dev), rcond=None)
    return float(coef[1]), window


def order_report(seq: CompositeSequence, p_target: float, max_order: Optional[int] = None) -> OrderReport:
    order, lead = series_order(seq, p_target, max_order)
    slope, window = loglog_slope(seq, p_target)
    consistent = slope is None or abs(slope - order) <= settings.slope_tol
    if slope is None:
        logger.info("no usable slope window for '%s'; order %d from the series only", seq.label, order)
    elif not consistent:
        logger.warning(
            "'%s': series order %d but log-log slope %.3f on [%.2e, %.2e]",
            seq.label, order, slope, window[0], window[1],
        )
    return OrderReport(order, lead, slope, window, consistent)


def verify_order(seq: CompositeSequence, p_target: float, strict: bool = False) -> int:
    """Series order of ``seq`` about ``p_target``.

    The log-log slope only cross-checks the series: a disagreement is logged
    and the series order is returned anyway, unless ``strict`` is set, in which
    case it raises ``SeriesConsistencyError``.
    """
    report = order_report(seq, p_target)
    if strict and not report.consistent:
        raise SeriesConsistencyError(
            f"'{seq.label or seq.notation()}': series order {report.order} but log-log slope {report.slope:.3f}"
        )
    return report.order
