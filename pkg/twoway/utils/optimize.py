"""Bounded one-dimensional optimization on smooth, unimodal objectives."""
from typing import Callable, Optional, Tuple
import logging
from scipy.optimize import minimize_scalar

from twoway.core.config import settings

logger = logging.getLogger(__name__)


def minimize_bounded(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    xatol: Optional[float] = None,
) -> Tuple[float, float]:
    """Return (argmin, min) of `func` on [lower, upper].

    Brent's bounded method never samples the endpoints, so both are
    evaluated explicitly and win if they are at least as good.
    """
    xatol = settings.optimizer_xatol if xatol is None else xatol
    result = minimize_scalar(
        func,
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": xatol, "maxiter": 500},
    )
    best_x, best_f = float(result.x), float(result.fun)
    for edge in (lower, upper):
        edge_f = float(func(edge))
        if edge_f <= best_f:
            best_x, best_f = edge, edge_f
    if not result.success:
        logger.warning(f"Scalar optimization did not converge: {result.message}")
    return best_x, best_f


def maximize_bounded(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    xatol: Optional[float] = None,
) -> Tuple[float, float]:
    """Return (argmax, max) of `func` on [lower, upper]."""
    x, neg = minimize_bounded(lambda t: -func(t), lower, upper, xatol)
    return x, -neg
