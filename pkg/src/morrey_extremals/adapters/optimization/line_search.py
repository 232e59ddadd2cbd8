from collections.abc import Callable

import numpy as np

from domain.services.energy import PinnedEnergy

ARMIJO = 1e-4
SHRINK = 0.5
MAX_HALVINGS = 60
# Snap radius relative to the value spread.
SNAP_RATIO = 1e-3


def backtracking_line_search(
    f: Callable[[np.ndarray], float],
    x: np.ndarray,
    fx: float,
    g: np.ndarray,
    dx: np.ndarray,
    step: float = 1.0,
    alpha: float = ARMIJO,
    beta: float = SHRINK,
    max_iter: int = MAX_HALVINGS,
) -> tuple[float, np.ndarray, float]:
    """Backtracking line search with the Armijo sufficient-decrease test.

    Args:
        f (Callable[[np.ndarray], float]): Objective.
        x (np.ndarray): Current point.
        fx (float): Objective at x.
        g (np.ndarray): Gradient at x.
        dx (np.ndarray): Descent direction.
        step (float): First trial step.
        alpha (float): Fraction of the predicted decrease that must be realized.
        beta (float): Step reduction factor.
        max_iter (int): Maximum number of reductions.

    Returns:
        tuple[float, np.ndarray, float]: Accepted step, point and value; the
        step is 0 and x is returned unchanged when no trial decreased f.
    """
    slope = float(g @ dx)
    t = step
    for _ in range(max_iter):
        candidate = x + t * dx
        value = f(candidate)
        if value < fx and value <= fx + alpha * t * slope:
            return t, candidate, value
        t *= beta
    return 0.0, x, fx


def snap_to_far_field(
    objective: PinnedEnergy,
    x: np.ndarray,
    value: float,
    ratio: float = SNAP_RATIO,
) -> tuple[np.ndarray, float]:
    """Moves free node values close to the far field onto it.

    For p < 2 the energy gradient is not Lipschitz where a node value meets
    the far field. The snap is kept only when the energy does not rise.

    Args:
        objective (PinnedEnergy): The objective.
        x (np.ndarray): Current point.
        value (float): Objective at x.
        ratio (float): Snap radius relative to the value spread.

    Returns:
        tuple[np.ndarray, float]: The snapped point and its energy, or x and
        value unchanged.
    """
    if objective.p >= 2.0:
        return x, value
    candidate = objective.snap(x, ratio * objective.spread(x))
    if np.array_equal(candidate, x):
        return x, value
    change = objective.change(x, candidate - x)
    if change > 0.0:
        return x, value
    return candidate, value + change
