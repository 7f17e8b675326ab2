"""Projected finite-difference ascent shared by the randomized searches."""

from __future__ import annotations

import numpy as np


class Budget:
    """Counts objective evaluations; an exhausted budget stops a search."""

    def __init__(self, evals: int):
        self.left = int(evals)
        self.used = 0

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        self.used += 1
        return True


def ascend(objective, x0, project, budget: Budget, fd_step: float = 1e-5, max_steps: int = 200):
    """Maximize `objective` from `x0` with projected forward-difference ascent.

    `objective` must be well defined on all of R^n (it may clamp internally);
    `project` restores feasibility after each accepted step.  Returns the best
    feasible iterate and its value, or (None, -inf) if the budget was already
    exhausted.  Step sizes backtrack from a unit-length move, which avoids
    derivative formulas at points where the spectral norm is not smooth.
    """
    x = project(np.asarray(x0, dtype=float))
    if not budget.spend():
        return None, -np.inf
    value = float(objective(x))
    for _ in range(max_steps):
        grad = np.zeros_like(x)
        starved = False
        for i in range(x.size):
            if not budget.spend():
                starved = True
                break
            probe = x.copy()
            probe[i] += fd_step
            grad[i] = (float(objective(probe)) - value) / fd_step
        if starved:
            break
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= 1e-12:
            break
        step = 1.0 / gnorm
        moved = False
        while step * gnorm > 1e-9:
            if not budget.spend():
                return x, value
            cand = project(x + step * grad)
            cval = float(objective(cand))
            if cval > value:
                x, value, moved = cand, cval, True
                break
            step *= 0.5
        if not moved:
            break
    return x, value
