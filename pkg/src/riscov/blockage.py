"""LOS/NLOS probabilities under the exponential disc-blockage model.

A link of length d stays line-of-sight when no obstacle center falls in the
d x d_b rectangle swept along it, which for Poisson centers of density
lambda_o gives P_LOS(d) = exp(-lambda_o * d * d_b).  Link distances are
random, so the engine reports the expectation of that probability over a
tabulated distance law.  The Monte Carlo side uses the exact capsule
(segment-disc) test instead; the rectangle law ignores the half-disc end
caps, and that residual is measured and reported rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import PdfTable


@dataclass(frozen=True)
class BlockageParams:
    lambda_o: float   # obstacle density [points/m^2]
    d_b: float        # obstacle diameter [m]

    def __post_init__(self):
        if self.lambda_o < 0:
            raise DomainError("obstacle density must be non-negative")
        if not self.d_b > 0:
            raise DomainError("obstacle diameter must be positive")


def p_los_at(params: BlockageParams, d: float) -> float:
    """LOS probability for a fixed link length."""
    if d < 0:
        raise DomainError("distance must be non-negative")
    return float(np.exp(-params.lambda_o * d * params.d_b))


def p_los_expected(params: BlockageParams, dist: PdfTable) -> float:
    """E[exp(-lambda_o * D * d_b)] over a tabulated distance law (trapezoid
    on the table grid, consistent with the table's own normalization)."""
    weights = np.exp(-params.lambda_o * params.d_b * dist.grid)
    val = float(np.trapezoid(weights * dist.densities, dist.grid))
    return min(max(val, 0.0), 1.0)


def p_nlos_expected(params: BlockageParams, dist: PdfTable) -> float:
    """Complement of the expected LOS probability."""
    return 1.0 - p_los_expected(params, dist)
