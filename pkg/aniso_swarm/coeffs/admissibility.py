from __future__ import annotations

import numpy as np

from aniso_swarm.coeffs.cutoff import eval_arrays
from aniso_swarm.coeffs.models import Algebraic, CoefficientSpec, Role

GRID_POINTS = 10_000


def check_family_admissibility(spec: CoefficientSpec, role: Role) -> list[str]:
    """Report the sign conditions a coefficient violates for its role.

    Along ``s`` the coefficient must be purely repulsive; algebraic families
    additionally need ``b > 1`` and ``2 / (a (b - 1)) < R_c``. Along ``l`` it
    must be repulsive at the origin and attractive somewhere before ``R_c``.
    An empty list means admissible.
    """
    grid = np.linspace(0.0, spec.r_cutoff, GRID_POINTS, endpoint=False)
    values, _ = eval_arrays(spec, grid)
    violations: list[str] = []

    if values[0] <= 0:
        violations.append(f"f(0) = {values[0]:.6g} must be positive")

    if role is Role.ALONG_S:
        if np.any(values < 0):
            worst = int(np.argmin(values))
            violations.append(f"f is negative on [0, R_c): min {values[worst]:.6g} at r = {grid[worst]:.6g}")
        family = spec.family
        if isinstance(family, Algebraic):
            if family.a <= 0:
                violations.append(f"algebraic decay needs a > 0 (a = {family.a})")
            elif family.b <= 1:
                violations.append(f"necessary condition b > 1 violated (b = {family.b})")
            elif 2 / (family.a * (family.b - 1)) >= spec.r_cutoff:
                violations.append(
                    f"necessary condition 2/(a(b-1)) < R_c violated "
                    f"({2 / (family.a * (family.b - 1)):.6g} >= {spec.r_cutoff})"
                )
    elif not np.any(values < 0):
        violations.append("f never becomes negative before R_c (no long-range attraction)")

    return violations
