"""Composite Gauss-Legendre rules on the half line [0, R_c].

Panels never straddle the blend joint ``R_c - epsilon`` and are narrow
enough to resolve both the joint region and the oscillation of
``cos(2 pi m s)``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from aniso_swarm.log import logger


class QuadratureSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes_per_panel: int = Field(default=16, ge=2)
    panels_per_cutoff: int = Field(default=32, ge=1)
    panels_per_period: int = Field(default=8, ge=1)
    min_nodes: int = Field(default=2000, ge=1)
    nodes_per_mode: int = Field(default=40, ge=1)


@lru_cache(maxsize=8)
def _reference_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel_rule(lower: float, upper: float, panels: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = _reference_rule(n)
    edges = np.linspace(lower, upper, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * nodes[None, :]).ravel(), (half[:, None] * weights[None, :]).ravel()


def half_line_rule(
    r_cutoff: float,
    epsilon: float = 0.0,
    mode: int = 0,
    quadrature: QuadratureSpec | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights integrating over [0, r_cutoff] for oscillation up to ``cos(2 pi mode s)``.

    Args:
        r_cutoff: Upper end of the interval.
        epsilon: Width of the blend layer; the joint at ``r_cutoff - epsilon`` is a panel edge.
        mode: Largest Fourier mode the rule has to resolve.
        quadrature: Panel parameters, defaults to ``QuadratureSpec()``.

    Returns:
        Two 1-d arrays, nodes strictly inside (0, r_cutoff) and positive weights.
    """
    quadrature = quadrature or QuadratureSpec()
    joint = r_cutoff - epsilon
    width = joint / quadrature.panels_per_cutoff
    if mode > 0:
        width = min(width, 1 / (quadrature.panels_per_period * mode))
    n = quadrature.nodes_per_panel
    total_panels = math.ceil(max(quadrature.min_nodes, quadrature.nodes_per_mode * mode * r_cutoff) / n)

    inner_panels = max(math.ceil(joint / width), math.ceil(total_panels * joint / r_cutoff))
    nodes, weights = _panel_rule(0.0, joint, inner_panels, n)
    if epsilon > 0:
        layer_panels = max(1, math.ceil(epsilon / width), math.ceil(total_panels * epsilon / r_cutoff))
        layer_nodes, layer_weights = _panel_rule(joint, r_cutoff, layer_panels, n)
        nodes = np.concatenate([nodes, layer_nodes])
        weights = np.concatenate([weights, layer_weights])
    return nodes, weights


def integrate_half_line(
    integrand: Callable[[np.ndarray], np.ndarray],
    r_cutoff: float,
    epsilon: float = 0.0,
    quadrature: QuadratureSpec | None = None,
) -> float:
    """Non-oscillatory integral of ``integrand`` over [0, r_cutoff]."""
    nodes, weights = half_line_rule(r_cutoff, epsilon, 0, quadrature)
    logger.debug(f"Integrating over [0, {r_cutoff}] with {nodes.size} nodes")
    return float(np.sum(weights * integrand(nodes)))
