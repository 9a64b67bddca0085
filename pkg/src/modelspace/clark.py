"""Sampling grids from the phase-crossing equation phi(x_n) = gamma + 2 pi n.

For an inner spec with c > 0 the total phase is a strictly increasing
bijection of the line, so every integer index has exactly one node.  Nodes
carry the squared kernel norms phi'(x_n) / 2pi as weights; together they form
the sampling grid used by the interpolation and certification modules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .inner import InnerFunctionSpec, derivative_sup_norm, phase_arrays

TWO_PI = 2.0 * math.pi

# Certification threshold on |phi(x_n) - gamma - 2 pi n| for emitted grids.
RESIDUAL_TOL = 1e-10

__all__ = ["NoNodesError", "SamplingGrid", "invert_phase", "solve_nodes",
           "node_spacing_bounds", "write_grid_csv"]


class NoNodesError(ValueError):
    """Raised when the phase equation has no solution for the requested spec."""


@dataclass(eq=False)
class SamplingGrid:
    """Certified phase-crossing nodes with their kernel-norm weights.

    indices, nodes and weights are parallel arrays ordered by index; nodes
    are strictly increasing and every weight is positive.
    """

    spec: InnerFunctionSpec
    gamma: float
    indices: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    residual_bound: float = field(default=RESIDUAL_TOL)

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=int)
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if not (self.indices.size == self.nodes.size == self.weights.size):
            raise ValueError("indices, nodes, weights must have equal length")
        if self.nodes.size == 0:
            raise ValueError("grid must contain at least one node")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0.0):
            raise ValueError("weights must be positive")

    def __len__(self) -> int:
        return int(self.nodes.size)


def invert_phase(spec: InnerFunctionSpec, target):
    """Solve phi(x) = target for scalar or array targets.

    Monotone bisection on a bracket wide enough to absorb the bounded
    Blaschke phase, then two Newton steps for full double precision.
    Requires c > 0 (otherwise the phase has bounded range).
    """
    if not spec.c > 0.0:
        raise NoNodesError("phase inversion requires exponential type c > 0")
    t = np.atleast_1d(np.asarray(target, dtype=float))
    swing = TWO_PI * spec.total_multiplicity
    x0 = (t - spec.tau) / spec.c
    pad = swing / spec.c + 1.0
    lo = x0 - pad
    hi = x0 + pad
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        vals, _ = phase_arrays(spec, mid)
        go_right = vals < t
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(2):
        vals, derivs = phase_arrays(spec, x)
        x = x - (vals - t) / derivs
    if np.ndim(target) == 0:
        return float(x[0])
    return x.reshape(np.shape(target))


def solve_nodes(spec: InnerFunctionSpec, gamma: float, n_min: int, n_max: int) -> SamplingGrid:
    """Nodes x_n with phi(x_n) = gamma + 2 pi n for n in [n_min, n_max].

    Every returned node is certified: the residual in phase units is checked
    against RESIDUAL_TOL after polishing.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma < TWO_PI:
        raise ValueError(f"gamma must lie in [0, 2pi), got {gamma}")
    if not (isinstance(n_min, int) and isinstance(n_max, int)):
        raise TypeError("n_min and n_max must be integers")
    if n_min > n_max:
        raise ValueError(f"empty index range [{n_min}, {n_max}]")
    if not spec.c > 0.0:
        raise NoNodesError(
            "node solving requires c > 0; with c = 0 the phase is bounded and "
            "only finitely many crossings exist")
    indices = np.arange(n_min, n_max + 1)
    targets = gamma + TWO_PI * indices
    nodes = np.atleast_1d(invert_phase(spec, targets))
    vals, derivs = phase_arrays(spec, nodes)
    resid = float(np.max(np.abs(vals - targets)))
    if resid > RESIDUAL_TOL:
        raise RuntimeError(f"node residual {resid:.3e} exceeds {RESIDUAL_TOL:.1e}")
    return SamplingGrid(spec=spec, gamma=gamma, indices=indices, nodes=nodes,
                        weights=derivs / TWO_PI, residual_bound=resid)


def node_spacing_bounds(grid: SamplingGrid, spec: InnerFunctionSpec | None = None):
    """(min, max) consecutive node spacing; min is at least 2pi/sup phi'."""
    if spec is None:
        spec = grid.spec
    if len(grid) < 2:
        raise ValueError("spacing bounds need at least two nodes")
    gaps = np.diff(grid.nodes)
    lo = float(gaps.min())
    hi = float(gaps.max())
    floor = TWO_PI / derivative_sup_norm(spec)
    if lo < floor - 1e-12:
        raise RuntimeError(f"spacing {lo} violates floor {floor}")
    return lo, hi


def write_grid_csv(grid: SamplingGrid, path, extra_header: dict | None = None) -> None:
    """Write the grid as CSV with # key=value provenance headers.

    Columns are n,x_n,weight ordered by n; all floats use 17 significant
    digits so files round-trip exactly.
    """
    lines = []
    header = {
        "gamma": format(grid.gamma, ".17g"),
        "tau": format(grid.spec.tau, ".17g"),
        "c": format(grid.spec.c, ".17g"),
        "zeros": ";".join(
            f"{z.re:.17g}+{z.im:.17g}j*{z.mult}" for z in grid.spec.zeros) or "none",
        "residual_bound": format(grid.residual_bound, ".3e"),
    }
    if extra_header:
        header.update({k: str(v) for k, v in extra_header.items()})
    for key, val in header.items():
        lines.append(f"# {key}={val}")
    lines.append("n,x_n,weight")
    for n, x, w in zip(grid.indices, grid.nodes, grid.weights):
        lines.append(f"{int(n)},{x:.17g},{w:.17g}")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
