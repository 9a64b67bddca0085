"""Interpolation operators: Shannon, oversampled sinc, and kernel expansions.

Four reconstruction routes share one shape contract: samples live on a grid
(uniform kπ/b spacing for the band-limited pair, a phase-crossing grid for
the kernel pair), and evaluation is vectorized over the query points.  Sums
are finite; truncation behavior is the object of study, not an error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clark import SamplingGrid
from .inner import InnerFunctionSpec, enlarge, evaluate
from .kernel import SincKernelSpec, pw_oversample_kernel, sinc

TWO_PI = 2.0 * math.pi

# Relative slack used to detect a query point sitting on a grid node.
_DIAG_TOL = 1e-12

__all__ = ["GridSpecMismatchError", "ReconstructionPlan", "SampleSet",
           "sample_function", "truncate_samples", "shannon_reconstruct",
           "pw_oversample_reconstruct", "clark_reconstruct",
           "model_oversample_reconstruct", "plancherel_norm"]


class GridSpecMismatchError(ValueError):
    """Samples were taken on a grid that does not match the requested expansion."""


_METHODS = ("shannon", "pw_oversample", "clark", "model_oversample")


@dataclass(frozen=True)
class ReconstructionPlan:
    """Which interpolation route to run, with its route-specific parameters.

    window is the truncation half-width K: uniform methods keep samples with
    |k| <= K, grid methods keep node indices with |n| <= K.
    """

    method: str
    window: int
    sinc_spec: SincKernelSpec | None = None
    m: int | None = None
    over_c: float | None = None

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {_METHODS}")
        if not isinstance(self.window, int) or isinstance(self.window, bool) or self.window < 1:
            raise ValueError(f"window must be a positive integer, got {self.window!r}")
        needs_sinc = self.method == "pw_oversample"
        if needs_sinc != (self.sinc_spec is not None):
            raise ValueError(f"sinc_spec must be set exactly for pw_oversample (method={self.method})")
        needs_over = self.method == "model_oversample"
        if needs_over != (self.m is not None) or needs_over != (self.over_c is not None):
            raise ValueError(f"m and over_c must be set exactly for model_oversample (method={self.method})")
        if self.m is not None and (not isinstance(self.m, int) or self.m < 1):
            raise ValueError(f"m must be an integer >= 1, got {self.m!r}")
        if self.over_c is not None and not float(self.over_c) > 0.0:
            raise ValueError(f"over_c must be > 0, got {self.over_c!r}")


@dataclass(eq=False)
class SampleSet:
    """Function values taken on a sampling grid."""

    grid: SamplingGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (len(self.grid),):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid size {len(self.grid)}")


def sample_function(f, grid: SamplingGrid) -> SampleSet:
    return SampleSet(grid=grid, values=np.asarray(f(grid.nodes), dtype=complex))


def truncate_samples(samples: SampleSet, window: int) -> SampleSet:
    """Keep nodes with |n| <= window."""
    keep = np.abs(samples.grid.indices) <= window
    if not keep.any():
        raise ValueError(f"window {window} removes every node")
    g = samples.grid
    sub = SamplingGrid(spec=g.spec, gamma=g.gamma, indices=g.indices[keep],
                       nodes=g.nodes[keep], weights=g.weights[keep],
                       residual_bound=g.residual_bound)
    return SampleSet(grid=sub, values=samples.values[keep])


def _uniform_nodes(count: int, b: float) -> np.ndarray:
    if count % 2 != 1:
        raise ValueError(f"sample count must be odd (symmetric window), got {count}")
    half = (count - 1) // 2
    return np.arange(-half, half + 1) * (math.pi / b)


def shannon_reconstruct(samples, b: float, x):
    """Cardinal-series interpolation sum f(kπ/b) sinc(b(x − kπ/b)).

    samples holds the values f(kπ/b) for k = −K..K in order.
    """
    b = float(b)
    if not b > 0.0:
        raise ValueError(f"band must be positive, got {b}")
    vals = np.asarray(samples, dtype=complex)
    nodes = _uniform_nodes(vals.size, b)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = vals @ sinc(b * (xs[None, :] - nodes[:, None]))
    if np.ndim(x) == 0:
        return complex(out[0])
    return out.reshape(np.shape(x))


def pw_oversample_reconstruct(samples, kspec: SincKernelSpec, x):
    """Oversampled interpolation: samples on spacing π/b with b = c + 2Na,
    summed against the smoothed kernel, which decays like |t|^(−N−1)."""
    vals = np.asarray(samples, dtype=complex)
    nodes = _uniform_nodes(vals.size, kspec.b)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = vals @ pw_oversample_kernel(kspec, xs[None, :] - nodes[:, None])
    if np.ndim(x) == 0:
        return complex(out[0])
    return out.reshape(np.shape(x))


def _node_expansion(samples: SampleSet, spec: InnerFunctionSpec, x, damping=None):
    """Shared core of the kernel expansions.

    Evaluates sum_n f(x_n) [damping(x - x_n)] k_{x_n}(x) / w_n with the
    removable diagonal x = x_n filled by f(x_n): every other term carries a
    factor 1 - conj(Theta(x_n)) Theta(x_m) = 0 there, and the diagonal kernel
    ratio tends to 1.
    """
    grid = samples.grid
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    diff = xs[None, :] - grid.nodes[:, None]
    on_node = np.abs(diff) <= _DIAG_TOL * np.maximum(1.0, np.abs(grid.nodes))[:, None]
    safe = np.where(on_node, 1.0, diff)
    qbar = np.conj(evaluate(spec, grid.nodes))
    theta_x = evaluate(spec, xs)
    kmat = (0.5j / math.pi) * (1.0 - qbar[:, None] * theta_x[None, :]) / safe
    terms = (samples.values / grid.weights)[:, None] * kmat
    if damping is not None:
        terms = terms * damping(diff)
    terms = np.where(on_node, samples.values[:, None], terms)
    out = terms.sum(axis=0)
    if np.ndim(x) == 0:
        return complex(out[0])
    return out.reshape(np.shape(x))


def clark_reconstruct(samples: SampleSet, spec: InnerFunctionSpec, x):
    """Kernel-basis expansion sum_n f(x_n) k_{x_n}(x) / ||k_{x_n}||^2."""
    if samples.grid.spec != spec:
        raise GridSpecMismatchError("samples were not taken on a grid for this spec")
    return _node_expansion(samples, spec, x)


def model_oversample_reconstruct(samples: SampleSet, base_spec: InnerFunctionSpec,
                                 over_c: float, m: int, x):
    """Oversampled kernel expansion with polynomial damping of order m.

    Samples must live on the grid of the enlarged spec (base plus extra
    exponential type over_c); the damping factor
    e^{−i over_c (x−x_n)/2} sinc(over_c (x−x_n)/(2m))^m keeps the expansion
    inside the enlarged space while forcing |x−x_n|^(−m−1) term decay.
    """
    over_c = float(over_c)
    if not over_c > 0.0:
        raise ValueError(f"over_c must be > 0, got {over_c}")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"m must be an integer >= 1, got {m!r}")
    big = enlarge(base_spec, over_c, ())
    if samples.grid.spec != big:
        raise GridSpecMismatchError(
            "samples must be taken on the grid of the enlarged spec "
            "(base with exponential type increased by over_c)")

    def damping(diff):
        return np.exp(-0.5j * over_c * diff) * sinc(over_c * diff / (2.0 * m)) ** m

    return _node_expansion(samples, big, x, damping=damping)


def plancherel_norm(samples: SampleSet) -> float:
    """sqrt(sum |f(x_n)|^2 / w_n) over the available window."""
    return float(np.sqrt(np.sum(np.abs(samples.values) ** 2 / samples.grid.weights)))
