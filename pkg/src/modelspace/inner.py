"""Meromorphic inner functions on the upper half-plane.

The inner functions handled here are finite products

    Theta(z) = exp(i tau) exp(i c z) prod_k ((z - lam_k) / (z - conj lam_k))^{m_k}

with c >= 0 and Blaschke zeros lam_k = u_k + i v_k, v_k > 0.  Restricted to
the real axis Theta is unimodular and carries a continuous, strictly
increasing phase phi with Theta(x) = exp(i phi(x)) whenever c > 0 or at least
one zero is present.  The phase derivative

    phi'(x) = c + sum_k 2 m_k v_k / ((x - u_k)^2 + v_k^2)

coincides with |Theta'(x)| on the axis and controls node spacing, kernel
sizes and derivative estimates throughout the package.

Branch convention: each Blaschke factor contributes -2 m atan2(v, x - u),
which increases from -2 pi m at -infinity to 0 at +infinity.  The exponential
factor contributes c x and tau enters as an additive constant, so
phi(0) = tau - 2 sum_k m_k atan2(v_k, -u_k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BlaschkeZero",
    "InnerFunctionSpec",
    "PhaseValue",
    "evaluate",
    "phase",
    "phase_arrays",
    "derivative_sup_norm",
    "enlarge",
    "from_dict",
    "to_dict",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BlaschkeZero:
    """A single zero u + i v in the open upper half-plane, with multiplicity."""

    re: float
    im: float
    mult: int = 1

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))
        if not math.isfinite(self.re):
            raise ValueError(f"zero real part must be finite, got {self.re!r}")
        if not (math.isfinite(self.im) and self.im > 0.0):
            raise ValueError(f"zero must lie in the open upper half-plane (im > 0), got im={self.im!r}")
        if not isinstance(self.mult, int) or isinstance(self.mult, bool) or self.mult < 1:
            raise ValueError(f"multiplicity must be a positive integer, got {self.mult!r}")


@dataclass(frozen=True)
class InnerFunctionSpec:
    """Finite description of an inner function: rotation, exponential rate, zeros."""

    tau: float = 0.0
    c: float = 0.0
    zeros: tuple[BlaschkeZero, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "zeros", tuple(self.zeros))
        if not math.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau!r}")
        if not (math.isfinite(self.c) and self.c >= 0.0):
            raise ValueError(f"exponential rate c must be finite and >= 0, got {self.c!r}")
        for z in self.zeros:
            if not isinstance(z, BlaschkeZero):
                raise ValueError(f"zeros must be BlaschkeZero instances, got {type(z).__name__}")

    @property
    def total_multiplicity(self) -> int:
        return sum(z.mult for z in self.zeros)

    @property
    def is_degenerate(self) -> bool:
        """True when Theta is a unimodular constant (c = 0 and no zeros)."""
        return self.c == 0.0 and not self.zeros


@dataclass(frozen=True)
class PhaseValue:
    value: float
    derivative: float


def evaluate(spec: InnerFunctionSpec, z):
    """Evaluate Theta at z (scalar or ndarray, real or complex).

    Unimodular on the real axis; |Theta| < 1 in the open upper half-plane
    unless the spec is degenerate.
    """
    zz = np.asarray(z, dtype=complex)
    out = np.exp(1j * (spec.tau + spec.c * zz))
    for zero in spec.zeros:
        lam = complex(zero.re, zero.im)
        out = out * ((zz - lam) / (zz - lam.conjugate())) ** zero.mult
    if np.ndim(z) == 0:
        return complex(out)
    return out


def phase_arrays(spec: InnerFunctionSpec, x):
    """Phase and phase derivative at real points, vectorised.

    Returns (values, derivatives) as float ndarrays of the input shape.
    """
    xx = np.asarray(x, dtype=float)
    val = spec.tau + spec.c * xx
    der = np.full_like(xx, spec.c)
    for zero in spec.zeros:
        w = xx - zero.re
        val = val - (2.0 * zero.mult) * np.arctan2(zero.im, w)
        der = der + (2.0 * zero.mult) * zero.im / (w * w + zero.im * zero.im)
    return val, der


def phase(spec: InnerFunctionSpec, x: float) -> PhaseValue:
    """Continuous increasing phase of Theta at a real point, with derivative."""
    val, der = phase_arrays(spec, float(x))
    return PhaseValue(float(val), float(der))


def _phase_second_derivative(spec: InnerFunctionSpec, x):
    xx = np.asarray(x, dtype=float)
    out = np.zeros_like(xx)
    for zero in spec.zeros:
        w = xx - zero.re
        out = out - (4.0 * zero.mult) * zero.im * w / (w * w + zero.im * zero.im) ** 2
    return out


def derivative_sup_norm(spec: InnerFunctionSpec) -> float:
    """sup over the real axis of phi' = |Theta'|.

    Without zeros the derivative is constant c.  With zeros, every local
    maximum of phi' is a sign change of phi'' and the zeros' imaginary parts
    set the smallest feature width, so a grid of width min(v)/4 spanning all
    zero locations (widened by 10 max(v)) brackets every critical point.
    Brackets are refined by bisection to width 1e-12, and the tail limit c is
    included for completeness.
    """
    if not spec.zeros:
        return spec.c
    res = [z.re for z in spec.zeros]
    ims = [z.im for z in spec.zeros]
    lo = min(res) - 10.0 * max(ims)
    hi = max(res) + 10.0 * max(ims)
    step = min(ims) / 4.0
    grid = np.arange(lo, hi + step, step)
    g = _phase_second_derivative(spec, grid)
    candidates = [grid]
    sign_change = (g[:-1] == 0.0) | ((g[:-1] > 0.0) != (g[1:] > 0.0))
    a = grid[:-1][sign_change]
    b = grid[1:][sign_change]
    ga = g[:-1][sign_change]
    if a.size:
        for _ in range(60):
            mid = 0.5 * (a + b)
            gm = _phase_second_derivative(spec, mid)
            same = (gm > 0.0) == (ga > 0.0)
            a = np.where(same, mid, a)
            ga = np.where(same, gm, ga)
            b = np.where(same, b, mid)
            if float(np.max(b - a)) < 1e-12:
                break
        candidates.append(0.5 * (a + b))
    _, der = phase_arrays(spec, np.concatenate(candidates))
    return max(spec.c, float(der.max()))


def enlarge(
    spec: InnerFunctionSpec,
    extra_c: float,
    extra_zeros=(),
) -> InnerFunctionSpec:
    """Multiply by a further inner factor: add exponential rate and zeros.

    The result's phase derivative dominates the input's pointwise.
    """
    extra_c = float(extra_c)
    if not (math.isfinite(extra_c) and extra_c >= 0.0):
        raise ValueError(f"extra_c must be finite and >= 0, got {extra_c!r}")
    return InnerFunctionSpec(
        tau=spec.tau,
        c=spec.c + extra_c,
        zeros=spec.zeros + tuple(extra_zeros),
    )


def to_dict(spec: InnerFunctionSpec) -> dict:
    """Plain-dict form used by the JSON config interface."""
    return {
        "tau": spec.tau,
        "c": spec.c,
        "zeros": [{"re": z.re, "im": z.im, "mult": z.mult} for z in spec.zeros],
    }


def _require_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{where}: expected a number, got {value!r}")
    return float(value)


def from_dict(data: dict, where: str = "inner") -> InnerFunctionSpec:
    """Build a spec from the JSON-dict form, with field-path diagnostics."""
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object, got {type(data).__name__}")
    unknown = set(data) - {"tau", "c", "zeros"}
    if unknown:
        raise ValueError(f"{where}: unknown fields {sorted(unknown)}")
    tau = _require_number(data.get("tau", 0.0), f"{where}.tau")
    c = _require_number(data.get("c", 0.0), f"{where}.c")
    zeros = []
    raw = data.get("zeros", [])
    if not isinstance(raw, list):
        raise ValueError(f"{where}.zeros: expected a list")
    for i, zd in enumerate(raw):
        zw = f"{where}.zeros[{i}]"
        if not isinstance(zd, dict):
            raise ValueError(f"{zw}: expected an object")
        unknown = set(zd) - {"re", "im", "mult"}
        if unknown:
            raise ValueError(f"{zw}: unknown fields {sorted(unknown)}")
        re = _require_number(zd.get("re", 0.0), f"{zw}.re")
        im = _require_number(zd.get("im", None), f"{zw}.im")
        mult = zd.get("mult", 1)
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ValueError(f"{zw}.mult: expected an integer, got {mult!r}")
        try:
            zeros.append(BlaschkeZero(re=re, im=im, mult=mult))
        except ValueError as exc:
            raise ValueError(f"{zw}: {exc}") from None
    try:
        return InnerFunctionSpec(tau=tau, c=c, zeros=tuple(zeros))
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from None
