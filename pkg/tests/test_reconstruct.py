"""Interpolation routes: cardinal series, oversampled sinc, kernel expansions."""
import math

import numpy as np
import pytest

from modelspace.clark import solve_nodes
from modelspace.harness import KernelCombination, random_model_function
from modelspace.inner import BlaschkeZero, InnerFunctionSpec, enlarge
from modelspace.kernel import SincKernelSpec, kernel_norm_sq, reproducing_kernel, sinc
from modelspace.reconstruct import (
    GridSpecMismatchError,
    ReconstructionPlan,
    SampleSet,
    clark_reconstruct,
    model_oversample_reconstruct,
    plancherel_norm,
    pw_oversample_reconstruct,
    sample_function,
    shannon_reconstruct,
    truncate_samples,
)


def uniform_samples(f, count, b):
    half = (count - 1) // 2
    return f(np.arange(-half, half + 1) * (math.pi / b))


# ------------------------------------------------------------------ plan type

def test_plan_field_requirements():
    ks = SincKernelSpec(power=2, a=0.5, c=1.0)
    ReconstructionPlan(method="shannon", window=10)
    ReconstructionPlan(method="pw_oversample", window=10, sinc_spec=ks)
    ReconstructionPlan(method="clark", window=10)
    ReconstructionPlan(method="model_oversample", window=10, m=2, over_c=1.0)
    with pytest.raises(ValueError):
        ReconstructionPlan(method="fourier", window=10)
    with pytest.raises(ValueError):
        ReconstructionPlan(method="shannon", window=0)
    with pytest.raises(ValueError):
        ReconstructionPlan(method="shannon", window=10, sinc_spec=ks)
    with pytest.raises(ValueError):
        ReconstructionPlan(method="pw_oversample", window=10)
    with pytest.raises(ValueError):
        ReconstructionPlan(method="model_oversample", window=10, m=2)
    with pytest.raises(ValueError):
        ReconstructionPlan(method="model_oversample", window=10, m=0, over_c=1.0)


# ------------------------------------------------------------ cardinal series

def test_shannon_is_cardinal():
    # canonical sample vectors come back exactly at the nodes
    b = 2.0
    samples = np.zeros(7)
    samples[2] = 1.0  # node k = -1
    nodes = np.arange(-3, 4) * (math.pi / b)
    out = shannon_reconstruct(samples, b, nodes)
    np.testing.assert_allclose(out, np.eye(7)[2], atol=1e-15)


def test_shannon_reconstructs_band_limited_function():
    f = lambda x: sinc(x) ** 2  # band [-2, 2], triangle spectrum
    b = 2.0
    samples = uniform_samples(f, 601, b)
    for x in (0.3, -1.77, 2.5):
        assert shannon_reconstruct(samples, b, x) == pytest.approx(f(x), abs=2e-6)


def test_shannon_rejects_bad_input():
    with pytest.raises(ValueError):
        shannon_reconstruct(np.ones(4), 1.0, 0.0)  # even count
    with pytest.raises(ValueError):
        shannon_reconstruct(np.ones(5), 0.0, 0.0)


def test_shannon_vector_query():
    samples = uniform_samples(lambda x: sinc(x) ** 2, 201, 2.0)
    xs = np.linspace(-1.0, 1.0, 9)
    out = shannon_reconstruct(samples, 2.0, xs)
    assert out.shape == xs.shape
    for x, v in zip(xs, out):
        assert shannon_reconstruct(samples, 2.0, float(x)) == pytest.approx(v)


# ------------------------------------------------------------- oversampled pw

def test_pw_oversample_matches_target():
    f = lambda x: sinc(x) ** 2
    ks = SincKernelSpec(power=2, a=0.5, c=2.0)  # b = 4, spacing pi/4
    samples = uniform_samples(f, 601, ks.b)
    for x in (0.3, -1.2, 5.0):
        assert pw_oversample_reconstruct(samples, ks, x) == pytest.approx(f(x), abs=1e-7)
    # exactness also at a sampling node, where the kernel is not cardinal
    node = 12 * math.pi / ks.b
    assert pw_oversample_reconstruct(samples, ks, node) == pytest.approx(f(node), abs=1e-7)


def test_pw_oversample_power_zero_is_shannon():
    ks = SincKernelSpec(power=0, a=1.0, c=2.0)
    samples = uniform_samples(lambda x: sinc(x) ** 2, 101, 2.0)
    xs = np.linspace(-2.0, 2.0, 11)
    np.testing.assert_allclose(
        pw_oversample_reconstruct(samples, ks, xs),
        shannon_reconstruct(samples, 2.0, xs),
        rtol=1e-13,
    )


def test_pw_oversample_truncation_beats_shannon():
    # same function, same window count: smoothed kernel truncates better
    f = lambda x: sinc(x) ** 2
    shannon_err = abs(shannon_reconstruct(uniform_samples(f, 101, 2.0), 2.0, 0.31) - f(0.31))
    ks = SincKernelSpec(power=2, a=0.5, c=2.0)
    over_err = abs(pw_oversample_reconstruct(uniform_samples(f, 101, ks.b), ks, 0.31) - f(0.31))
    assert over_err < shannon_err


# ------------------------------------------------------------ kernel expansion

def test_clark_reconstruct_kernel_combination(spec_two):
    f = random_model_function(spec_two, 5, seed=11)
    grid = solve_nodes(spec_two, 0.0, -300, 300)
    samples = sample_function(f, grid)
    xs = np.linspace(-3.0, 3.0, 21)
    rec = clark_reconstruct(samples, spec_two, xs)
    np.testing.assert_allclose(rec, f(xs), atol=2e-8)


def test_clark_exact_at_nodes(spec_two):
    f = random_model_function(spec_two, 4, seed=5)
    grid = solve_nodes(spec_two, 1.5, -50, 50)
    samples = sample_function(f, grid)
    x = float(grid.nodes[50])
    assert clark_reconstruct(samples, spec_two, x) == pytest.approx(
        complex(samples.values[50]), abs=1e-12)


def test_clark_zero_samples_give_zero(spec_one):
    grid = solve_nodes(spec_one, 0.0, -10, 10)
    samples = SampleSet(grid=grid, values=np.zeros(21))
    assert clark_reconstruct(samples, spec_one, 0.37) == 0.0


def test_clark_spec_mismatch(spec_one, spec_two):
    grid = solve_nodes(spec_one, 0.0, -10, 10)
    samples = SampleSet(grid=grid, values=np.zeros(21))
    with pytest.raises(GridSpecMismatchError):
        clark_reconstruct(samples, spec_two, 0.0)


def test_clark_linearity(spec_one):
    fa = random_model_function(spec_one, 3, seed=1)
    fb = random_model_function(spec_one, 3, seed=2)
    grid = solve_nodes(spec_one, 0.0, -40, 40)
    sa = sample_function(fa, grid)
    sb = sample_function(fb, grid)
    mix = SampleSet(grid=grid, values=1.5 * sa.values - 2j * sb.values)
    xs = np.linspace(-2.0, 2.0, 7)
    np.testing.assert_allclose(
        clark_reconstruct(mix, spec_one, xs),
        1.5 * clark_reconstruct(sa, spec_one, xs) - 2j * clark_reconstruct(sb, spec_one, xs),
        rtol=1e-12, atol=1e-15,
    )


def test_clark_agrees_with_shifted_cardinal_series():
    # exponential-only inner function: the kernel expansion at gamma = 0 is
    # termwise the cardinal series of e^{-i c0 x} f at band c0, re-modulated
    c0 = 1.0
    spec = InnerFunctionSpec(tau=0.0, c=2.0 * c0, zeros=())
    f = random_model_function(spec, 5, seed=21)
    grid = solve_nodes(spec, 0.0, -200, 200)
    samples = sample_function(f, grid)
    xs = np.linspace(-2.0, 2.0, 17)
    direct = clark_reconstruct(samples, spec, xs)
    g_samples = samples.values * np.exp(-1j * c0 * grid.nodes)
    via_shannon = np.exp(1j * c0 * xs) * shannon_reconstruct(g_samples, c0, xs)
    np.testing.assert_allclose(direct, via_shannon, rtol=1e-10, atol=1e-13)


# ----------------------------------------------------------- model oversample

def test_model_oversample_reconstructs(spec_one):
    f = random_model_function(spec_one, 5, seed=9)
    big = enlarge(spec_one, 1.0, ())
    grid = solve_nodes(big, 0.0, -300, 300)
    samples = sample_function(f, grid)
    xs = np.linspace(-3.0, 3.0, 13)
    rec = model_oversample_reconstruct(samples, spec_one, 1.0, 2, xs)
    np.testing.assert_allclose(rec, f(xs), atol=1e-10)


def test_model_oversample_m1(spec_one):
    f = random_model_function(spec_one, 4, seed=13)
    big = enlarge(spec_one, 0.5, ())
    grid = solve_nodes(big, 0.0, -300, 300)
    samples = sample_function(f, grid)
    x = 0.41
    rec = model_oversample_reconstruct(samples, spec_one, 0.5, 1, x)
    assert rec == pytest.approx(f(x), abs=1e-6)


def test_model_oversample_grid_must_be_enlarged(spec_one):
    f = random_model_function(spec_one, 3, seed=3)
    base_grid = solve_nodes(spec_one, 0.0, -20, 20)
    samples = sample_function(f, base_grid)
    with pytest.raises(GridSpecMismatchError):
        model_oversample_reconstruct(samples, spec_one, 1.0, 2, 0.0)
    big_grid = solve_nodes(enlarge(spec_one, 1.0, ()), 0.0, -20, 20)
    ok = sample_function(f, big_grid)
    with pytest.raises(GridSpecMismatchError):
        # over_c disagrees with the grid's enlargement
        model_oversample_reconstruct(ok, spec_one, 2.0, 2, 0.0)
    with pytest.raises(ValueError):
        model_oversample_reconstruct(ok, spec_one, -1.0, 2, 0.0)
    with pytest.raises(ValueError):
        model_oversample_reconstruct(ok, spec_one, 1.0, 0, 0.0)


# -------------------------------------------------------------------- samples

def test_sample_set_shape_checked(spec_one):
    grid = solve_nodes(spec_one, 0.0, -5, 5)
    with pytest.raises(ValueError):
        SampleSet(grid=grid, values=np.zeros(7))


def test_truncate_samples(spec_one):
    grid = solve_nodes(spec_one, 0.0, -20, 20)
    f = random_model_function(spec_one, 3, seed=8)
    samples = sample_function(f, grid)
    small = truncate_samples(samples, 5)
    assert len(small.grid) == 11
    assert np.all(np.abs(small.grid.indices) <= 5)
    np.testing.assert_array_equal(small.values, samples.values[15:26])
    with pytest.raises(ValueError):
        truncate_samples(
            SampleSet(grid=solve_nodes(spec_one, 0.0, 7, 9), values=np.zeros(3)), 2)


def test_truncation_error_decreases(spec_two):
    f = random_model_function(spec_two, 5, seed=17)
    grid = solve_nodes(spec_two, 0.0, -320, 320)
    samples = sample_function(f, grid)
    xs = np.linspace(-2.0, 2.0, 33)
    errs = []
    for window in (40, 80, 160, 320):
        rec = clark_reconstruct(truncate_samples(samples, window), spec_two, xs)
        errs.append(float(np.max(np.abs(rec - f(xs)))))
    assert errs[-1] < errs[0]
    assert errs[-1] < 1e-7


# ------------------------------------------------------------------ plancherel

def test_plancherel_single_kernel(spec_two):
    grid = solve_nodes(spec_two, 0.7, -30, 30)
    x0 = float(grid.nodes[30])
    vals = reproducing_kernel(spec_two, x0, np.where(grid.nodes == x0, x0 + 1.0, grid.nodes))
    vals[30] = kernel_norm_sq(spec_two, x0)  # diagonal limit
    samples = SampleSet(grid=grid, values=vals)
    # ||k_x0|| from the node sums equals sqrt(w_0)
    assert plancherel_norm(samples) == pytest.approx(math.sqrt(grid.weights[30]), rel=1e-9)


def test_plancherel_matches_unit_norm(spec_two):
    f = random_model_function(spec_two, 5, seed=3)  # unit L^2 norm by construction
    grid = solve_nodes(spec_two, 0.0, -300, 300)
    assert plancherel_norm(sample_function(f, grid)) == pytest.approx(1.0, abs=1e-3)
