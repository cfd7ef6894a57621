import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fadefilt.closed_form import ClosedForm, closed_form_coefficients
from fadefilt.design import FilterDesign, derive_noncausal_pair
from fadefilt.runtime import (
    Axis,
    FilterState,
    FrameFilter,
    Priming,
    filter_causal,
    filter_image_separable,
    filter_noncausal,
    filter_time_stack,
    steady_state_gain,
)
from fadefilt.weights import Causality, WeightSpec

SMOOTHER = closed_form_coefficients(ClosedForm.SMOOTHER_K0, math.exp(-0.5), 1.0)
DIFF = closed_form_coefficients(ClosedForm.DIFFERENTIATOR_K1, math.exp(-0.5), 2.0)
PAIR = closed_form_coefficients(ClosedForm.SMOOTHER_NONCAUSAL, math.exp(-1.0))


def test_scalar_path_is_bitwise_identical_to_array_path():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(128)
    state = FilterState(SMOOTHER)
    scalar = np.array([state.step(v) for v in x])
    assert np.array_equal(scalar, filter_causal(SMOOTHER, x, Priming.ZERO))


def test_frame_path_is_bitwise_identical_to_scalar_path():
    rng = np.random.default_rng(4)
    frames = rng.standard_normal((20, 3, 5))
    ff = FrameFilter(DIFF, (3, 5))
    frame_out = np.stack([ff.step(f) for f in frames])
    for i in range(3):
        for j in range(5):
            state = FilterState(DIFF)
            pixel = np.array([state.step(v) for v in frames[:, i, j]])
            assert np.array_equal(frame_out[:, i, j], pixel)


def test_priming_invariant_constant_input():
    # after priming with x0, the next output of a smoother is x0
    state = FilterState(SMOOTHER)
    state.prime_constant(0.37)
    assert state.step(0.37) == pytest.approx(0.37, abs=1e-9)
    # and a differentiator reports zero slope
    dstate = FilterState(DIFF)
    dstate.prime_constant(0.37)
    assert dstate.step(0.37) == pytest.approx(0.0, abs=1e-9)


def test_hold_priming_array_path():
    x = np.full(30, -2.5)
    y = filter_causal(SMOOTHER, x, Priming.HOLD_FIRST)
    assert np.allclose(y, -2.5, atol=1e-9)
    # zero priming instead shows the start-up transient
    y0 = filter_causal(SMOOTHER, x, Priming.ZERO)
    assert abs(y0[0] + 2.5) > 0.1


def test_steady_state_gain_shape():
    zi = steady_state_gain(SMOOTHER)
    assert zi.shape == (len(SMOOTHER.a) - 1,)


def test_reset():
    state = FilterState(SMOOTHER)
    state.step(1.0)
    state.reset()
    fresh = FilterState(SMOOTHER)
    assert state.step(0.5) == fresh.step(0.5)


def test_noncausal_smoother_is_zero_phase_on_symmetric_signal():
    n = 81
    t = np.arange(n, dtype=float)
    x = np.exp(-0.5 * ((t - 40.0) / 6.0) ** 2)
    y = filter_noncausal(PAIR, x)
    assert np.allclose(y[10:-10], y[::-1][10:-10], atol=1e-9)
    # peak stays centered
    assert np.argmax(y) == 40


def test_noncausal_preserves_constants():
    x = np.full(60, 0.8)
    y = filter_noncausal(PAIR, x, Priming.HOLD_FIRST)
    assert np.allclose(y, 0.8, atol=1e-9)


def test_image_axis_orientation():
    # an image constant along each row must be unchanged by filtering
    # along rows, and vice versa
    image = np.tile(np.linspace(0.0, 1.0, 24)[:, None], (1, 17))
    along_rows = filter_image_separable(PAIR, image, Axis.ROWS)
    assert np.allclose(along_rows, image, atol=1e-9)
    transposed = filter_image_separable(PAIR, image.T, Axis.COLS)
    assert np.allclose(transposed, image.T, atol=1e-9)
    changed = filter_image_separable(PAIR, image, Axis.COLS)
    assert not np.allclose(changed[1:-1], image[1:-1], atol=1e-3)


def test_image_rows_equals_per_row_signal_filtering():
    rng = np.random.default_rng(11)
    image = rng.standard_normal((6, 40))
    got = filter_image_separable(SMOOTHER, image, Axis.ROWS, Priming.ZERO)
    for i in range(6):
        row = filter_causal(SMOOTHER, image[i], Priming.ZERO)
        assert np.array_equal(got[i], row)


def test_time_stack_matches_frame_filter_and_is_lazy():
    rng = np.random.default_rng(12)
    frames = rng.standard_normal((15, 4, 4))
    gen = filter_time_stack(SMOOTHER, iter(frames), Priming.ZERO)
    assert hasattr(gen, "__next__")
    got = np.stack(list(gen))
    ff = FrameFilter(SMOOTHER, (4, 4))
    want = np.stack([ff.step(f) for f in frames])
    assert np.array_equal(got, want)


def test_time_stack_rejects_pairs():
    frames = np.zeros((5, 2, 2))
    with pytest.raises(ValueError):
        list(filter_time_stack(PAIR, frames))


def test_time_stack_hold_priming_uses_first_frame():
    frames = np.full((12, 3, 3), 1.7)
    got = np.stack(list(filter_time_stack(SMOOTHER, frames, Priming.HOLD_FIRST)))
    assert np.allclose(got, 1.7, atol=1e-9)


@settings(deadline=None, max_examples=30)
@given(
    seed=st.integers(min_value=0, max_value=2**31 - 1),
    a1=st.floats(min_value=-3.0, max_value=-0.1),
    a2=st.floats(min_value=0.1, max_value=3.0),
)
def test_linearity_property(seed, a1, a2):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(64)
    y = rng.standard_normal(64)
    lhs = filter_causal(DIFF, a1 * x + a2 * y, Priming.ZERO)
    rhs = a1 * filter_causal(DIFF, x, Priming.ZERO) + a2 * filter_causal(DIFF, y, Priming.ZERO)
    assert np.allclose(lhs, rhs, atol=1e-9 * max(1.0, abs(a1) + abs(a2)))


@settings(deadline=None, max_examples=30)
@given(
    seed=st.integers(min_value=0, max_value=2**31 - 1),
    shift=st.integers(min_value=1, max_value=20),
)
def test_shift_invariance_property(seed, shift):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(80)
    padded = np.concatenate([np.zeros(shift), x])
    assert np.array_equal(
        filter_causal(SMOOTHER, padded, Priming.ZERO)[shift:],
        filter_causal(SMOOTHER, x, Priming.ZERO),
    )


def test_two_sided_design_runtime_round_trip():
    # derived pair through the runtime reproduces a delayed quadratic
    design = FilterDesign(2, 1, WeightSpec(-1.0, causality=Causality.TWO_SIDED))
    pair = derive_noncausal_pair(design)
    t = np.arange(120, dtype=float)
    x = 0.1 * t**2 - 2.0 * t + 5.0
    y = filter_noncausal(pair, x, Priming.ZERO)
    want = 0.2 * t - 2.0
    assert np.allclose(y[30:-30], want[30:-30], atol=1e-7)
