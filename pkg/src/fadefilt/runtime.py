"""Filter execution: streaming scalar state, whole-signal passes,
two-pass non-causal filtering, separable image filtering, and lazy
per-pixel filtering of frame streams.

All realizations are transposed direct-form II.  The scalar
FilterState, the scipy.signal.lfilter array path, and the vectorized
per-pixel frame path perform the same floating-point operations in the
same order, so their outputs agree bit for bit; tests rely on that.

Priming controls the initial delay-line contents.  Zero starts from
rest.  HoldFirst loads the analytic steady state the filter would have
reached if the input had been equal to its first sample forever, which
suppresses start-up transients on signals and at image borders (it
cannot remove them entirely).
"""

from __future__ import annotations

import enum
from typing import Iterable, Iterator

import numpy as np
import scipy.signal

from .design import LdeCoefficients, NonCausalPair


class Priming(enum.Enum):
    ZERO = "zero"
    HOLD_FIRST = "hold"


class Axis(enum.Enum):
    ROWS = "rows"
    COLS = "cols"


def _padded(lde: LdeCoefficients) -> tuple[np.ndarray, np.ndarray]:
    n = max(len(lde.b), len(lde.a))
    b = np.zeros(n)
    a = np.zeros(n)
    b[: len(lde.b)] = lde.b
    a[: len(lde.a)] = lde.a
    return b, a


def steady_state_gain(lde: LdeCoefficients) -> np.ndarray:
    """Delay-line contents at the fixed point under unit constant input
    (transposed direct-form II convention)."""
    return scipy.signal.lfilter_zi(lde.b, lde.a)


class FilterState:
    """Single-channel streaming filter.  Mutable and single-owner; make
    one per concurrent stream."""

    def __init__(self, coefficients: LdeCoefficients):
        self.coefficients = coefficients
        self._b, self._a = _padded(coefficients)
        self.delay_line = np.zeros(len(self._b) - 1)

    def reset(self) -> None:
        self.delay_line[:] = 0.0

    def prime_constant(self, x0: float) -> None:
        """Jump to the steady state for constant input x0."""
        self.delay_line[:] = steady_state_gain(self.coefficients) * x0

    def step(self, x: float) -> float:
        b, a, z = self._b, self._a, self.delay_line
        n = len(z)
        y = b[0] * x + z[0]
        for i in range(n - 1):
            z[i] = z[i + 1] + b[i + 1] * x - a[i + 1] * y
        z[n - 1] = b[n] * x - a[n] * y
        return float(y)


class FrameFilter:
    """Vectorized causal filter over a stream of equally shaped frames:
    one independent transposed direct-form II state per pixel."""

    def __init__(self, coefficients: LdeCoefficients, shape, hold: np.ndarray | None = None):
        self._b, self._a = _padded(coefficients)
        n = len(self._b) - 1
        if hold is not None:
            zi = steady_state_gain(coefficients)
            self.state = zi.reshape((n,) + (1,) * len(shape)) * np.asarray(hold, float)
        else:
            self.state = np.zeros((n,) + tuple(shape))

    def step(self, frame: np.ndarray) -> np.ndarray:
        b, a, z = self._b, self._a, self.state
        x = np.asarray(frame, dtype=float)
        n = z.shape[0]
        y = b[0] * x + z[0]
        for i in range(n - 1):
            z[i] = z[i + 1] + b[i + 1] * x - a[i + 1] * y
        z[n - 1] = b[n] * x - a[n] * y
        return y


def _zi_for(lde: LdeCoefficients, x: np.ndarray, axis: int) -> np.ndarray:
    zi = steady_state_gain(lde)
    x0 = np.take(x, 0, axis=axis)
    shape = [1] * x.ndim
    shape[axis] = len(zi)
    return np.expand_dims(x0, axis) * zi.reshape(shape)


def _causal_pass(lde: LdeCoefficients, x: np.ndarray, axis: int, priming: Priming) -> np.ndarray:
    if priming is Priming.HOLD_FIRST:
        y, _ = scipy.signal.lfilter(lde.b, lde.a, x, axis=axis, zi=_zi_for(lde, x, axis))
        return y
    return scipy.signal.lfilter(lde.b, lde.a, x, axis=axis)


def _noncausal_pass(pair: NonCausalPair, x: np.ndarray, axis: int, priming: Priming) -> np.ndarray:
    fwd = _causal_pass(pair.forward, x, axis, priming)
    rev = np.flip(x, axis=axis)
    bwd = np.flip(_causal_pass(pair.backward, rev, axis, priming), axis=axis)
    return fwd + bwd


def filter_causal(
    lde: LdeCoefficients, signal, priming: Priming = Priming.ZERO
) -> np.ndarray:
    """Run the LDE left to right over a 1-D signal."""
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("signal must be a non-empty 1-D array")
    return _causal_pass(lde, x, 0, priming)


def filter_noncausal(
    pair: NonCausalPair, signal, priming: Priming = Priming.HOLD_FIRST
) -> np.ndarray:
    """Forward pass plus reversed backward pass, summed."""
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("signal must be a non-empty 1-D array")
    return _noncausal_pass(pair, x, 0, priming)


def filter_image_separable(
    filt, image, axis: Axis, priming: Priming = Priming.HOLD_FIRST
) -> np.ndarray:
    """Apply a 1-D filter independently to every row (Axis.ROWS, i.e.
    along x) or every column (Axis.COLS, along y) of a 2-D image."""
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("image must be 2-D")
    ax = 1 if axis is Axis.ROWS else 0
    if isinstance(filt, NonCausalPair):
        return _noncausal_pass(filt, img, ax, priming)
    return _causal_pass(filt, img, ax, priming)


def filter_time_stack(
    lde: LdeCoefficients,
    frames: Iterable[np.ndarray],
    priming: Priming = Priming.HOLD_FIRST,
) -> Iterator[np.ndarray]:
    """Lazily filter a frame stream along time, one state per pixel.
    Frame streams are causal only; use the image path for two-sided
    spatial work."""
    if isinstance(lde, NonCausalPair):
        raise ValueError("frame streams are causal-only")
    it = iter(frames)
    try:
        first = np.asarray(next(it), dtype=float)
    except StopIteration:
        return
    hold = first if priming is Priming.HOLD_FIRST else None
    ff = FrameFilter(lde, first.shape, hold=hold)
    yield ff.step(first)
    for frame in it:
        yield ff.step(np.asarray(frame, dtype=float))
