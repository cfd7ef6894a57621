"""Derivation of recursive filter realizations from regression designs.

A design bundles the polynomial model degree B, the requested output
derivative order D, the discount weight, the evaluation delay q, and
the sample period T.  The causal estimator has the exact impulse
response

    h(m) = sum_k c_k psi_k(m) w(m),   m >= 0

which is a degree-(B+kappa) polynomial times p**m, hence rational with
denominator (1 - p z^-1)**(B+kappa+1).  The numerator follows by
convolving that known denominator with the impulse response prefix and
truncating; the convolution must then vanish identically for all later
samples, which is checked and makes the construction self-validating.

Two-sided (zero-phase or odd-phase) designs are realized as a causal
forward filter plus the mirrored filter run over the reversed signal,
with the center sample m = 0 shared half-and-half between the two
passes.  The half split makes each one-sided response rational of the
same order and reproduces the tabulated non-causal forms exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisSet, orthonormal_basis, synthesis_weights
from .weights import Causality, WeightSpec

TAIL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FilterDesign:
    """Complete parameter set for one smoother/differentiator."""

    degree: int
    derivative: int
    weight: WeightSpec
    delay: float = 0.0
    sample_period: float = 1.0

    def __post_init__(self):
        if self.derivative < 0 or self.derivative > self.degree:
            raise ValueError(
                f"derivative order {self.derivative} outside [0, degree={self.degree}]"
            )
        if not (self.sample_period > 0.0):
            raise ValueError("sample_period must be > 0")
        if self.weight.causality is Causality.TWO_SIDED and self.delay != 0.0:
            raise ValueError("two-sided designs require delay == 0")

    @property
    def pole(self) -> float:
        return self.weight.pole

    @property
    def kappa(self) -> int:
        return self.weight.kappa

    @property
    def causality(self) -> Causality:
        return self.weight.causality


@dataclass(frozen=True, eq=False)
class LdeCoefficients:
    """Numerator b and monic denominator a of a rational filter H(z),
    both in ascending powers of z^-1."""

    b: np.ndarray
    a: np.ndarray
    sample_period: float = 1.0

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        if a[0] != 1.0:
            raise ValueError("denominator must be monic (a[0] == 1)")
        if not (self.sample_period > 0.0):
            raise ValueError("sample_period must be > 0")
        if len(a) > 1:
            roots = np.roots(a)
            if roots.size and np.max(np.abs(roots)) >= 1.0:
                raise ValueError("unstable denominator: pole on or outside unit circle")
        b.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def order(self) -> int:
        return max(len(self.b), len(self.a)) - 1

    def dc_gain(self) -> float:
        return float(np.sum(self.b) / np.sum(self.a))


@dataclass(frozen=True)
class NonCausalPair:
    """Forward and backward halves of a two-sided filter.  The output
    is (forward pass, increasing n) + (backward filter run over the
    reversed signal, result reversed)."""

    forward: LdeCoefficients
    backward: LdeCoefficients

    @property
    def sample_period(self) -> float:
        return self.forward.sample_period


@dataclass(frozen=True)
class SpectrumFilterBank:
    """One causal filter per basis index; filter k outputs the running
    projection coefficient beta_k(n), and the synthesis weights combine
    them into the final estimate."""

    filters: tuple
    synthesis: np.ndarray
    design: FilterDesign


def binomial_denominator(pole: float, multiplicity: int) -> np.ndarray:
    """Coefficients of (1 - pole*z^-1)**multiplicity, ascending."""
    return np.array(
        [math.comb(multiplicity, i) * (-pole) ** i for i in range(multiplicity + 1)]
    )


def pole_multiplicity(lde: LdeCoefficients) -> tuple[float, int]:
    """Recover (pole, multiplicity) of a denominator that is a pure
    binomial power.  Raises if the structure does not hold to 1e-9."""
    a = np.trim_zeros(lde.a, "b")
    n = len(a) - 1
    if n == 0:
        return 0.0, 0
    pole = -a[1] / n
    ref = binomial_denominator(pole, n)
    if np.max(np.abs(a - ref)) > 1e-9 * max(1.0, np.max(np.abs(a))):
        raise ValueError("denominator is not a repeated-real-pole binomial power")
    return float(pole), n


def impulse_response_prefix(
    design: FilterDesign, basis: BasisSet | None = None, length: int = 0
) -> np.ndarray:
    """First ``length`` samples of the exact causal impulse response
    h(m) = sum_k c_k psi_k(m) w(m).  For two-sided designs this is the
    m >= 0 half of the symmetric response (no center split applied)."""
    if basis is None:
        basis = orthonormal_basis(design.degree, design.weight)
    if basis.weight != design.weight or basis.degree != design.degree:
        raise ValueError("basis does not match the design's weight/degree")
    if length < design.degree + design.kappa + 2:
        raise ValueError("length must cover the full numerator support")
    c = synthesis_weights(basis, design.derivative, design.delay, design.sample_period)
    return _weighted_combination(basis, c, design.weight, length)


def _weighted_combination(
    basis: BasisSet, c: np.ndarray, weight: WeightSpec, length: int
) -> np.ndarray:
    m = np.arange(length, dtype=float)
    vals = np.zeros(length)
    for k in range(basis.degree + 1):
        vals += c[k] * basis.evaluate(k, m)
    return vals * weight.values(m)


def _numerator_from_impulse(a: np.ndarray, h: np.ndarray) -> np.ndarray:
    """b = a (*) h truncated to len(a); the same convolution must vanish
    for the following five samples or the response is not rational with
    this denominator."""
    n = len(a) - 1
    full = np.convolve(a, h)
    b = full[: n + 1].copy()
    tail = np.max(np.abs(full[n + 1 : n + 6]))
    scale = max(1.0, float(np.max(np.abs(b))))
    if tail > TAIL_TOLERANCE * scale:
        raise RuntimeError(
            f"trailing convolution terms do not vanish (residual {tail:.3e}); "
            "impulse response is not rational with the assumed denominator"
        )
    return b


def derive_causal_lde(design: FilterDesign, basis: BasisSet | None = None) -> LdeCoefficients:
    """General causal derivation: binomial denominator of multiplicity
    B + kappa + 1, numerator extracted by denominator*impulse
    convolution with a trailing-vanish validation."""
    if design.causality is not Causality.CAUSAL:
        raise ValueError("derive_causal_lde requires a causal design")
    n = design.degree + design.kappa + 1
    a = binomial_denominator(design.pole, n)
    h = impulse_response_prefix(design, basis, n + 6)
    b = _numerator_from_impulse(a, h)
    return LdeCoefficients(b=b, a=a, sample_period=design.sample_period)


def derive_noncausal_pair(design: FilterDesign) -> NonCausalPair:
    """Two-sided derivation.  The symmetric impulse response is split
    into causal halves with h(0) shared equally, and each half is
    realized against the denominator (1 - p z^-1)**(B+1)."""
    if design.causality is not Causality.TWO_SIDED:
        raise ValueError("derive_noncausal_pair requires a two-sided design")
    basis = orthonormal_basis(design.degree, design.weight)
    c = synthesis_weights(basis, design.derivative, design.delay, design.sample_period)
    n = design.degree + 1
    a = binomial_denominator(design.pole, n)

    m = np.arange(n + 6, dtype=float)
    decay = design.pole ** m
    fwd = np.zeros(n + 6)
    bwd = np.zeros(n + 6)
    for k in range(design.degree + 1):
        fwd += c[k] * basis.evaluate(k, m)
        bwd += c[k] * basis.evaluate(k, -m)
    fwd *= decay
    bwd *= decay
    fwd[0] *= 0.5
    bwd[0] *= 0.5

    forward = LdeCoefficients(
        b=_numerator_from_impulse(a, fwd), a=a, sample_period=design.sample_period
    )
    backward = LdeCoefficients(
        b=_numerator_from_impulse(a, bwd), a=a, sample_period=design.sample_period
    )
    return NonCausalPair(forward=forward, backward=backward)


def spectrum_filter_bank(design: FilterDesign) -> SpectrumFilterBank:
    """Per-coefficient analysis filters: filter k realizes the causal
    convolution with kernel psi_k(m) w(m), so its output is the running
    projection beta_k(n).  Weighting the bank outputs by the synthesis
    vector reproduces the combined filter exactly."""
    if design.causality is not Causality.CAUSAL:
        raise ValueError("spectrum_filter_bank requires a causal design")
    basis = orthonormal_basis(design.degree, design.weight)
    n = design.degree + design.kappa + 1
    a = binomial_denominator(design.pole, n)
    filters = []
    for k in range(design.degree + 1):
        unit = np.zeros(design.degree + 1)
        unit[k] = 1.0
        h = _weighted_combination(basis, unit, design.weight, n + 6)
        filters.append(
            LdeCoefficients(
                b=_numerator_from_impulse(a, h), a=a, sample_period=design.sample_period
            )
        )
    c = synthesis_weights(basis, design.derivative, design.delay, design.sample_period)
    return SpectrumFilterBank(filters=tuple(filters), synthesis=c, design=design)
