import math

import numpy as np
import pytest
import scipy.signal

from fadefilt.basis import orthonormal_basis
from fadefilt.design import (
    FilterDesign,
    LdeCoefficients,
    NonCausalPair,
    binomial_denominator,
    derive_causal_lde,
    derive_noncausal_pair,
    impulse_response_prefix,
    pole_multiplicity,
    spectrum_filter_bank,
)
from fadefilt.weights import Causality, WeightSpec


def causal_design(degree=2, derivative=0, pole=0.5, kappa=0, q=0.0, T=1.0):
    return FilterDesign(degree, derivative, WeightSpec(math.log(pole), kappa), q, T)


def test_known_differentiator_coefficients():
    # frozen reference point: degree 2, first derivative, p = 1/2, q = 4
    lde = derive_causal_lde(causal_design(derivative=1, q=4.0))
    assert np.allclose(lde.b, [0.0625, 0.0, -0.0625, 0.0], atol=1e-12)
    assert np.allclose(lde.a, [1.0, -1.5, 0.75, -0.125], atol=1e-14)


def test_exponential_smoother_special_case():
    lde = derive_causal_lde(causal_design(degree=0, pole=0.3679))
    assert np.allclose(lde.b, [1 - 0.3679, 0.0], atol=1e-12)
    assert np.allclose(lde.a, [1.0, -0.3679], atol=1e-14)
    assert lde.dc_gain() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("pole", [0.2, 0.5, 0.85])
@pytest.mark.parametrize("degree,kappa", [(0, 0), (1, 0), (2, 1), (3, 2), (6, 0)])
def test_denominator_is_binomial_power(pole, degree, kappa):
    lde = derive_causal_lde(causal_design(degree=degree, pole=pole, kappa=kappa, q=1.0))
    n = degree + kappa + 1
    assert np.array_equal(lde.a, binomial_denominator(pole, n))
    p_hat, mult = pole_multiplicity(lde)
    assert mult == n
    assert p_hat == pytest.approx(pole, abs=1e-13)


def test_pole_multiplicity_rejects_non_binomial():
    lde = LdeCoefficients(b=np.array([1.0]), a=np.array([1.0, -0.9, 0.1]))
    with pytest.raises(ValueError):
        pole_multiplicity(lde)


def test_numerator_length_matches_denominator():
    for degree, kappa in ((0, 0), (2, 0), (2, 1), (4, 2)):
        lde = derive_causal_lde(causal_design(degree=degree, kappa=kappa, q=0.7))
        assert len(lde.b) == len(lde.a) == degree + kappa + 2


def test_smoother_dc_gain_is_unity():
    for q in (-1.5, 0.0, 3.0):
        for kappa in (0, 1, 2):
            lde = derive_causal_lde(causal_design(kappa=kappa, q=q))
            assert lde.dc_gain() == pytest.approx(1.0, abs=1e-10)


def test_differentiator_dc_gain_is_zero():
    lde = derive_causal_lde(causal_design(derivative=1, q=2.0))
    assert lde.dc_gain() == pytest.approx(0.0, abs=1e-12)


def test_polynomial_reproduction_end_to_end():
    # a degree-2 design run over a quadratic signal must return the
    # delayed signal (smoother) / its slope (differentiator) exactly
    # once the start-up transient has decayed
    t = np.arange(400, dtype=float)
    x = 3.0 - 0.5 * t + 0.02 * t**2
    for q in (0.0, 2.5):
        sm = derive_causal_lde(causal_design(q=q, kappa=1))
        df = derive_causal_lde(causal_design(derivative=1, q=q, kappa=1))
        y_sm = scipy.signal.lfilter(sm.b, sm.a, x)
        y_df = scipy.signal.lfilter(df.b, df.a, x)
        want_sm = 3.0 - 0.5 * (t - q) + 0.02 * (t - q) ** 2
        want_df = -0.5 + 0.04 * (t - q)
        assert np.allclose(y_sm[200:], want_sm[200:], atol=1e-8)
        assert np.allclose(y_df[200:], want_df[200:], atol=1e-8)


def test_impulse_response_prefix_matches_filtering():
    design = causal_design(derivative=1, kappa=1, q=2.5)
    lde = derive_causal_lde(design)
    href = impulse_response_prefix(design, length=40)
    imp = np.zeros(40)
    imp[0] = 1.0
    assert np.allclose(scipy.signal.lfilter(lde.b, lde.a, imp), href, atol=1e-13)


def test_impulse_response_prefix_validation():
    design = causal_design()
    with pytest.raises(ValueError):
        impulse_response_prefix(design, length=2)  # shorter than the support
    wrong = orthonormal_basis(2, WeightSpec(-2.0))
    with pytest.raises(ValueError):
        impulse_response_prefix(design, basis=wrong, length=40)


def test_derive_causal_rejects_two_sided():
    two_sided = FilterDesign(2, 0, WeightSpec(-1.0, causality=Causality.TWO_SIDED))
    with pytest.raises(ValueError):
        derive_causal_lde(two_sided)
    with pytest.raises(ValueError):
        derive_noncausal_pair(causal_design())


def test_noncausal_pair_structure():
    design = FilterDesign(2, 0, WeightSpec(-1.0, causality=Causality.TWO_SIDED))
    pair = derive_noncausal_pair(design)
    assert isinstance(pair, NonCausalPair)
    # symmetric weight, even estimate: the two directions coincide
    assert np.allclose(pair.forward.b, pair.backward.b, atol=1e-14)
    # combined DC gain is one: forward and backward each carry half the
    # center sample
    dc = pair.forward.dc_gain() + pair.backward.dc_gain()
    assert dc == pytest.approx(1.0, abs=1e-10)


def test_noncausal_differentiator_antisymmetry():
    design = FilterDesign(2, 1, WeightSpec(-1.0, causality=Causality.TWO_SIDED))
    pair = derive_noncausal_pair(design)
    assert np.allclose(pair.forward.b, -pair.backward.b, atol=1e-14)
    assert pair.forward.dc_gain() + pair.backward.dc_gain() == pytest.approx(0.0, abs=1e-12)


def test_spectrum_bank_shares_denominator():
    design = causal_design(kappa=1, q=1.3)
    bank = spectrum_filter_bank(design)
    assert len(bank.filters) == design.degree + 1
    for filt in bank.filters:
        assert np.array_equal(filt.a, bank.filters[0].a)
    # per-filter impulse responses recombine into the design's response
    lde = derive_causal_lde(design)
    imp = np.zeros(30)
    imp[0] = 1.0
    total = sum(
        c * scipy.signal.lfilter(f.b, f.a, imp)
        for c, f in zip(bank.synthesis, bank.filters)
    )
    assert np.allclose(total, scipy.signal.lfilter(lde.b, lde.a, imp), atol=1e-12)


def test_lde_validation():
    with pytest.raises(ValueError):
        LdeCoefficients(b=np.array([1.0]), a=np.array([2.0, 0.5]))  # not monic
    with pytest.raises(ValueError):
        LdeCoefficients(b=np.array([1.0]), a=np.array([1.0, -1.5]))  # unstable
    lde = LdeCoefficients(b=np.array([0.5, 0.5]), a=np.array([1.0, -0.25]))
    with pytest.raises(ValueError):
        lde.b[0] = 9.0  # frozen storage


def test_design_validation():
    with pytest.raises(ValueError):
        FilterDesign(2, 3, WeightSpec(-1.0))  # derivative above degree
    with pytest.raises(ValueError):
        FilterDesign(2, 0, WeightSpec(-1.0), sample_period=0.0)
    with pytest.raises(ValueError):
        FilterDesign(2, 0, WeightSpec(-1.0, causality=Causality.TWO_SIDED), delay=1.0)


def test_sample_period_scales_differentiator():
    base = derive_causal_lde(causal_design(derivative=1, q=1.0, T=1.0))
    fast = derive_causal_lde(causal_design(derivative=1, q=1.0, T=0.25))
    assert np.allclose(fast.b, 4.0 * base.b, rtol=1e-12)
    assert np.allclose(fast.a, base.a)
