"""Frequency-domain analysis: magnitude, phase, group delay, passband
flatness, Nyquist attenuation, and white-noise gain.

Group delay is computed analytically.  With P'(w) = sum_m (-jm) p_m
e^{-jwm} for a coefficient polynomial P, the delay of H = N/D is
-Im[H'/H] = Im[D'/D - N'/N]; two-sided pairs get the chain-rule sign
flip on the backward branch.  At frequencies where the response itself
vanishes (a differentiator at w = 0, or an optimally placed Nyquist
zero) the formula degenerates, and the sample is re-evaluated a
one-sided 1e-6 off the zero, where the limit is finite because the
singular part of H'/H at a simple zero is purely real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.signal

from .design import LdeCoefficients, NonCausalPair

DB_FLOOR = -300.0
_RESPONSE_EPS = 1e-12


@dataclass(frozen=True)
class ResponseSample:
    omega: float
    value: complex
    magnitude_db: float
    phase: float
    group_delay: float


def _poly_on_circle(coef: np.ndarray, omega: np.ndarray, derivative: bool = False):
    m = np.arange(len(coef))
    phase = np.exp(-1j * np.outer(omega, m))
    if derivative:
        return phase @ (-1j * m * coef)
    return phase @ coef


def _response_parts(filt, omega: np.ndarray):
    """Return (H, dH/domega) on the grid for an LDE or a pair."""
    if isinstance(filt, NonCausalPair):
        hf, df = _response_parts(filt.forward, omega)
        hb, db = _response_parts(filt.backward, -omega)
        return hf + hb, df - db
    num = _poly_on_circle(filt.b, omega)
    den = _poly_on_circle(filt.a, omega)
    dnum = _poly_on_circle(filt.b, omega, derivative=True)
    dden = _poly_on_circle(filt.a, omega, derivative=True)
    h = num / den
    dh = (dnum * den - num * dden) / (den * den)
    return h, dh


def frequency_response(filt, omega) -> np.ndarray:
    """Complex H(e^{jw}); for pairs, forward(w) + backward(-w)."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    return _response_parts(filt, omega)[0]


def group_delay(filt, omega) -> np.ndarray:
    """Analytic -d(arg H)/dw in samples, with one-sided evaluation
    wherever |H| < 1e-12."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    h, dh = _response_parts(filt, omega)
    gd = -np.imag(dh / np.where(np.abs(h) < _RESPONSE_EPS, 1.0, h))
    bad = np.abs(h) < _RESPONSE_EPS
    if np.any(bad):
        shifted = omega[bad] + np.where(omega[bad] < math.pi / 2, 1e-6, -1e-6)
        h2, dh2 = _response_parts(filt, shifted)
        gd[bad] = -np.imag(dh2 / h2)
    return gd


def evaluate_response(filt, omega_grid) -> list[ResponseSample]:
    """Sample the response on a grid in [0, pi].  Phase is unwrapped by
    nearest-branch continuation along the grid; magnitudes below the
    -300 dB floor are clamped there."""
    omega = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    if omega.size and (omega.min() < 0.0 or omega.max() > math.pi + 1e-12):
        raise ValueError("omega grid must lie within [0, pi]")
    h, _ = _response_parts(filt, omega)
    mag = np.abs(h)
    with np.errstate(divide="ignore"):
        mdb = np.maximum(20.0 * np.log10(np.where(mag > 0, mag, np.nan)), DB_FLOOR)
    mdb = np.where(np.isnan(mdb), DB_FLOOR, mdb)
    phase = np.unwrap(np.angle(h))
    gd = group_delay(filt, omega)
    return [
        ResponseSample(float(w), complex(hv), float(db), float(ph), float(g))
        for w, hv, db, ph, g in zip(omega, h, mdb, phase, gd)
    ]


def write_response_csv(samples: Sequence[ResponseSample], out, flatness=None) -> None:
    """CSV rows omega,magnitude_db,phase_rad,group_delay at 9 significant
    digits; an optional flatness report is appended as '#' comments."""

    def emit(f):
        f.write("omega,magnitude_db,phase_rad,group_delay\n")
        for s in samples:
            f.write(f"{s.omega:.9g},{s.magnitude_db:.9g},{s.phase:.9g},{s.group_delay:.9g}\n")
        if flatness is not None:
            for k, m in enumerate(flatness, start=1):
                f.write(f"# flatness order {k}: {m:.6e}\n")

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w") as f:
            emit(f)


def _central_derivative(f, order: int, h: float) -> float:
    # symmetric binomial stencil, O(h^2) accurate
    acc = 0.0
    for k in range(order + 1):
        offset = (order / 2.0 - k) * h
        acc += (-1.0) ** k * math.comb(order, k) * f(offset)
    return acc / h**order


def flatness_report(filt, max_order: int = 3, step: float = 1e-3) -> np.ndarray:
    """Richardson-extrapolated central-difference magnitudes of the
    first max_order derivatives of |H(w)|^2 at w = 0."""
    if max_order > 6:
        raise ValueError("max_order above 6 is numerically meaningless here")

    def g(w):
        return float(np.abs(frequency_response(filt, abs(w)))[0] ** 2)

    out = np.empty(max_order)
    for order in range(1, max_order + 1):
        d_h = _central_derivative(g, order, step)
        d_h2 = _central_derivative(g, order, step / 2.0)
        out[order - 1] = abs((4.0 * d_h2 - d_h) / 3.0)
    return out


def is_flat(filt, max_order: int = 3, rel_tol: float = 1e-4) -> bool:
    """True when the first max_order derivatives of |H|^2 at 0 all fall
    below rel_tol relative to |H(0)|^2."""
    g0 = float(np.abs(frequency_response(filt, 0.0))[0] ** 2)
    mags = flatness_report(filt, max_order)
    return bool(np.all(mags <= rel_tol * g0)) if g0 > 0 else False


def nyquist_gain(filt) -> float:
    """|H| at the Nyquist frequency w = pi."""
    return float(np.abs(frequency_response(filt, math.pi))[0])


def zero_at_minus_one(lde: LdeCoefficients) -> bool:
    """True when the numerator has a zero at z = -1 (alternating sum
    below 1e-10 of the coefficient l1 mass)."""
    alt = float(np.sum(lde.b * (-1.0) ** np.arange(len(lde.b))))
    return abs(alt) < 1e-10 * float(np.sum(np.abs(lde.b)))


def white_noise_gain(lde: LdeCoefficients, tolerance: float = 1e-12) -> float:
    """Variance reduction factor sum_m h[m]^2 for unit-variance white
    input.  The impulse response is run in blocks and the sum truncated
    once a geometric envelope bound on the remaining tail drops below
    tolerance times the partial sum."""
    b, a = lde.b, lde.a
    if len(a) > 1:
        roots = np.roots(a)
        rho = float(np.max(np.abs(roots))) if roots.size else 0.0
    else:
        rho = 0.0
    n = len(a) - 1
    block = 512
    x = np.zeros(block)
    x[0] = 1.0
    zi = np.zeros(max(len(a), len(b)) - 1)
    total = 0.0
    start = 0
    while True:
        h, zi = scipy.signal.lfilter(b, a, x, zi=zi)
        x[0] = 0.0
        e_blk = float(h @ h)
        total += e_blk
        start += block
        # block-to-block envelope ratio for |h[m]| <= C m^(n-1) rho^m
        if rho > 0.0:
            r = (rho**block * ((start + block) / start) ** max(n - 1, 0)) ** 2
        else:
            r = 0.0
        if r < 1.0 and (e_blk * r / (1.0 - r) if r > 0 else 0.0) <= tolerance * total:
            break
        if start > 5_000_000:
            raise RuntimeError("white_noise_gain failed to converge")
    return total
