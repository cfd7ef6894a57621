"""Synthetic test sequences with known ground truth: translating
sinusoidal plaids, injected Gaussian blobs, and nearest-neighbor
rotation for slowly spinning backgrounds."""

from __future__ import annotations

import numpy as np


def translating_plaid(
    n_frames: int,
    height: int,
    width: int,
    velocity: tuple[float, float],
    fx: float = 0.02,
    fy: float = 0.02,
    amplitude: float = 0.2,
    offset: float = 0.5,
) -> np.ndarray:
    """Sum of an x and a y sinusoid rigidly translating at ``velocity``
    (vx, vy) pixels per frame.  Frequencies are in cycles per pixel.
    Returns a (frames, height, width) stack."""
    y, x = np.mgrid[0:height, 0:width].astype(float)
    vx, vy = velocity
    frames = np.empty((n_frames, height, width))
    for n in range(n_frames):
        frames[n] = (
            offset
            + amplitude * np.sin(2 * np.pi * fx * (x - vx * n))
            + amplitude * np.sin(2 * np.pi * fy * (y - vy * n))
        )
    return frames


def add_gaussian_blob(
    frames: np.ndarray,
    velocity: tuple[float, float],
    center: tuple[float, float],
    radius: float = 8.0,
    amplitude: float = 0.35,
) -> np.ndarray:
    """Superimpose a moving Gaussian spot (sigma = radius/2, center in
    (x, y) pixels at frame 0) and clip to [0, 1]."""
    frames = np.asarray(frames, dtype=float)
    n_frames, height, width = frames.shape
    y, x = np.mgrid[0:height, 0:width].astype(float)
    out = np.empty_like(frames)
    sig2 = 2.0 * (radius / 2.0) ** 2
    for n in range(n_frames):
        cx = center[0] + velocity[0] * n
        cy = center[1] + velocity[1] * n
        r2 = (x - cx) ** 2 + (y - cy) ** 2
        out[n] = np.clip(frames[n] + amplitude * np.exp(-r2 / sig2), 0.0, 1.0)
    return out


def rotate_nearest(image: np.ndarray, angle: float, center=None) -> np.ndarray:
    """Rotate ``image`` by ``angle`` radians (counterclockwise in x-right,
    y-down pixel coordinates) about ``center`` using nearest-neighbor
    resampling; source coordinates are clamped to the image."""
    img = np.asarray(image, dtype=float)
    h, w = img.shape
    if center is None:
        center = ((w - 1) / 2.0, (h - 1) / 2.0)
    cx, cy = center
    y, x = np.mgrid[0:h, 0:w].astype(float)
    dx, dy = x - cx, y - cy
    c, s = np.cos(angle), np.sin(angle)
    # inverse map: rotate destination coords by -angle
    sx = np.rint(cx + c * dx + s * dy).astype(int)
    sy = np.rint(cy - s * dx + c * dy).astype(int)
    np.clip(sx, 0, w - 1, out=sx)
    np.clip(sy, 0, h - 1, out=sy)
    return img[sy, sx]


def rotating_sequence(image: np.ndarray, n_frames: int, rate: float) -> np.ndarray:
    """Stack of ``image`` rotated by rate*n radians at frame n."""
    return np.stack([rotate_nearest(image, rate * n) for n in range(n_frames)])
