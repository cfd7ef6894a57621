"""Gradient-based optical flow and moving-target indication.

The pipeline estimates dense background motion from spatiotemporal
intensity gradients and then flags pixels whose raw gradient products
are not explained by that motion:

1. temporal derivative I_z per pixel with the causal B=2, kappa=1, q=4
   differentiator; input frames are buffered by round(q) so the other
   gradients can be computed on the frame the estimate refers to;
2. spatial derivatives I_x, I_y of the delayed frame with the
   non-causal B=2 differentiator along rows and columns;
3. the five products IxIx, IxIy, IxIz, IyIy, IyIz smoothed separably
   in x and y (two-sided single-pole smoother) and in time (causal
   single-pole smoother), one shared pole for all three axes;
4. per-pixel 2x2 solve for (vx, vy); pixels with a near-singular
   structure tensor are marked invalid and carry zero flow;
5. disparity dJ: norm of the raw spatiotemporal products minus the
   products predicted from the raw structure tensor and the estimated
   flow.  Large dJ marks independently moving foreground.

Temporal recursions are primed by holding the first frame (and, for
the product smoothers, the first smoothed product frame), which
shortens but does not remove warm-up; outputs inside the warm-up span
are flagged rather than suppressed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Iterable, Iterator

import numpy as np

from .closed_form import ClosedForm, closed_form_coefficients
from .design import FilterDesign, LdeCoefficients, NonCausalPair, derive_causal_lde
from .runtime import Axis, FrameFilter, filter_image_separable
from .weights import Causality, WeightSpec


@dataclass(frozen=True)
class FlowConfig:
    spatial_sigma: float = -1.0
    temporal_sigma: float = -1.0
    temporal_q: float = 4.0
    temporal_kappa: int = 1
    smoothing_pole: float = math.exp(-1.0 / 16.0)
    det_threshold: float = 1e-6
    t_space: float = 1.0
    t_time: float = 1.0

    def __post_init__(self):
        if not (self.spatial_sigma < 0.0 and self.temporal_sigma < 0.0):
            raise ValueError("sigmas must be < 0")
        if not (0.0 < self.smoothing_pole < 1.0):
            raise ValueError("smoothing_pole must lie in (0, 1)")
        if self.det_threshold < 0.0:
            raise ValueError("det_threshold must be >= 0")
        if self.temporal_kappa < 0:
            raise ValueError("temporal_kappa must be >= 0")
        if not (self.t_space > 0.0 and self.t_time > 0.0):
            raise ValueError("sample periods must be > 0")

    @property
    def spatial_pole(self) -> float:
        return math.exp(self.spatial_sigma)

    @property
    def temporal_pole(self) -> float:
        return math.exp(self.temporal_sigma)

    @property
    def frame_delay(self) -> int:
        """Frames the spatial path is delayed to align with I_z."""
        return int(round(self.temporal_q))

    @property
    def warmup_frames(self) -> int:
        """Input frames consumed before outputs are trustworthy."""
        return self.frame_delay + math.ceil(6.0 / (1.0 - self.temporal_pole))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    # filter construction

    def spatial_differentiator(self) -> NonCausalPair:
        return closed_form_coefficients(
            ClosedForm.DIFFERENTIATOR_NONCAUSAL, self.spatial_pole,
            sample_period=self.t_space,
        )

    def temporal_differentiator(self) -> LdeCoefficients:
        design = FilterDesign(
            degree=2,
            derivative=1,
            weight=WeightSpec(sigma=self.temporal_sigma, kappa=self.temporal_kappa),
            delay=self.temporal_q,
            sample_period=self.t_time,
        )
        return derive_causal_lde(design)

    def spatial_smoother(self) -> NonCausalPair:
        p = self.smoothing_pole
        scale = (1.0 - p) / (2.0 * (1.0 + p))
        half = LdeCoefficients(b=np.array([scale, p * scale]), a=np.array([1.0, -p]))
        return NonCausalPair(forward=half, backward=half)

    def temporal_smoother(self) -> LdeCoefficients:
        p = self.smoothing_pole
        return LdeCoefficients(b=np.array([1.0 - p]), a=np.array([1.0, -p]))


@dataclass(frozen=True)
class ProductMaps:
    """Smoothed gradient products (the structure-tensor entries and the
    spatiotemporal vector) plus the raw, unsmoothed products."""

    jxx: np.ndarray
    jxy: np.ndarray
    jxz: np.ndarray
    jyy: np.ndarray
    jyz: np.ndarray
    raw_xx: np.ndarray
    raw_xy: np.ndarray
    raw_xz: np.ndarray
    raw_yy: np.ndarray
    raw_yz: np.ndarray


@dataclass(frozen=True)
class FlowField:
    vx: np.ndarray
    vy: np.ndarray
    valid: np.ndarray


@dataclass(frozen=True)
class FlowResult:
    frame_index: int
    warmed_up: bool
    flow: FlowField
    disparity: np.ndarray


def spatial_gradients(image: np.ndarray, cfg: FlowConfig) -> tuple[np.ndarray, np.ndarray]:
    """I_x along rows and I_y along columns via the non-causal
    differentiator pair at the spatial pole."""
    pair = cfg.spatial_differentiator()
    ix = filter_image_separable(pair, image, Axis.ROWS)
    iy = filter_image_separable(pair, image, Axis.COLS)
    return ix, iy


def temporal_gradient(
    stream: Iterable[np.ndarray], cfg: FlowConfig
) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield (frame_index, delayed_frame, iz) once the delay buffer has
    filled; frame_index is the input index of the delayed frame, which
    both outputs are aligned to."""
    delay = cfg.frame_delay
    diff = cfg.temporal_differentiator()
    state: FrameFilter | None = None
    buffer: list[np.ndarray] = []
    for n, frame in enumerate(stream):
        frame = np.asarray(frame, dtype=float)
        if state is None:
            state = FrameFilter(diff, frame.shape, hold=frame)
        iz = state.step(frame)
        buffer.append(frame)
        if len(buffer) > delay:
            yield n - delay, buffer.pop(0), iz


class ProductSmoother:
    """Stateful x/y/t smoothing of the five gradient products.

    The temporal recursions start from zero state.  A shared start-up
    attenuation on all five products cancels in the flow solve (both
    the normal equations and the determinant gate are homogeneous in
    the products), so zero priming converges much faster than holding
    the first frame's products, which would lock in values computed
    while the temporal differentiator was still settling."""

    _KEYS = ("xx", "xy", "xz", "yy", "yz")

    def __init__(self, cfg: FlowConfig):
        self.cfg = cfg
        self._pair = cfg.spatial_smoother()
        self._lde = cfg.temporal_smoother()
        self._temporal: dict[str, FrameFilter] | None = None

    def step(self, ix: np.ndarray, iy: np.ndarray, iz: np.ndarray) -> ProductMaps:
        raw = {
            "xx": ix * ix, "xy": ix * iy, "xz": ix * iz,
            "yy": iy * iy, "yz": iy * iz,
        }
        spatial = {}
        for key, plane in raw.items():
            s = filter_image_separable(self._pair, plane, Axis.ROWS)
            spatial[key] = filter_image_separable(self._pair, s, Axis.COLS)
        if self._temporal is None:
            self._temporal = {
                key: FrameFilter(self._lde, plane.shape) for key, plane in raw.items()
            }
        smoothed = {key: self._temporal[key].step(spatial[key]) for key in self._KEYS}
        return ProductMaps(
            jxx=smoothed["xx"], jxy=smoothed["xy"], jxz=smoothed["xz"],
            jyy=smoothed["yy"], jyz=smoothed["yz"],
            raw_xx=raw["xx"], raw_xy=raw["xy"], raw_xz=raw["xz"],
            raw_yy=raw["yy"], raw_yz=raw["yz"],
        )


def smooth_products(
    gradients: Iterable[tuple[np.ndarray, np.ndarray, np.ndarray]], cfg: FlowConfig
) -> Iterator[ProductMaps]:
    """Smooth a stream of (ix, iy, iz) triples; temporal state persists
    across the stream."""
    smoother = ProductSmoother(cfg)
    for ix, iy, iz in gradients:
        yield smoother.step(ix, iy, iz)


def solve_flow(products: ProductMaps, cfg: FlowConfig) -> FlowField:
    """Per-pixel normal-equation solve [vx; vy] = -inv(J) [Jxz; Jyz];
    pixels with det <= threshold * trace^2 or non-positive trace are
    invalid and get zero flow (aperture problem, flat texture)."""
    det = products.jxx * products.jyy - products.jxy**2
    trace = products.jxx + products.jyy
    valid = (det > cfg.det_threshold * trace**2) & (trace > 0.0)
    safe = np.where(valid, det, 1.0)
    vx = -(products.jyy * products.jxz - products.jxy * products.jyz) / safe
    vy = -(products.jxx * products.jyz - products.jxy * products.jxz) / safe
    zero = np.zeros_like(vx)
    return FlowField(
        vx=np.where(valid, vx, zero), vy=np.where(valid, vy, zero), valid=valid
    )


def background_disparity(products: ProductMaps, flow: FlowField) -> np.ndarray:
    """Norm of the raw spatiotemporal products unexplained by the
    estimated flow; zero where the flow is invalid."""
    pred_xz = -(products.raw_xx * flow.vx + products.raw_xy * flow.vy)
    pred_yz = -(products.raw_xy * flow.vx + products.raw_yy * flow.vy)
    dj = np.hypot(products.raw_xz - pred_xz, products.raw_yz - pred_yz)
    return np.where(flow.valid, dj, 0.0)


def process_sequence(
    stream: Iterable[np.ndarray], cfg: FlowConfig | None = None
) -> Iterator[FlowResult]:
    """Run the full pipeline over a frame stream, yielding one result
    per aligned frame.  Results with frame_index inside the warm-up
    span carry warmed_up=False."""
    if cfg is None:
        cfg = FlowConfig()
    smoother = ProductSmoother(cfg)
    settle = cfg.warmup_frames - cfg.frame_delay
    for index, frame, iz in temporal_gradient(stream, cfg):
        ix, iy = spatial_gradients(frame, cfg)
        products = smoother.step(ix, iy, iz)
        field = solve_flow(products, cfg)
        dj = background_disparity(products, field)
        yield FlowResult(
            frame_index=index, warmed_up=index >= settle, flow=field, disparity=dj
        )
