import math

import numpy as np
import pytest

from fadefilt.design import LdeCoefficients, NonCausalPair
from fadefilt.flow import (
    FlowConfig,
    ProductMaps,
    background_disparity,
    process_sequence,
    smooth_products,
    solve_flow,
    spatial_gradients,
    temporal_gradient,
)
from fadefilt.response import group_delay
from fadefilt.synthetic import translating_plaid


def test_config_defaults():
    cfg = FlowConfig()
    assert cfg.spatial_sigma == -1.0
    assert cfg.temporal_sigma == -1.0
    assert cfg.temporal_q == 4.0
    assert cfg.temporal_kappa == 1
    assert cfg.smoothing_pole == pytest.approx(math.exp(-1 / 16))
    assert cfg.det_threshold == 1e-6
    assert cfg.t_space == 1.0 and cfg.t_time == 1.0
    assert cfg.frame_delay == 4
    assert cfg.warmup_frames == 14


def test_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(spatial_sigma=0.5)
    with pytest.raises(ValueError):
        FlowConfig(temporal_sigma=0.0)
    with pytest.raises(ValueError):
        FlowConfig(smoothing_pole=1.0)
    with pytest.raises(ValueError):
        FlowConfig(smoothing_pole=0.0)


def test_config_as_dict_round_trips():
    cfg = FlowConfig(temporal_q=3.0, det_threshold=1e-5)
    again = FlowConfig(**cfg.as_dict())
    assert again == cfg


def test_filter_constructors():
    cfg = FlowConfig()
    sd = cfg.spatial_differentiator()
    assert isinstance(sd, NonCausalPair)
    assert np.allclose(sd.forward.b, -sd.backward.b)
    td = cfg.temporal_differentiator()
    assert isinstance(td, LdeCoefficients)
    assert float(group_delay(td, 0.01)[0]) == pytest.approx(cfg.temporal_q, abs=0.05)
    sm_s = cfg.spatial_smoother()
    assert sm_s.forward.dc_gain() + sm_s.backward.dc_gain() == pytest.approx(1.0, abs=1e-12)
    sm_t = cfg.temporal_smoother()
    assert sm_t.dc_gain() == pytest.approx(1.0, abs=1e-12)


def test_spatial_gradients_of_linear_ramp():
    cfg = FlowConfig()
    y, x = np.mgrid[0:48, 0:64].astype(float)
    image = 0.2 + 0.004 * x - 0.003 * y
    ix, iy = spatial_gradients(image, cfg)
    # the boundary transient decays like m * p**m into the interior
    interior = (slice(16, -16), slice(16, -16))
    assert np.allclose(ix[interior], 0.004, atol=1e-8)
    assert np.allclose(iy[interior], -0.003, atol=1e-8)


def test_temporal_gradient_alignment_and_slope():
    cfg = FlowConfig()
    rng = np.random.default_rng(9)
    pattern = rng.random((8, 8))
    frames = [0.1 * t * pattern + 0.2 for t in range(30)]
    outputs = list(temporal_gradient(iter(frames), cfg))
    # one output per frame past the delay, tagged with the source index
    assert len(outputs) == 30 - cfg.frame_delay
    idx0, delayed0, _ = outputs[0]
    assert idx0 == 0
    assert np.array_equal(delayed0, frames[0])
    # a per-pixel linear-in-time signal has constant slope; the hold
    # priming transient keeps decaying past the warm-up boundary
    for idx, _, iz in outputs:
        if idx >= cfg.warmup_frames - cfg.frame_delay:
            assert np.allclose(iz, 0.1 * pattern, atol=2e-4)
        if idx >= 22:
            assert np.allclose(iz, 0.1 * pattern, atol=1e-8)


def test_solve_flow_recovers_hand_built_motion():
    shape = (5, 5)
    vx, vy = 0.7, -0.4
    jxx = np.full(shape, 2.0)
    jyy = np.full(shape, 1.5)
    jxy = np.full(shape, 0.3)
    jxz = -(jxx * vx + jxy * vy)
    jyz = -(jxy * vx + jyy * vy)
    products = ProductMaps(
        jxx=jxx, jxy=jxy, jxz=jxz, jyy=jyy, jyz=jyz,
        raw_xx=jxx, raw_xy=jxy, raw_xz=jxz, raw_yy=jyy, raw_yz=jyz,
    )
    field = solve_flow(products, FlowConfig())
    assert field.valid.all()
    assert np.allclose(field.vx, vx, atol=1e-12)
    assert np.allclose(field.vy, vy, atol=1e-12)
    # consistent products leave no disparity
    assert np.allclose(background_disparity(products, field), 0.0, atol=1e-12)


def test_solve_flow_gates_aperture_pixels():
    shape = (4, 4)
    # rank-one structure: gradients all along x
    products = ProductMaps(
        jxx=np.ones(shape), jxy=np.zeros(shape), jxz=np.full(shape, -0.5),
        jyy=np.zeros(shape), jyz=np.zeros(shape),
        raw_xx=np.ones(shape), raw_xy=np.zeros(shape), raw_xz=np.full(shape, -0.5),
        raw_yy=np.zeros(shape), raw_yz=np.zeros(shape),
    )
    field = solve_flow(products, FlowConfig())
    assert not field.valid.any()
    assert np.all(field.vx == 0.0) and np.all(field.vy == 0.0)


def test_smooth_products_stream_shapes():
    cfg = FlowConfig()
    rng = np.random.default_rng(2)
    grads = [
        (rng.random((6, 7)), rng.random((6, 7)), rng.random((6, 7)))
        for _ in range(3)
    ]
    maps = list(smooth_products(iter(grads), cfg))
    assert len(maps) == 3
    assert maps[0].jxx.shape == (6, 7)
    assert maps[2].raw_yz.shape == (6, 7)


def test_process_sequence_on_plaid():
    cfg = FlowConfig()
    velocity = (0.5, -0.25)
    frames = translating_plaid(26, 96, 96, velocity)
    results = list(process_sequence(frames, cfg))
    assert len(results) == 26 - cfg.frame_delay
    assert [r.frame_index for r in results] == list(range(len(results)))
    settle = cfg.warmup_frames - cfg.frame_delay
    assert all(not r.warmed_up for r in results[:settle])
    assert all(r.warmed_up for r in results[settle:])
    last = results[-1]
    sl = (slice(16, -16), slice(16, -16))
    err = np.hypot(last.flow.vx[sl] - velocity[0], last.flow.vy[sl] - velocity[1])
    assert np.median(err[last.flow.valid[sl]]) < 0.1 * math.hypot(*velocity)
    assert last.disparity.shape == frames[0].shape


def test_process_sequence_is_deterministic():
    frames = translating_plaid(18, 32, 32, (0.25, 0.0))
    first = list(process_sequence(frames))
    second = list(process_sequence(frames))
    for r1, r2 in zip(first, second):
        assert np.array_equal(r1.flow.vx, r2.flow.vx)
        assert np.array_equal(r1.disparity, r2.disparity)


def test_short_stream_yields_nothing():
    cfg = FlowConfig()
    frames = translating_plaid(cfg.frame_delay, 16, 16, (0.1, 0.0))
    assert list(process_sequence(frames, cfg)) == []
