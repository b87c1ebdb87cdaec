import numpy as np
import pytest

from gradsamp.core import Objective, SampleOutsideDomainError
from gradsamp.sampling import (
    LANE_CLOUD,
    LANE_PERTURB,
    RngStream,
    build_cloud,
    sample_uniform_ball,
)


class _Abs1D(Objective):
    def dim(self):
        return 1

    def eval(self, x):
        return abs(float(x[0]))

    def grad(self, x):
        return np.array([np.sign(x[0])])

    def in_smooth_set(self, x):
        return x[0] != 0.0


class _FatKink(Objective):
    """Nondifferentiable on [0, width]: a positive-measure trap for samplers."""

    def __init__(self, width):
        self.width = width

    def dim(self):
        return 1

    def eval(self, x):
        return abs(float(x[0]))

    def grad(self, x):
        return np.array([np.sign(x[0])])

    def in_smooth_set(self, x):
        return not (0.0 <= x[0] <= self.width)


def test_identical_streams_are_bitwise_identical():
    a = sample_uniform_ball(np.zeros(3), 1.0, 50, RngStream(42, 7))
    b = sample_uniform_ball(np.zeros(3), 1.0, 50, RngStream(42, 7))
    assert np.array_equal(a, b)


def test_different_stream_ids_decorrelate():
    a = sample_uniform_ball(np.zeros(3), 1.0, 50, RngStream(42, 7))
    b = sample_uniform_ball(np.zeros(3), 1.0, 50, RngStream(42, 8))
    assert not np.array_equal(a, b)


def test_lanes_within_one_stream_differ():
    s = RngStream(42, 7)
    a = sample_uniform_ball(np.zeros(3), 1.0, 50, s, lane=LANE_CLOUD)
    b = sample_uniform_ball(np.zeros(3), 1.0, 50, s, lane=LANE_PERTURB)
    assert not np.array_equal(a, b)


def test_zero_radius_returns_center():
    center = np.array([1.5, -2.0])
    pts = sample_uniform_ball(center, 0.0, 10, RngStream(0, 0))
    assert np.array_equal(pts, np.tile(center, (10, 1)))


def test_containment_over_many_draws():
    center = np.array([0.5, -1.0, 2.0])
    pts = sample_uniform_ball(center, 0.35, 1_000_000, RngStream(9, 0))
    assert pts.shape == (1_000_000, 3)
    assert np.all(np.linalg.norm(pts - center, axis=1) <= 0.35)


def test_mean_radius_matches_ball_law():
    # E||Y|| = r * n/(n+1) for the uniform n-ball.
    pts = sample_uniform_ball(np.zeros(3), 1.0, 100_000, RngStream(11, 0))
    mean = np.linalg.norm(pts, axis=1).mean()
    assert mean == pytest.approx(0.75, rel=0.02)


def test_radial_cdf_matches_power_law():
    from scipy.stats import kstest

    for n in (1, 2, 3, 5):
        pts = sample_uniform_ball(np.zeros(n), 1.0, 100_000, RngStream(13, n))
        radii = np.linalg.norm(pts, axis=1)
        ks = kstest(radii, lambda u: np.clip(u, 0.0, 1.0) ** n).statistic
        assert ks <= 0.01


def test_rejects_negative_radius_and_count():
    with pytest.raises(ValueError):
        sample_uniform_ball(np.zeros(2), -1.0, 1, RngStream(0, 0))
    with pytest.raises(ValueError):
        sample_uniform_ball(np.zeros(2), 1.0, -1, RngStream(0, 0))


def test_cloud_center_gradient_comes_first():
    f = _Abs1D()
    cloud = build_cloud(f, np.array([0.5]), 0.1, 6, RngStream(1, 0))
    assert cloud.gradients.shape == (7, 1)
    assert cloud.sample_points.shape == (6, 1)
    assert np.all(cloud.gradients == 1.0)  # sign is +1 on (0.4, 0.6)
    assert np.all(np.abs(cloud.sample_points - 0.5) <= 0.1)


def test_cloud_at_kink_sees_both_signs():
    f = _Abs1D()
    cloud = build_cloud(f, np.array([1e-9]), 0.1, 30, RngStream(2, 0))
    signs = np.unique(cloud.gradients[1:])
    assert set(signs) == {-1.0, 1.0}


def test_cloud_requires_smooth_center():
    with pytest.raises(ValueError, match="smooth set"):
        build_cloud(_Abs1D(), np.array([0.0]), 0.1, 4, RngStream(0, 0))


def test_strict_mode_raises_on_bad_sample():
    # Half the sampling interval is nondifferentiable, so 12 draws miss the
    # smooth set with probability about 1 - 2^-12.
    f = _FatKink(0.1)
    with pytest.raises(SampleOutsideDomainError):
        build_cloud(f, np.array([-1e-6]), 0.1, 12, RngStream(3, 0))


def test_resample_mode_redraws_bad_samples():
    f = _FatKink(0.1)
    cloud = build_cloud(
        f, np.array([-1e-6]), 0.1, 12, RngStream(3, 0), resample_outside_domain=True
    )
    assert all(f.in_smooth_set(p) for p in cloud.sample_points)
    assert cloud.gradients.shape == (13, 1)


def test_resample_mode_gives_up_when_trapped():
    # Smooth set contains only the center itself; every redraw must fail
    # and the attempt cap must trip.
    class OnlyCenter(Objective):
        def dim(self):
            return 1

        def eval(self, x):
            return 0.0

        def grad(self, x):
            return np.zeros(1)

        def in_smooth_set(self, x):
            return x[0] == 0.25

    with pytest.raises(SampleOutsideDomainError):
        build_cloud(
            OnlyCenter(),
            np.array([0.25]),
            1.0,
            4,
            RngStream(4, 0),
            resample_outside_domain=True,
            max_resample_attempts=50,
        )


def test_cloud_determinism():
    f = _Abs1D()
    a = build_cloud(f, np.array([0.5]), 0.1, 6, RngStream(5, 3))
    b = build_cloud(f, np.array([0.5]), 0.1, 6, RngStream(5, 3))
    assert np.array_equal(a.sample_points, b.sample_points)
    assert np.array_equal(a.gradients, b.gradients)
