import numpy as np
import pytest

from gardner_ostrovsky.evolution import (
    EvolutionConfig,
    evolve,
    phase_velocity,
    stability_ceiling,
    traveling_error,
)
from gardner_ostrovsky.fourier import TorusGrid, WaveProfile
from gardner_ostrovsky.model import ModelParams, dispersion

P = ModelParams.gardner(0.25, 1.0, 0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(0.0, 1.0, P)
    with pytest.raises(ValueError):
        EvolutionConfig(0.1, -1.0, P)
    with pytest.raises(ValueError):
        EvolutionConfig(0.1, 1.0, P, record_every=0)


def test_zero_data_stays_zero():
    u0 = WaveProfile(TorusGrid(32), np.zeros(32))
    res = evolve(u0, EvolutionConfig(0.01, 1.0, P, record_every=10))
    assert len(res.snapshots) == 11 and res.times[-1] == pytest.approx(1.0)
    assert all(s.sup() == 0 for s in res.snapshots) and not res.breaking


def test_rejects_nonzero_mean_and_large_step():
    g = TorusGrid(32)
    with pytest.raises(ValueError):
        evolve(WaveProfile(g, np.ones(32)), EvolutionConfig(0.01, 1.0, P))
    u0 = WaveProfile.from_function(g, lambda x: 2 * np.cos(x))
    ceiling = stability_ceiling(P, u0)
    assert ceiling == pytest.approx(0.5 * g.spacing / 2.0)
    with pytest.raises(ValueError):
        evolve(u0, EvolutionConfig(2 * ceiling, 1.0, P))


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
def test_linear_phase_velocity(k):
    w, cp, _ = dispersion(P, k)
    T = min(1.0, 2.0 / abs(w))
    assert phase_velocity(P, 64, k, T) == pytest.approx(cp, abs=1e-8)


def test_linear_flow_conserves_energy():
    g = TorusGrid(64)
    rng = np.random.default_rng(1)
    rc = np.zeros(33, dtype=complex)
    rc[1:20] = rng.standard_normal(19) + 1j * rng.standard_normal(19)
    u0 = WaveProfile.from_rcoeffs(g, rc)
    res = evolve(u0, EvolutionConfig(0.01, 3.0, P, record_every=50, linear=True))
    e0 = np.sum(np.abs(u0.rcoeffs) ** 2)
    for s in res.snapshots:
        assert abs(np.sum(np.abs(s.rcoeffs) ** 2) - e0) <= 1e-12 * e0


def test_nonlinear_flow_keeps_zero_mean():
    u0 = WaveProfile.from_function(TorusGrid(64), lambda x: 0.5 * np.cos(x) + 0.2 * np.sin(3 * x))
    res = evolve(u0, EvolutionConfig(0.005, 1.0, P, record_every=20))
    assert all(s.mean == 0.0 or abs(s.mean) < 1e-16 for s in res.snapshots)


def test_traveling_wave_translates(smooth_branch):
    pt = smooth_branch.points[len(smooth_branch.points) // 2]
    cfg = EvolutionConfig(2e-3, 1.0, P)
    assert traveling_error(pt, 1.0, cfg) <= 1e-6
    assert traveling_error(pt, 0.0, cfg) == 0.0


def test_time_error_is_fourth_order(smooth_branch):
    pt = smooth_branch.terminal
    errs = [traveling_error(pt, 1.0, EvolutionConfig(dt, 1.0, P)) for dt in (8e-3, 4e-3)]
    assert 8 <= errs[0] / errs[1] <= 32


def test_breaking_is_flagged():
    p0 = ModelParams.gardner(0.0, 1.0, 0.0)
    u0 = WaveProfile.from_function(TorusGrid(64), np.cos)
    res = evolve(u0, EvolutionConfig(1e-3, 10.0, p0, record_every=100, breaking_factor=10))
    assert res.breaking and res.times[-1] < 2.0
    assert res.grad_sup > 10
