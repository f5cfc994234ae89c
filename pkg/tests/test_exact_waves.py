import math

import numpy as np
import pytest
from scipy.integrate import quad

from gardner_ostrovsky.analysis import holder_fit, singular_levels
from gardner_ostrovsky.exact_waves import (
    MODIFIED_SPEED,
    REDUCED_SPEED,
    ExactWave,
    OdeState,
    energy_rate,
    hamiltonian,
    modified_peak,
    ode_flow,
    reduced_ostrovsky_peak,
    vector_field,
    verify_exact,
)
from gardner_ostrovsky.model import F_eval, ModelParams

ODE_PARAMS = ModelParams.gardner(1.0, 1.0, 0.0)


@pytest.mark.parametrize("family,param", [("reduced", 1.0), ("reduced", -1.0), ("reduced", 4.0), ("modified", 0.5), ("modified", 4.0)])
def test_corrected_forms_solve_the_equation(family, param):
    w = ExactWave(family, param)
    assert verify_exact(w, 4096) <= 1e-4
    assert verify_exact(ExactWave(family, param, printed=True), 4096) >= 1e-2


def test_residual_is_second_order_in_grid_spacing():
    w = ExactWave("reduced", 1.0)
    r1, r2 = verify_exact(w, 1024), verify_exact(w, 2048)
    assert 3 < r1 / r2 < 5


def test_wrong_speed_fails():
    assert verify_exact(ExactWave("reduced", 1.0), 4096, c=1.0) > 1e-2


def test_validation():
    with pytest.raises(ValueError):
        ExactWave("other")
    with pytest.raises(ValueError):
        ExactWave("modified", -1.0)
    with pytest.raises(ValueError):
        verify_exact(ExactWave("reduced"), 512)


def test_crest_sits_on_singular_level():
    x = np.linspace(-np.pi, np.pi, 1001)
    for sigma in (1.0, 4.0):
        w = ExactWave("reduced", sigma)
        top = reduced_ostrovsky_peak(sigma, 0.0)
        assert top == pytest.approx(singular_levels(w.params, REDUCED_SPEED).phi_plus, abs=1e-12)
        assert F_eval(w.params, REDUCED_SPEED, top, 1) == pytest.approx(0, abs=1e-12)
        assert np.allclose(reduced_ostrovsky_peak(sigma, x), reduced_ostrovsky_peak(sigma, -x), atol=0)
    w = ExactWave("modified", 2.0)
    top = modified_peak(2.0, 0.0)
    assert top == pytest.approx(singular_levels(w.params, MODIFIED_SPEED).phi_plus, abs=1e-12)
    assert F_eval(w.params, MODIFIED_SPEED, top, 1) == pytest.approx(0, abs=1e-12)


def test_zero_mean():
    for w in (ExactWave("reduced", 1.0), ExactWave("modified", 1.0)):
        assert abs(quad(w, -np.pi, np.pi, points=[0.0])[0]) < 1e-12
    for w in (ExactWave("reduced", 1.0, printed=True), ExactWave("modified", 1.0, printed=True)):
        assert abs(quad(w, -np.pi, np.pi, points=[0.0])[0]) > 0.1


def test_one_sided_slopes_and_holder_fit():
    h = 1e-7
    assert (reduced_ostrovsky_peak(1.0, 0.0) - reduced_ostrovsky_peak(1.0, h)) / h == pytest.approx(math.pi / 3, rel=1e-6)
    expo, const = holder_fit(ExactWave("reduced", 1.0).profile(4096), 0.0)
    assert expo == pytest.approx(1.0, abs=0.05)
    assert const == pytest.approx(math.pi / 3, rel=0.02)


def test_energy_rate_vanishes_identically():
    rng = np.random.default_rng(0)
    states = rng.uniform(-5, 5, size=(10**6, 4))
    for params in (ODE_PARAMS, ModelParams.gardner(0.3, -2.0, 1.5)):
        rate, scale = energy_rate(params, 1.3, states)
        assert np.max(np.abs(rate) / scale) <= 1e-10
        # chain-rule form: phi'' - (c phi - n(phi) + v)/beta is zero by construction
        f = vector_field(params, 1.3, states)
        phi, dphi, v = states[:, 0], states[:, 1], states[:, 2]
        chain = (f[:, 1] - (1.3 * phi - params.poly(phi) + v) / params.beta) * dphi
        assert np.max(np.abs(chain) / scale) <= 1e-10


def test_hamiltonian_scalar_and_vector():
    s = OdeState(0.1, 0.2, -0.3, 0.4)
    e = hamiltonian(ODE_PARAMS, 1.0, s)
    assert isinstance(e, float)
    assert hamiltonian(ODE_PARAMS, 1.0, np.array([s.as_array()] * 3)) == pytest.approx([e] * 3)
    with pytest.raises(ValueError):
        hamiltonian(ModelParams.gardner(0.0), 1.0, s)


def test_equilibrium_stays_put():
    tr = ode_flow(ODE_PARAMS, 1.0, OdeState(0, 0, 0, 0), (0, 10), 1e-2)
    assert not tr.blew_up and np.all(tr.states == 0)


def test_blow_up_is_flagged():
    tr = ode_flow(ODE_PARAMS, 1.0, [-50.0, -50.0, 0.0, 0.0], (0, 10), 1e-2)
    assert tr.blew_up and np.all(np.isfinite(tr.states))
    with pytest.raises(ValueError):
        OdeState(np.nan, 0, 0, 0)


def test_energy_drift_is_small_and_fourth_order():
    y0 = [0.3, -0.2, 0.1, 0.05]
    drift = []
    for h in (0.01, 0.005, 0.0025):
        tr = ode_flow(ODE_PARAMS, 1.0, y0, (0, 10), h)
        e = hamiltonian(ODE_PARAMS, 1.0, tr.states)
        drift.append(np.max(np.abs(e - e[0])) / max(1, abs(e[0])))
    order = np.polyfit(np.log([0.01, 0.005, 0.0025]), np.log(drift), 1)[0]
    assert 3 <= order <= 5
