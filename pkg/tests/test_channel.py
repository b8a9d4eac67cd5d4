import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secbeam.channel import (EnvironmentSpec, TransmitStep, beampattern, channel_matrix,
                             channel_vector, direction_grid, in_interval, sinr)
from secbeam.errors import InvalidGeometry, InvalidInput, InvalidParameters

PI = np.pi


def make_env(positions, R=300.0, fc=40e6, **kw):
    base = dict(client_direction=0.0, adversary_intervals=((PI / 6, 4 * PI / 6),),
                adversary_free_interval=(-PI / 6, PI / 6), carrier_frequency=fc,
                receiver_radius=R, power_cap=1.0, gamma_c=10.0, gamma_a=1.0, noise_power=1.0)
    base.update(kw)
    return EnvironmentSpec(agent_positions=np.atleast_2d(positions), **base)


def test_wavelength():
    assert make_env([[0, 0]]).wavelength == 7.5


@pytest.mark.parametrize("theta", [-PI, -1.0, 0.0, 0.3, 2.5])
def test_origin_agent_integer_wavelengths(theta):
    env = make_env([[0, 0]])
    assert channel_vector(env, theta)[0] == pytest.approx(1 + 0j, abs=1e-12)


def test_origin_agent_radius_one_wavelength():
    env = make_env([[0, 0]], R=7.5)
    assert channel_vector(env, 1.2)[0] == pytest.approx(1 + 0j, abs=1e-12)


def test_half_wavelength_offset():
    lam = 7.5
    env = make_env([[lam / 2, 0]], R=10 * lam)
    assert channel_vector(env, 0.0)[0] == pytest.approx(-1 + 0j, abs=1e-12)


def test_receiver_inside_disk():
    with pytest.raises(InvalidGeometry):
        make_env([[0, 0], [301, 0]])


def test_invariant_violations():
    with pytest.raises(InvalidParameters):
        make_env([[0, 0]], gamma_a=10.0)
    with pytest.raises(InvalidParameters):
        make_env([[0, 0]], client_direction=1.0)
    with pytest.raises(InvalidParameters):
        make_env([[0, 0]], adversary_intervals=((0.0, 1.0),))
    with pytest.raises(InvalidParameters):
        make_env([[0, 0]], noise_power=0.0)


def test_wrapping_intervals_accepted():
    env = make_env([[0, 0]], adversary_intervals=((4 * PI / 6, 7 * PI / 6), (7 * PI / 6, 11 * PI / 6)))
    assert env.L == 2
    assert in_interval(-PI + 0.1, env.adversary_intervals[0])
    assert not in_interval(0.0, env.adversary_intervals[1])


def test_sinr_examples():
    assert sinr(np.zeros(2), np.zeros((2, 2)), np.ones(2), 1.0) == 0
    assert sinr(np.array([2.0]), np.zeros((1, 1)), np.array([1.0]), 1.0) == pytest.approx(4)
    assert sinr(np.ones(2), np.eye(2), np.ones(2), 1.0) == pytest.approx(4 / 3)


def test_sinr_rejects_indefinite_noise():
    with pytest.raises(InvalidInput):
        sinr(np.ones(2), np.diag([1.0, -1.0]), np.ones(2), 1.0)


def _rand(rng, m):
    w = rng.normal(size=m) + 1j * rng.normal(size=m)
    a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    h = np.exp(1j * rng.uniform(0, 2 * PI, size=m))
    return w, a @ a.conj().T, h


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.floats(0, 2 * PI), st.floats(0.01, 5))
def test_sinr_properties(seed, m, phi, beta):
    w, S, h = _rand(np.random.default_rng(seed), m)
    zero = np.zeros((m, m))
    assert sinr(2 * w, zero, h, 1.0) == pytest.approx(4 * sinr(w, zero, h, 1.0), rel=1e-12)
    assert sinr(np.exp(1j * phi) * w, S, h, 1.0) == pytest.approx(sinr(w, S, h, 1.0), rel=1e-12)
    if abs(h.conj() @ w) > 1e-6:
        assert sinr(w, S + beta * np.eye(m), h, 1.0) < sinr(w, S, h, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_unit_modulus(seed):
    rng = np.random.default_rng(seed)
    env = make_env(rng.uniform(-50, 50, size=(5, 2)))
    H = channel_matrix(env, rng.uniform(-PI, PI, size=20))
    np.testing.assert_allclose(np.abs(H), 1.0, atol=1e-12)


def test_beampattern_examples():
    env = make_env([[0, 0], [10, 5]])
    rows = beampattern(env, TransmitStep.zero(2), np.linspace(-1, 1, 7))
    assert [v for _, v in rows] == [0.0] * 7
    step = TransmitStep(np.array([0.3, 0.2j]), 0.1 * np.eye(2))
    ((theta, val),) = beampattern(env, step, [0.0])
    assert theta == 0.0
    assert val == pytest.approx(sinr(step.w, step.sigma, channel_vector(env, 0.0), 1.0))
    with pytest.raises(InvalidInput):
        beampattern(env, step, [0.2, 0.1])
    with pytest.raises(InvalidInput):
        beampattern(env, step, [])


def test_direction_grid_closed():
    g = direction_grid((0.0, 1.0), 5)
    assert g[0] == 0.0 and g[-1] == 1.0 and g.size == 5


def test_transmit_step_power():
    # 0.25 + 0.75 sits exactly on the cap
    assert TransmitStep(np.array([0.5, 0.5]), np.diag([0.75, 0.7])).check(1.0)
    assert not TransmitStep(np.array([0.5, 0.5]), np.diag([0.75, 0.8])).check(1.0)
    assert not TransmitStep(np.array([0.5, 0]), np.diag([0.5, -0.1])).check(1.0)
