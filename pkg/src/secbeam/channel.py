"""Far-field geometry, channel vectors and SINR evaluation."""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometry, InvalidInput, InvalidParameters
from .numerics import as_hermitian, psd_check

SPEED_OF_LIGHT = 3e8
TWO_PI = 2.0 * np.pi


def _interval(iv, name):
    lo, hi = (float(v) for v in iv)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise InvalidParameters(f"{name}: non-finite endpoint")
    if hi < lo or hi - lo > TWO_PI:
        raise InvalidParameters(f"{name}: need lo <= hi and hi - lo <= 2*pi, got {iv}")
    return (lo, hi)


def _interiors_overlap(a, b):
    """Whether the open arcs (a0, a1) and (b0, b1) intersect on the circle."""
    for k in (-2, -1, 0, 1, 2):
        lo = max(a[0], b[0] + k * TWO_PI)
        hi = min(a[1], b[1] + k * TWO_PI)
        if lo < hi:
            return True
    return False


def in_interval(theta, iv):
    """Whether ``theta`` lies on the closed arc from iv[0] counterclockwise to iv[1]."""
    off = np.mod(theta - iv[0], TWO_PI)
    length = iv[1] - iv[0]
    return bool(off <= length or np.isclose(off, TWO_PI) or length >= TWO_PI)


@dataclass(frozen=True)
class EnvironmentSpec:
    """Agents, client, adversary direction intervals and link parameters.

    Intervals are closed arcs ``(lo, hi)`` traversed counterclockwise, with
    ``lo <= hi`` and ``hi - lo <= 2*pi``; endpoints may exceed pi so arcs that
    wrap through the negative x-axis stay contiguous, e.g. ``(4pi/6, 7pi/6)``.
    """

    agent_positions: np.ndarray
    client_direction: float
    adversary_intervals: tuple
    adversary_free_interval: tuple
    carrier_frequency: float
    receiver_radius: float
    power_cap: float
    gamma_c: float
    gamma_a: float
    noise_power: float
    K: int = 1
    propagation_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        pos = np.asarray(self.agent_positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise InvalidParameters("agent_positions must be an (m, 2) array")
        if not np.all(np.isfinite(pos)):
            raise InvalidParameters("agent positions must be finite")
        pos.setflags(write=False)
        object.__setattr__(self, "agent_positions", pos)
        ivs = tuple(_interval(iv, f"adversary interval {i + 1}")
                    for i, iv in enumerate(self.adversary_intervals))
        object.__setattr__(self, "adversary_intervals", ivs)
        i0 = _interval(self.adversary_free_interval, "adversary-free interval")
        object.__setattr__(self, "adversary_free_interval", i0)

        if not self.gamma_c > self.gamma_a > 0:
            raise InvalidParameters("need gamma_c > gamma_a > 0")
        for name in ("power_cap", "noise_power", "carrier_frequency", "propagation_speed"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InvalidParameters(f"{name} must be positive")
        if int(self.K) != self.K or self.K < 1:
            raise InvalidParameters("K must be a positive integer")
        if not -np.pi <= self.client_direction < np.pi:
            raise InvalidParameters("client direction must lie in [-pi, pi)")
        if not in_interval(self.client_direction, i0):
            raise InvalidParameters("client direction must lie in the adversary-free interval")
        for i, iv in enumerate(ivs):
            if _interiors_overlap(iv, i0):
                raise InvalidParameters(f"adversary interval {i + 1} overlaps the adversary-free interval")
        if not self.receiver_radius > np.max(np.hypot(pos[:, 0], pos[:, 1])):
            raise InvalidGeometry("receiver radius must exceed every agent's distance from the origin")

    @property
    def m(self):
        return self.agent_positions.shape[0]

    @property
    def L(self):
        return len(self.adversary_intervals)

    @property
    def N(self):
        return max(self.L, 1) * self.K

    @property
    def wavelength(self):
        return self.propagation_speed / self.carrier_frequency


def random_disk_positions(m, radius, rng):
    """``m`` points uniform over a disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(size=m))
    phi = rng.uniform(-np.pi, np.pi, size=m)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


def channel_matrix(env, thetas):
    """Rows h(theta)^T for every direction in ``thetas``; shape (len(thetas), m)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    pos = env.agent_positions
    if env.receiver_radius <= np.max(np.hypot(pos[:, 0], pos[:, 1])):
        raise InvalidGeometry("receiver inside the agent disk")
    rx = env.receiver_radius * np.column_stack([np.cos(thetas), np.sin(thetas)])
    d = np.linalg.norm(rx[:, None, :] - pos[None, :, :], axis=2)
    # reduce the path length modulo one wavelength before forming the phase
    frac = np.mod(d / env.wavelength, 1.0)
    return np.exp(-1j * TWO_PI * frac)


def channel_vector(env, theta):
    """Unit-modulus channel gains h(theta) from every agent to direction ``theta``."""
    return channel_matrix(env, [theta])[0]


def sinr(w, sigma, h, noise_power):
    """|h^H w|^2 / (h^H Sigma h + noise_power)."""
    if not noise_power > 0:
        raise InvalidInput("noise power must be positive")
    sigma = as_hermitian(sigma)
    if not psd_check(sigma, 1e-9):
        raise InvalidInput("artificial-noise covariance is not PSD")
    return float(_sinr_rows(np.asarray(w, dtype=complex), sigma, np.atleast_2d(h), noise_power)[0])


def _sinr_rows(w, sigma, hs, noise_power):
    # row r of hs is h(theta_r)^T; h^H w = conj(h) . w
    sig = np.abs(hs.conj() @ w) ** 2
    interf = np.real(np.einsum("ri,ij,rj->r", hs.conj(), sigma, hs))
    return sig / (np.maximum(interf, 0.0) + noise_power)


@dataclass
class TransmitStep:
    """Beamforming gains ``w`` and artificial-noise covariance ``sigma`` for one time step."""

    w: np.ndarray
    sigma: np.ndarray = field(default=None)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=complex).ravel()
        if self.sigma is None:
            self.sigma = np.zeros((self.w.size, self.w.size), dtype=complex)
        self.sigma = as_hermitian(self.sigma)
        if self.sigma.shape != (self.w.size, self.w.size):
            raise InvalidInput("sigma must be m x m")

    def agent_power(self):
        return np.abs(self.w) ** 2 + self.sigma.diagonal().real

    def check(self, power_cap, tol=1e-7):
        """Whether sigma is PSD and every agent respects ``power_cap`` (relative tol)."""
        ok_psd = psd_check(self.sigma, tol)
        ok_pow = bool(np.all(self.agent_power() <= power_cap * (1.0 + tol)))
        return ok_psd and ok_pow

    @classmethod
    def zero(cls, m):
        return cls(np.zeros(m, dtype=complex))


def direction_grid(interval, n=10_000):
    """Uniform closed-endpoint grid on an interval."""
    lo, hi = interval
    if n < 1:
        raise InvalidInput("grid needs at least one point")
    return np.linspace(lo, hi, n) if n > 1 else np.array([float(lo)])


def sinr_over(env, step, thetas):
    """SINR of ``step`` at every direction in ``thetas`` (vectorized)."""
    if not psd_check(step.sigma, 1e-9):
        raise InvalidInput("artificial-noise covariance is not PSD")
    return _sinr_rows(step.w, step.sigma, channel_matrix(env, thetas), env.noise_power)


def beampattern(env, step, grid):
    """List of ``(theta, SINR)`` pairs over a strictly increasing grid."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise InvalidInput("empty grid")
    if np.any(np.diff(grid) <= 0):
        raise InvalidInput("grid must be strictly increasing")
    return list(zip(grid.tolist(), sinr_over(env, step, grid).tolist()))
