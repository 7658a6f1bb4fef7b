r"""Phase-space calculus for single-mode Gaussian states.

Independent of every Fock-basis routine: states are a quadrature mean and a
2x2 covariance matrix in units where the vacuum covariance is ``I/2``, with
:math:`x = (a + a^\dagger)/\sqrt2` and :math:`p = (a - a^\dagger)/(i\sqrt2)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import AdditiveNoise, Amplifier, ChannelSpec, ThermalAttenuator
from .errors import ParameterError, UnphysicalStateError
from .fock import DensityOperator, Spectrum, annihilation

DET_TOL = 1e-12


@dataclass(frozen=True)
class Coherent:
    alpha: complex


@dataclass(frozen=True)
class Thermal:
    N: float


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Quadrature mean (2,) and covariance (2, 2)."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        if np.max(np.abs(cov - cov.T)) > 1e-12:
            raise UnphysicalStateError("covariance matrix is not symmetric")
        if np.linalg.det(cov) < 0.25 - DET_TOL or cov[0, 0] <= 0:
            raise UnphysicalStateError(f"det cov = {np.linalg.det(cov):.6g} < 1/4")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def symplectic_eigenvalue(self) -> float:
        return math.sqrt(max(np.linalg.det(self.cov), 0.25))

    @property
    def is_isotropic(self) -> bool:
        c = self.cov
        return abs(c[0, 1]) < 1e-12 and abs(c[0, 0] - c[1, 1]) < 1e-12


def gaussian_of(state: Coherent | Thermal) -> GaussianState:
    if isinstance(state, Coherent):
        a = complex(state.alpha)
        return GaussianState([math.sqrt(2) * a.real, math.sqrt(2) * a.imag], 0.5 * np.eye(2))
    if isinstance(state, Thermal):
        if state.N < 0:
            raise ParameterError(f"thermal photon number must be >= 0, got {state.N}")
        return GaussianState(np.zeros(2), (state.N + 0.5) * np.eye(2))
    raise TypeError(f"not a Gaussian input: {state!r}")


def apply_channel_gaussian(channel: ChannelSpec, g: GaussianState) -> GaussianState:
    """Mean and covariance transport through a phase-insensitive channel."""
    if isinstance(channel, ThermalAttenuator):
        scale, added = channel.eta, (1.0 - channel.eta) * (channel.N + 0.5)
    elif isinstance(channel, AdditiveNoise):
        scale, added = 1.0, channel.n
    elif isinstance(channel, Amplifier):
        scale, added = channel.kappa, (channel.kappa - 1.0) * (channel.N + 0.5)
    else:
        raise TypeError(f"unsupported channel {channel!r}")
    return GaussianState(math.sqrt(scale) * g.mean, scale * g.cov + added * np.eye(2))


def _effective_photons(g: GaussianState) -> float:
    det = float(np.linalg.det(g.cov))
    if det < 0.25 - DET_TOL:
        raise UnphysicalStateError(f"det cov = {det:.6g} < 1/4")
    return max(math.sqrt(max(det, 0.25)) - 0.5, 0.0)


def gaussian_entropy(g: GaussianState) -> float:
    """Von Neumann entropy in nats from the symplectic eigenvalue."""
    n = _effective_photons(g)
    if n == 0.0:
        return 0.0
    return (n + 1.0) * math.log(n + 1.0) - n * math.log(n)


def gaussian_spectrum(g: GaussianState, count: int) -> Spectrum:
    """Leading ``count`` eigenvalues; the mean is irrelevant (displacements are unitary).

    Only valid for isotropic covariances, where the state is a displaced thermal state.
    """
    n = _effective_photons(g)
    ratio = n / (n + 1.0)
    values = ratio ** np.arange(count) / (n + 1.0)
    return Spectrum(values, ratio**count)


def moments_from_density(rho: DensityOperator) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature mean and covariance read off a Fock-basis density matrix.

    Entries near the cutoff are distorted by truncation, so the result is
    trustworthy only when the state has negligible weight there.
    """
    a = annihilation(rho.cutoff)
    m = rho.matrix
    ea = np.trace(m @ a)
    eaa = np.trace(m @ a @ a)
    en = np.trace(m @ a.conj().T @ a).real
    mean = np.array([math.sqrt(2) * ea.real, math.sqrt(2) * ea.imag])
    # <x^2> = (<a^2> + <a^dag^2> + 2<a^dag a> + 1)/2, similarly for p and the symmetrized xp.
    xx = (2 * eaa.real + 2 * en + 1) / 2 - mean[0] ** 2
    pp = (-2 * eaa.real + 2 * en + 1) / 2 - mean[1] ** 2
    xp = eaa.imag - mean[0] * mean[1]
    return mean, np.array([[xx, xp], [xp, pp]])
