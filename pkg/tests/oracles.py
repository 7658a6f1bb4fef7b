"""Reference computations that share no code with the package under test.

Everything here is built from raw ladder matrices, dense matrix
exponentials, quadrature or exact rational arithmetic.
"""

import math
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm
from scipy.special import eval_laguerre


def ladder(m):
    return np.diag(np.sqrt(np.arange(1, m)), 1).astype(complex)


def displaced_vacuum(alpha, cutoff, build=60):
    """``exp(alpha a^dag - conj(alpha) a)|0>`` at ``build`` levels, first ``cutoff`` entries."""
    a = ladder(build)
    vec = expm(alpha * a.conj().T - np.conj(alpha) * a)[:, 0]
    return vec[:cutoff]


def thermal_population_from_characteristic(mean_photons, n):
    r"""``<n|rho|n>`` from :math:`\chi(\mu) = e^{-(N+1/2)|\mu|^2}`.

    With :math:`\langle n|D(\mu)|n\rangle = e^{-|\mu|^2/2} L_n(|\mu|^2)` the
    inversion integral collapses to one radial quadrature in :math:`t = |\mu|^2`.
    """
    value, _ = quad(lambda t: math.exp(-(mean_photons + 1.0) * t) * eval_laguerre(n, t), 0, np.inf, limit=200)
    return value


@lru_cache(maxsize=8)
def dense_two_mode(kind, parameter, m):
    """Dense ``exp`` of the two-mode generator on ``m x m`` levels, index ``i * m + j``."""
    a = ladder(m)
    eye = np.eye(m)
    sys_a, env_a = np.kron(a, eye), np.kron(eye, a)
    if kind == "beamsplitter":
        theta = math.acos(math.sqrt(parameter))
        gen = theta * (sys_a.conj().T @ env_a - sys_a @ env_a.conj().T)
    else:
        r = math.acosh(math.sqrt(parameter))
        gen = r * (sys_a.conj().T @ env_a.conj().T - sys_a @ env_a)
    return expm(gen)


def dense_channel(kind, parameter, psi, m):
    """System and environment marginals for ``psi (x) |0>`` through the dense unitary."""
    u = dense_two_mode(kind, parameter, m)
    state = np.zeros(m * m, dtype=complex)
    state[np.arange(psi.size) * m] = psi
    out = (u @ state).reshape(m, m)
    return out @ out.conj().T, out.T @ out.conj()


def majorizes_exact(big, small):
    """Exhaustive partial-sum comparison in rational arithmetic."""
    size = max(len(big), len(small))
    b = sorted(big, reverse=True) + [Fraction(0)] * (size - len(big))
    s = sorted(small, reverse=True) + [Fraction(0)] * (size - len(small))
    return all(x >= y for x, y in zip(accumulate(b), accumulate(s)))


def random_unitary(rng, d):
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return expm(1j * (h + h.conj().T) / 2)


def random_density(rng, d, rank=None):
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
