r"""Two-mode unitary dilations, complementary channels and phase conjugation.

The dilation unitaries are obtained by exponentiating their generators,
independently of the closed-form Kraus ladders in :mod:`gaussmaj.channels`,
so they serve as ground truth for those ladders.

Both unitaries conserve a photon-number combination, which splits them into
blocks: the beamsplitter conserves :math:`a^\dagger a + a_E^\dagger a_E`
(finite blocks, exponentiated exactly) and the two-mode squeezer conserves
:math:`a^\dagger a - a_E^\dagger a_E` (infinite blocks, exponentiated at an
enlarged cutoff and projected back). Two-mode pure states are stored as
``W x W`` coefficient matrices ``psi[m, n]`` (system level ``m``,
environment level ``n``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .channels import Amplifier, ChannelSpec, ThermalAttenuator, apply_channel
from .errors import CutoffError, ParameterError
from .fock import LEAK_TOL, DensityOperator, PureState, cutoff_heuristic, mean_photon_number

ENV_TAIL_TOL = 1e-10
GROW_FACTOR = 1.5
GROW_ATTEMPTS = 4


def build_margin(cutoff: int) -> int:
    return int(math.ceil(4.0 * math.sqrt(cutoff) + 10.0))


@dataclass(frozen=True, eq=False)
class TwoModeUnitary:
    """Block-diagonal two-mode unitary restricted to levels ``m, n < cutoff``.

    ``blocks`` holds ``(rows, cols, U_b)`` triples: the block unitary ``U_b``
    acts on the coefficients ``psi[rows, cols]``.
    """

    kind: str
    parameter: float
    cutoff: int
    build_cutoff: int
    blocks: tuple

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi, dtype=complex)
        for rows, cols, block in self.blocks:
            out[rows, cols] = block @ psi[rows, cols]
        return out

    @property
    def matrix(self) -> np.ndarray:
        """Dense ``(W^2, W^2)`` matrix in the ``system (x) environment`` product basis."""
        w = self.cutoff
        dense = np.zeros((w * w, w * w), dtype=complex)
        for rows, cols, block in self.blocks:
            flat = rows * w + cols
            dense[np.ix_(flat, flat)] = block
        return dense

    def unitarity_defect(self, max_total: int) -> float:
        """Max-entry defect of ``U^dag U - I`` on states with ``m + n <= max_total``."""
        worst = 0.0
        for rows, cols, block in self.blocks:
            keep = rows + cols <= max_total
            if not np.any(keep):
                continue
            if self.kind == "beamsplitter":
                # Blocks never leave the subspace of fixed total photon number.
                if not np.all(keep):
                    continue
                gram = block.conj().T @ block
            else:
                gram = (block.conj().T @ block)[np.ix_(keep, keep)]
            worst = max(worst, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
        return worst


@lru_cache(maxsize=32)
def beamsplitter_unitary(eta: float, cutoff: int) -> TwoModeUnitary:
    r"""Beamsplitter :math:`\exp[\theta(a^\dagger a_E - a a_E^\dagger)]` with :math:`\cos^2\theta = \eta`.

    Each fixed-total-photon block is finite, so it is exponentiated in full
    (equivalent to building at cutoff ``2W - 1``) and then restricted.
    """
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"transmissivity must lie in (0, 1), got {eta}")
    theta = math.acos(math.sqrt(eta))
    blocks = []
    for total in range(2 * cutoff - 1):
        m = np.arange(total + 1)
        hop = theta * np.sqrt((m[:-1] + 1.0) * (total - m[:-1]))
        gen = np.diag(hop, -1) - np.diag(hop, 1)
        full = expm(gen)
        keep = (m < cutoff) & (total - m < cutoff)
        blocks.append((m[keep], total - m[keep], full[np.ix_(keep, keep)]))
    return TwoModeUnitary("beamsplitter", eta, cutoff, 2 * cutoff - 1, tuple(blocks))


@lru_cache(maxsize=32)
def two_mode_squeezer(kappa: float, cutoff: int) -> TwoModeUnitary:
    r"""Two-mode squeezer :math:`\exp[r(a^\dagger a_E^\dagger - a a_E)]` with :math:`\cosh^2 r = \kappa`."""
    if not kappa > 1.0:
        raise ParameterError(f"gain must be > 1, got {kappa}")
    r = math.acosh(math.sqrt(kappa))
    build = cutoff + build_margin(cutoff)
    blocks = []
    for diff in range(-(cutoff - 1), cutoff):
        shift = abs(diff)
        j = np.arange(build - shift)
        hop = r * np.sqrt((j[:-1] + shift + 1.0) * (j[:-1] + 1.0))
        gen = np.diag(hop, -1) - np.diag(hop, 1)
        keep = cutoff - shift
        block = expm(gen)[:keep, :keep]
        jj = j[:keep]
        rows, cols = (jj + shift, jj) if diff >= 0 else (jj, jj + shift)
        blocks.append((rows, cols, block))
    return TwoModeUnitary("squeezer", kappa, cutoff, build, tuple(blocks))


def _env_populations(env_n: float) -> np.ndarray:
    if env_n == 0:
        return np.array([1.0])
    ratio = env_n / (env_n + 1.0)
    count = int(math.ceil(math.log(ENV_TAIL_TOL) / math.log(ratio)))
    return ratio ** np.arange(count) / (env_n + 1.0)


def _default_cutoff(channel: ChannelSpec, mean_in: float, env_n: float) -> int:
    if isinstance(channel, ThermalAttenuator):
        eta = channel.eta
        means = (eta * mean_in + (1 - eta) * env_n, (1 - eta) * mean_in + eta * env_n)
    else:
        k = channel.kappa
        means = (k * mean_in + (k - 1) * (env_n + 1), (k - 1) * (mean_in + 1) + k * env_n)
    return cutoff_heuristic(max(means))


def dilation_unitary(channel: ChannelSpec, cutoff: int) -> TwoModeUnitary:
    if isinstance(channel, ThermalAttenuator):
        return beamsplitter_unitary(float(channel.eta), cutoff)
    if isinstance(channel, Amplifier):
        return two_mode_squeezer(float(channel.kappa), cutoff)
    raise ParameterError(f"no two-mode dilation for {channel}")


def dilation_outputs(
    channel: ChannelSpec,
    psi: PureState,
    env_n: float | None = None,
    cutoff: int | None = None,
    leak_tol: float = LEAK_TOL,
) -> tuple[DensityOperator, DensityOperator]:
    """System and environment marginals of ``U (psi (x) rho_E) U^dag``.

    ``channel`` selects the unitary (beamsplitter for an attenuator, two-mode
    squeezer for an amplifier); the environment is thermal with mean
    ``env_n`` (default ``channel.N``), unravelled into Fock levels whose
    neglected tail is below ``ENV_TAIL_TOL``.

    Without an explicit ``cutoff`` the working cutoff starts at the
    heuristic for the larger of the two output mean photon numbers and grows
    by ``GROW_FACTOR`` whenever the leak is too large.

    Returns:
        ``(rho_out, rho_env)``, both at the working cutoff.
    """
    if not isinstance(channel, (ThermalAttenuator, Amplifier)):
        raise ParameterError(f"no two-mode dilation for {channel}")
    env_n = channel.N if env_n is None else env_n
    pops = _env_populations(env_n)
    if cutoff is not None:
        return _dilate(channel, psi, pops, cutoff, leak_tol)
    cutoff = max(_default_cutoff(channel, mean_photon_number(psi), env_n), psi.cutoff, pops.size)
    for _ in range(GROW_ATTEMPTS - 1):
        try:
            return _dilate(channel, psi, pops, cutoff, leak_tol)
        except CutoffError:
            cutoff = int(math.ceil(GROW_FACTOR * cutoff))
    return _dilate(channel, psi, pops, cutoff, leak_tol)


def _dilate(channel, psi, pops, cutoff, leak_tol):
    unitary = dilation_unitary(channel, cutoff)
    rho_s = np.zeros((cutoff, cutoff), dtype=complex)
    rho_e = np.zeros((cutoff, cutoff), dtype=complex)
    amps = psi.amplitudes[:cutoff]
    for level, weight in enumerate(pops[:cutoff]):
        state = np.zeros((cutoff, cutoff), dtype=complex)
        state[: amps.size, level] = amps
        out = unitary.apply(state)
        rho_s += weight * (out @ out.conj().T)
        rho_e += weight * (out.T @ out.conj())
    leak = max(0.0, 1.0 - float(np.trace(rho_s).real))
    return (
        DensityOperator(rho_s, leak, leak_tol=leak_tol),
        DensityOperator(rho_e, leak, leak_tol=leak_tol),
    )


def phase_conjugate(rho: DensityOperator) -> DensityOperator:
    """Transposition in the Fock basis."""
    return DensityOperator(rho.matrix.T, rho.trace_leak, leak_tol=rho.leak_tol)


def complementary_amplifier_check(kappa: float, psi: PureState, cutoff: int | None = None) -> float:
    r"""Max-entry gap between :math:`\tilde{\mathcal A}_\kappa(\psi)` and
    :math:`T\,\mathcal A_\kappa \mathcal E_{1-1/\kappa}(\psi)`.

    The left side is the environment marginal of the squeezer dilation, the
    right side goes through the Kraus ladders.
    """
    amp = Amplifier(kappa)
    _, env = dilation_outputs(amp, psi, cutoff=cutoff)
    lossy = apply_channel(ThermalAttenuator(1.0 - 1.0 / kappa), psi, cutoff_out=psi.cutoff)
    rhs = phase_conjugate(apply_channel(amp, lossy, cutoff_out=env.cutoff))
    return float(np.max(np.abs(env.matrix - rhs.matrix)))
