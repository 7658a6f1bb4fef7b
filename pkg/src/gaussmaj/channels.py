r"""Phase-insensitive single-mode Gaussian channels on truncated density matrices.

Every channel is realized through its canonical quantum-limited
decomposition: a pure-loss channel :math:`\mathcal E_{\eta_1}` followed by a
quantum-limited amplifier :math:`\mathcal A_{\kappa_2}`. Both building blocks
are Kraus ladders with closed-form matrix elements; tests validate them
against the two-mode dilations in :mod:`gaussmaj.dilation`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.special import gammaln

from .errors import CutoffError, ParameterError
from .fock import LEAK_TOL, DensityOperator, PureState, cutoff_heuristic, resize

KRAUS_DEFECT_TOL = 1e-10


@dataclass(frozen=True)
class ChannelSpec:
    """Base class of the three phase-insensitive channel families."""

    kind = "abstract"

    @property
    def canonical(self) -> tuple[float, float]:
        """``(eta1, kappa2)`` such that the channel equals ``A_kappa2 o E_eta1``."""
        raise NotImplementedError

    @property
    def gain(self) -> float:
        raise NotImplementedError

    @property
    def noise(self) -> float:
        r"""Coefficient ``c`` of the added Gaussian factor :math:`e^{-c|\mu|^2}`."""
        raise NotImplementedError

    def output_mean_photons(self, mean_in: float) -> float:
        """Mean photon number of the output given that of the input."""
        return self.gain * mean_in + self.noise - 0.5 * (1.0 - self.gain)

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(data: dict) -> "ChannelSpec":
        data = dict(data)
        kind = data.pop("kind", None)
        try:
            cls = _KINDS[kind]
        except KeyError:
            raise ParameterError(f"unknown channel kind {kind!r}") from None
        try:
            return cls(**data)
        except TypeError as exc:
            raise ParameterError(f"bad parameters for {kind}: {exc}") from None


@dataclass(frozen=True)
class ThermalAttenuator(ChannelSpec):
    """Beamsplitter of transmissivity ``eta`` mixing in a thermal state of mean ``N``."""

    eta: float
    N: float = 0.0
    kind = "attenuator"

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ParameterError(f"transmissivity must lie in (0, 1), got {self.eta}")
        if self.N < 0.0:
            raise ParameterError(f"thermal photon number must be >= 0, got {self.N}")

    @property
    def canonical(self):
        kappa2 = (1.0 - self.eta) * self.N + 1.0
        return self.eta / kappa2, kappa2

    @property
    def gain(self):
        return self.eta

    @property
    def noise(self):
        return (1.0 - self.eta) * (self.N + 0.5)

    def to_dict(self):
        return {"kind": self.kind, "eta": self.eta, "N": self.N}

    def __str__(self):
        return f"E(eta={self.eta:g},N={self.N:g})"


@dataclass(frozen=True)
class AdditiveNoise(ChannelSpec):
    """Random Gaussian displacement of variance ``n``."""

    n: float
    kind = "additive"

    def __post_init__(self):
        if not self.n > 0.0:
            raise ParameterError(f"added noise must be > 0, got {self.n}")

    @property
    def canonical(self):
        return 1.0 / (self.n + 1.0), self.n + 1.0

    @property
    def gain(self):
        return 1.0

    @property
    def noise(self):
        return self.n

    def to_dict(self):
        return {"kind": self.kind, "n": self.n}

    def __str__(self):
        return f"N(n={self.n:g})"


@dataclass(frozen=True)
class Amplifier(ChannelSpec):
    """Phase-insensitive amplifier of gain ``kappa`` with thermal environment ``N``."""

    kappa: float
    N: float = 0.0
    kind = "amplifier"

    def __post_init__(self):
        if not self.kappa > 1.0:
            raise ParameterError(f"gain must be > 1, got {self.kappa}")
        if self.N < 0.0:
            raise ParameterError(f"thermal photon number must be >= 0, got {self.N}")

    @property
    def canonical(self):
        kappa2 = self.kappa * (self.N + 1.0) - self.N
        return self.kappa / kappa2, kappa2

    @property
    def gain(self):
        return self.kappa

    @property
    def noise(self):
        return (self.kappa - 1.0) * (self.N + 0.5)

    def to_dict(self):
        return {"kind": self.kind, "kappa": self.kappa, "N": self.N}

    def __str__(self):
        return f"A(kappa={self.kappa:g},N={self.N:g})"


_KINDS = {cls.kind: cls for cls in (ThermalAttenuator, AdditiveNoise, Amplifier)}


def canonical_decomposition(channel: ChannelSpec) -> tuple[float, float]:
    return channel.canonical


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Stack of Kraus matrices, shape ``(count, cutoff_out, cutoff_in)``.

    ``completeness_defect`` is the max-entry deviation of ``sum K^dag K``
    from the identity over the input levels considered safe.
    """

    operators: np.ndarray
    completeness_defect: float

    def __post_init__(self):
        self.operators.setflags(write=False)

    @property
    def cutoff_in(self) -> int:
        return self.operators.shape[2]

    @property
    def cutoff_out(self) -> int:
        return self.operators.shape[1]

    def __len__(self):
        return self.operators.shape[0]


def _completeness_defect(ops: np.ndarray, levels: int) -> float:
    gram = np.einsum("kmi,kmj->ij", ops.conj(), ops)[:levels, :levels]
    return float(np.max(np.abs(gram - np.eye(levels)))) if levels > 0 else 0.0


@lru_cache(maxsize=64)
def kraus_attenuator(eta: float, cutoff: int) -> KrausSet:
    r"""Pure-loss ladder :math:`K_k|n\rangle = (-1)^k\sqrt{\binom nk \eta^{n-k}(1-\eta)^k}\,|n-k\rangle`.

    Signs follow the beamsplitter generator of :func:`gaussmaj.dilation.beamsplitter_unitary`.
    Completeness is exact at every level, so nothing is ever dropped.
    """
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"transmissivity must lie in (0, 1), got {eta}")
    n = np.arange(cutoff)
    ops = np.zeros((cutoff, cutoff, cutoff), dtype=complex)
    for k in range(cutoff):
        m = n[k:]
        logw = 0.5 * (gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
                      + (m - k) * math.log(eta) + k * math.log1p(-eta))
        ops[k, m - k, m] = (-1) ** k * np.exp(logw)
    return KrausSet(ops, _completeness_defect(ops, cutoff))


@lru_cache(maxsize=64)
def kraus_amplifier(
    kappa: float,
    cutoff: int,
    cutoff_out: int | None = None,
    margin: int | None = None,
    defect_tol: float = KRAUS_DEFECT_TOL,
) -> KrausSet:
    r"""Quantum-limited amplifier ladder.

    .. math::
        K_k|n\rangle = \sqrt{\binom{n+k}{k}}\,\kappa^{-(n+1)/2}
        \left(\tfrac{\kappa-1}{\kappa}\right)^{k/2} |n+k\rangle

    Operators are appended in order of ``k`` until the completeness defect on
    the safe input levels ``n < min(cutoff, cutoff_out - margin)`` drops below
    ``defect_tol`` or no further operator fits below ``cutoff_out``.
    ``margin`` defaults to ``ceil(4 sqrt(cutoff_out))``; pass ``margin=0`` to
    treat every input level as safe.
    """
    if not kappa > 1.0:
        raise ParameterError(f"gain must be > 1, got {kappa}")
    cutoff_out = cutoff if cutoff_out is None else cutoff_out
    margin = int(math.ceil(4.0 * math.sqrt(cutoff_out))) if margin is None else margin
    safe = max(min(cutoff, cutoff_out - margin), 1)
    n = np.arange(cutoff)
    ops = []
    weight = np.zeros(cutoff)
    for k in range(cutoff_out):
        m = n[n + k < cutoff_out]
        op = np.zeros((cutoff_out, cutoff), dtype=complex)
        logw = 0.5 * (gammaln(m + k + 1) - gammaln(k + 1) - gammaln(m + 1)
                      - (m + 1) * math.log(kappa) + k * (math.log(kappa - 1.0) - math.log(kappa)))
        op[m + k, m] = np.exp(logw)
        ops.append(op)
        weight[m] += np.exp(2 * logw)
        if np.max(1.0 - weight[:safe]) < defect_tol:
            break
    stack = np.array(ops)
    return KrausSet(stack, _completeness_defect(stack, min(safe, cutoff_out)))


def apply_kraus(kraus: KrausSet, rho: DensityOperator, leak_tol: float = LEAK_TOL) -> DensityOperator:
    """``sum_k K_k rho K_k^dag`` with truncation loss added to the leak."""
    if rho.cutoff != kraus.cutoff_in:
        rho = resize(rho, kraus.cutoff_in, leak_tol=leak_tol)
    ops = kraus.operators
    tmp = ops @ rho.matrix
    out = np.tensordot(tmp, ops.conj(), axes=([0, 2], [0, 2]))
    lost = max(0.0, rho.trace - float(np.trace(out).real))
    return DensityOperator(0.5 * (out + out.conj().T), rho.trace_leak + lost, leak_tol=leak_tol)


def apply_channel(
    channel: ChannelSpec,
    rho: DensityOperator | PureState,
    cutoff_out: int | None = None,
    leak_tol: float = LEAK_TOL,
) -> DensityOperator:
    """Apply ``channel`` through its canonical decomposition via Kraus sums.

    ``cutoff_out`` defaults to the larger of
    :func:`~gaussmaj.fock.cutoff_heuristic` of the output mean photon number
    and the exact size needed to keep the truncation loss of ``rho`` within
    half the remaining leak budget.

    Raises:
        CutoffError: if the accumulated leak exceeds ``leak_tol``.
    """
    if isinstance(rho, PureState):
        rho = rho.projector()
    if cutoff_out is None:
        pops = np.diag(rho.matrix).real.clip(0.0)
        budget = max(leak_tol - rho.trace_leak, 0.0) / 2
        cutoff_out = max(
            cutoff_heuristic(channel.output_mean_photons(_mean(rho))),
            required_cutoff(channel, pops, budget) if budget > 0 else rho.cutoff,
        )
    eta1, kappa2 = channel.canonical
    # Loose tolerance on intermediates; the final check happens on the output.
    out = rho
    if eta1 < 1.0:
        out = apply_kraus(kraus_attenuator(eta1, rho.cutoff), out, leak_tol=1.0)
    if kappa2 > 1.0:
        out = apply_kraus(kraus_amplifier(kappa2, rho.cutoff, cutoff_out), out, leak_tol=1.0)
    else:
        out = resize(out, cutoff_out, leak_tol=1.0)
    if out.trace_leak > leak_tol:
        raise CutoffError(
            f"{channel} leaks {out.trace_leak:.3e} at output cutoff {cutoff_out} "
            f"(tolerance {leak_tol:.1e}); enlarge the cutoff"
        )
    return DensityOperator(out.matrix, out.trace_leak, leak_tol=leak_tol)


def _mean(rho: DensityOperator) -> float:
    return float(np.sum(np.arange(rho.cutoff) * np.diag(rho.matrix).real))


class DiagonalTransfer:
    r"""Phase-covariant channel acting diagonal by diagonal.

    A phase-insensitive channel maps the ``d``-th lower diagonal
    :math:`\rho_{i+d,i}` of its input onto the ``d``-th lower diagonal of its
    output through a fixed matrix ``T_d``. Stacking the ``T_d`` into one
    sparse block-diagonal operator gives a channel application (and its
    adjoint) costing far less than a Kraus sum, which the optimizers exploit.
    """

    def __init__(self, blocks: list[np.ndarray], cutoff_in: int, cutoff_out: int):
        self.blocks = blocks
        self.cutoff_in = cutoff_in
        self.cutoff_out = cutoff_out
        self._matrix = sparse.block_diag(blocks, format="csr")
        self._matrix_h = self._matrix.conj().T.tocsr()
        self._in_idx = _lower_diagonal_index(cutoff_in, len(blocks))
        self._out_idx = _lower_diagonal_index(cutoff_out, len(blocks))

    @classmethod
    def from_kraus(cls, kraus: KrausSet) -> "DiagonalTransfer":
        ops = kraus.operators
        d_in, d_out = kraus.cutoff_in, kraus.cutoff_out
        blocks = []
        for d in range(min(d_in, d_out)):
            blocks.append(np.einsum("kij,kij->ij", ops[:, d:, d:], ops[:, : d_out - d, : d_in - d].conj()))
        return cls(blocks, d_in, d_out)

    @classmethod
    def identity(cls, cutoff_in: int, cutoff_out: int) -> "DiagonalTransfer":
        dims = min(cutoff_in, cutoff_out)
        return cls([np.eye(cutoff_out - d, cutoff_in - d) for d in range(dims)], cutoff_in, cutoff_out)

    def then(self, other: "DiagonalTransfer") -> "DiagonalTransfer":
        """Composition: apply ``self`` first, then ``other``."""
        count = min(len(self.blocks), len(other.blocks))
        blocks = [other.blocks[d] @ self.blocks[d] for d in range(count)]
        return DiagonalTransfer(blocks, self.cutoff_in, other.cutoff_out)

    def column_leak(self) -> np.ndarray:
        """Weight lost when the channel acts on each input Fock level."""
        return 1.0 - self.blocks[0].real.sum(axis=0)

    def _assemble(self, flat: np.ndarray, cutoff: int, idx) -> np.ndarray:
        rows, cols = idx
        out = np.zeros((cutoff, cutoff), dtype=complex)
        out[rows, cols] = flat
        out[cols, rows] = flat.conj()
        return out

    def apply_pure(self, psi: np.ndarray) -> np.ndarray:
        """Output matrix for the pure input ``psi`` (a raw amplitude vector)."""
        rows, cols = self._in_idx
        flat = psi[rows] * psi[cols].conj()
        return self._assemble(self._matrix @ flat, self.cutoff_out, self._out_idx)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rows, cols = self._in_idx
        return self._assemble(self._matrix @ rho[rows, cols], self.cutoff_out, self._out_idx)

    def adjoint(self, g: np.ndarray) -> np.ndarray:
        """Heisenberg-picture map applied to the Hermitian matrix ``g``."""
        rows, cols = self._out_idx
        return self._assemble(self._matrix_h @ g[rows, cols], self.cutoff_in, self._in_idx)


def _lower_diagonal_index(cutoff: int, count: int):
    rows = np.concatenate([np.arange(d, cutoff) for d in range(count)])
    cols = np.concatenate([np.arange(0, cutoff - d) for d in range(count)])
    return rows, cols


def channel_transfer(channel: ChannelSpec, cutoff_in: int, cutoff_out: int) -> DiagonalTransfer:
    """Diagonal transfer form of ``channel`` built from the canonical Kraus ladders."""
    eta1, kappa2 = channel.canonical
    if eta1 < 1.0:
        first = DiagonalTransfer.from_kraus(kraus_attenuator(eta1, cutoff_in))
    else:
        first = DiagonalTransfer.identity(cutoff_in, cutoff_in)
    if kappa2 > 1.0:
        second = DiagonalTransfer.from_kraus(kraus_amplifier(kappa2, cutoff_in, cutoff_out, margin=0))
    else:
        second = DiagonalTransfer.identity(cutoff_in, cutoff_out)
    return first.then(second)


def _population_transfer(channel: ChannelSpec, cutoff_in: int, cutoff_out: int) -> np.ndarray:
    """``P[m, n]``: probability that input level ``n`` lands on output level ``m``."""
    return channel_transfer(channel, cutoff_in, cutoff_out).blocks[0].real


def required_cutoff(channel: ChannelSpec, populations, leak_tol: float = LEAK_TOL, worst_case: bool = False) -> int:
    """Smallest output cutoff whose truncation loss stays below ``leak_tol``.

    Loss is linear in the input, diagonal in the Fock basis and depends only
    on the input populations; ``worst_case=True`` sizes for *every* input
    supported on ``len(populations)`` levels (the worst one is a Fock state).
    """
    pops = np.asarray(populations, dtype=float)
    cutoff_in = pops.size
    if channel.canonical[1] == 1.0:
        return cutoff_in
    top = cutoff_in - 1 if worst_case else float(np.dot(np.arange(cutoff_in), pops))
    guess = max(cutoff_heuristic(channel.output_mean_photons(top)), cutoff_in)
    for trial in (guess, 2 * guess, 4 * guess):
        # Truncating the output only drops rows, so row prefixes of one
        # large build answer every smaller cutoff.
        kept = np.cumsum(_population_transfer(channel, cutoff_in, trial), axis=0)
        lost = 1.0 - (kept.min(axis=1) if worst_case else kept @ pops / pops.sum())
        ok = np.nonzero(lost < leak_tol)[0]
        if ok.size:
            return int(max(ok[0] + 1, cutoff_in))
    raise CutoffError(f"no output cutoff up to {4 * guess} contains {channel} within {leak_tol:.1e}")


def worst_case_cutoff(channel: ChannelSpec, cutoff_in: int, leak_tol: float = LEAK_TOL) -> int:
    """Output cutoff keeping the loss below ``leak_tol`` for any input on ``cutoff_in`` levels."""
    return required_cutoff(channel, np.ones(cutoff_in), leak_tol, worst_case=True)
