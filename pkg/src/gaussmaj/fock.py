r"""Truncated Fock-space states, spectra and elementary state functionals.

Every matrix here is expressed in the photon-number basis
:math:`\{|0\rangle, \dots, |D-1\rangle\}`. Truncation is never hidden: the
probability weight lost beyond the cutoff is carried as an explicit *leak*
and is never renormalized away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc

from .errors import CutoffError, DimensionError, ParameterError, PositivityError

#: Default upper bound on the probability weight lost to truncation.
LEAK_TOL = 1e-8

#: Eigenvalues in ``[-CLAMP_TOL, 0)`` are numerical noise and are clamped to zero.
CLAMP_TOL = 1e-10

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12


def cutoff_heuristic(mean_photons: float) -> int:
    r"""Smallest cutoff deemed safe for a state of the given mean photon number.

    Implements :math:`D \ge \lceil \bar m + 8\sqrt{\bar m + 1} + 10 \rceil`.
    """
    if mean_photons < 0:
        raise ParameterError(f"mean photon number must be >= 0, got {mean_photons}")
    return int(math.ceil(mean_photons + 8.0 * math.sqrt(mean_photons + 1.0) + 10.0))


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector in the truncated Fock basis.

    Attributes:
        amplitudes: complex Fock coefficients ``c_0 .. c_{D-1}``.
        tail_weight: weight the untruncated state had beyond the cutoff
            before it was renormalized (zero for states born finite).
    """

    amplitudes: np.ndarray
    tail_weight: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.size < 2:
            raise DimensionError(f"cutoff must be >= 2, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ParameterError(f"amplitudes not normalized: |c|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size

    @classmethod
    def from_unnormalized(cls, vector) -> "PureState":
        vec = np.asarray(vector, dtype=complex).ravel()
        return cls(vec / np.linalg.norm(vec))

    def projector(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def padded(self, cutoff: int) -> "PureState":
        """Embed into a larger cutoff by appending zero amplitudes."""
        if cutoff < self.cutoff:
            raise DimensionError(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        amps = np.zeros(cutoff, dtype=complex)
        amps[: self.cutoff] = self.amplitudes
        return PureState(amps, self.tail_weight)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Truncated Hermitian positive matrix with its truncation leak.

    ``trace_leak`` defaults to ``1 - Tr(matrix)``. Construction fails with
    :class:`CutoffError` when the leak exceeds ``leak_tol``. Positivity is
    checked lazily by :func:`spectrum`.
    """

    matrix: np.ndarray
    trace_leak: float | None = None
    leak_tol: float = field(default=LEAK_TOL, compare=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"density matrix must be square, got {mat.shape}")
        if mat.shape[0] < 2:
            raise DimensionError("cutoff must be >= 2")
        asym = np.max(np.abs(mat - mat.conj().T))
        if asym > HERMITIAN_TOL:
            raise ParameterError(f"matrix is not Hermitian (defect {asym:.3e})")
        mat = 0.5 * (mat + mat.conj().T)
        leak = 1.0 - float(np.trace(mat).real) if self.trace_leak is None else float(self.trace_leak)
        if leak < -CLAMP_TOL:
            raise ParameterError(f"trace exceeds one by {-leak:.3e}")
        leak = max(leak, 0.0)
        if leak > self.leak_tol:
            raise CutoffError(
                f"trace leak {leak:.3e} exceeds tolerance {self.leak_tol:.1e}; enlarge the cutoff"
            )
        object.__setattr__(self, "matrix", _frozen(mat))
        object.__setattr__(self, "trace_leak", leak)

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Descending nonnegative eigenvalues plus the weight missing from them."""

    values: np.ndarray
    leak: float | None = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if np.any(vals < -CLAMP_TOL):
            raise PositivityError(f"negative spectrum entry {vals.min():.3e}")
        vals = np.sort(np.clip(vals, 0.0, None), kind="stable")[::-1].copy()
        leak = 1.0 - float(vals.sum()) if self.leak is None else float(self.leak)
        if leak < -CLAMP_TOL:
            raise ParameterError(f"spectrum sums to more than one (leak {leak:.3e})")
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "leak", leak)

    def __len__(self) -> int:
        return self.values.size

    def head(self, count: int) -> np.ndarray:
        """First ``count`` values, zero padded."""
        out = np.zeros(count)
        n = min(count, self.values.size)
        out[:n] = self.values[:n]
        return out


def coherent_vector(alpha: complex, cutoff: int, leak_tol: float = LEAK_TOL) -> PureState:
    r"""Truncated coherent state :math:`|\alpha\rangle`.

    The amplitudes :math:`e^{-|\alpha|^2/2}\alpha^n/\sqrt{n!}` are built by the
    ratio recursion, renormalized, and the pre-normalization tail weight
    :math:`P(\mathrm{Poisson}(|\alpha|^2) \ge D)` is recorded.

    Raises:
        CutoffError: if the tail weight exceeds ``leak_tol``.
    """
    if cutoff < 2:
        raise DimensionError(f"cutoff must be >= 2, got {cutoff}")
    alpha = complex(alpha)
    mean = abs(alpha) ** 2
    tail = float(gammainc(cutoff, mean)) if mean > 0 else 0.0
    if tail > leak_tol:
        raise CutoffError(
            f"coherent state |alpha|^2={mean:.3g} leaks {tail:.3e} beyond cutoff {cutoff}"
        )
    amps = np.empty(cutoff, dtype=complex)
    amps[0] = math.exp(-mean / 2.0)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    amps /= np.linalg.norm(amps)
    return PureState(amps, tail)


def fock_vector(n: int, cutoff: int) -> PureState:
    """Photon-number basis vector ``e_n``."""
    if not 0 <= n < cutoff:
        raise IndexError(f"Fock level {n} outside cutoff {cutoff}")
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return PureState(amps)


def thermal_density(mean_photons: float, cutoff: int, leak_tol: float = LEAK_TOL) -> DensityOperator:
    r"""Thermal state with populations :math:`N^n/(N+1)^{n+1}`, truncated (not renormalized)."""
    if mean_photons < 0:
        raise ParameterError(f"thermal mean photon number must be >= 0, got {mean_photons}")
    ratio = mean_photons / (mean_photons + 1.0)
    pops = ratio ** np.arange(cutoff) / (mean_photons + 1.0)
    return DensityOperator(np.diag(pops).astype(complex), ratio**cutoff, leak_tol=leak_tol)


def random_pure(seed: int, cutoff: int) -> PureState:
    """Haar-random unit vector, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(cutoff) + 1j * rng.standard_normal(cutoff)
    return PureState.from_unnormalized(z)


def spectrum(rho: DensityOperator) -> Spectrum:
    """Descending eigenvalues of ``rho`` with small negative noise clamped.

    Raises:
        PositivityError: if an eigenvalue is below ``-CLAMP_TOL``.
    """
    evals = np.linalg.eigvalsh(rho.matrix)
    if evals[0] < -CLAMP_TOL:
        raise PositivityError(f"eigenvalue {evals[0]:.3e} below clamp threshold")
    return Spectrum(evals, rho.trace_leak)


def purity(rho: DensityOperator) -> float:
    """Tr[rho^2], computed from the matrix entries (equal to the sum of squared eigenvalues)."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def fidelity(psi: PureState, phi: PureState) -> float:
    """Overlap probability between two pure states of equal cutoff."""
    if psi.cutoff != phi.cutoff:
        raise DimensionError(f"cutoff mismatch: {psi.cutoff} vs {phi.cutoff}")
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)


def annihilation(cutoff: int) -> np.ndarray:
    """Truncated lowering operator ``a``."""
    return np.diag(np.sqrt(np.arange(1, cutoff)), 1).astype(complex)


def mean_photon_number(rho) -> float:
    """Mean photon number of a :class:`PureState` or :class:`DensityOperator`."""
    if isinstance(rho, PureState):
        return float(np.sum(np.arange(rho.cutoff) * np.abs(rho.amplitudes) ** 2))
    return float(np.sum(np.arange(rho.cutoff) * np.diag(rho.matrix).real))


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    if rho.cutoff != sigma.cutoff:
        raise DimensionError(f"cutoff mismatch: {rho.cutoff} vs {sigma.cutoff}")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho.matrix - sigma.matrix))))


def resize(rho: DensityOperator, cutoff: int, leak_tol: float = LEAK_TOL) -> DensityOperator:
    """Zero-pad or truncate to ``cutoff``; weight cut off is added to the leak."""
    old = rho.cutoff
    out = np.zeros((cutoff, cutoff), dtype=complex)
    keep = min(old, cutoff)
    out[:keep, :keep] = rho.matrix[:keep, :keep]
    lost = max(0.0, rho.trace - float(np.trace(out).real))
    return DensityOperator(out, rho.trace_leak + lost, leak_tol=leak_tol)
