r"""Output functionals of channels and their numerical minimization over pure inputs.

The optimizer works in the quotient parameterization: an unnormalized
complex vector ``x`` stands for the state ``x/|x|``. Each restart runs
L-BFGS-B on the real and imaginary parts. Gradients are analytic by default
(eigendecomposition of the output plus the channel adjoint); central finite
differences are available through ``gradient="fd"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .channels import ChannelSpec, DiagonalTransfer, ThermalAttenuator, apply_channel, channel_transfer, worst_case_cutoff
from .concave import ClippedLinear, ClippedQuadratic, ConcaveFunctionSpec, PowerGap, ShannonTerm, SqrtGap
from .errors import CutoffError, ParameterError
from .fock import (
    LEAK_TOL,
    DensityOperator,
    PureState,
    Spectrum,
    coherent_vector,
    fock_vector,
    random_pure,
    spectrum,
)
from .majorization import eval_concave_sum

__all__ = [
    "ClippedLinear",
    "ClippedQuadratic",
    "ConcaveFunctionSpec",
    "OptimizationResult",
    "OptimizerOptions",
    "PowerGap",
    "RestartRecord",
    "ShannonTerm",
    "SqrtGap",
    "coherent_fit",
    "concave_trace_functional",
    "maximize_beamsplitter_purity",
    "minimize_output_functional",
    "renyi_entropy",
    "von_neumann_entropy",
]

# Eigenvalues below this are treated as zero when forming slopes of f.
GRADIENT_EIG_FLOOR = 1e-16


def _values(x: Spectrum | DensityOperator) -> np.ndarray:
    return spectrum(x).values if isinstance(x, DensityOperator) else x.values


def von_neumann_entropy(x: Spectrum | DensityOperator) -> float:
    """Entropy in nats, with ``0 ln 0 = 0``."""
    return float(np.sum(ShannonTerm()(_values(x))))


def renyi_entropy(p: float, x: Spectrum | DensityOperator) -> float:
    if not p > 1.0:
        raise ParameterError(f"Renyi order must be > 1, got {p}")
    return math.log(float(np.sum(np.power(_values(x), p)))) / (1.0 - p)


def concave_trace_functional(f: ConcaveFunctionSpec, rho: DensityOperator) -> float:
    return eval_concave_sum(f, spectrum(rho))


@dataclass(frozen=True)
class OptimizerOptions:
    """Controls for the multi-start searches.

    ``cutoff_out`` defaults to the smallest output cutoff that keeps the
    truncation loss below ``leak_tol`` for every input on ``cutoff`` levels.
    ``jitter`` is the relative size of the seeded perturbation added to every
    starting vector, so that symmetric stationary starts (Fock states) can be
    escaped.
    """

    cutoff: int = 30
    restarts: int = 8
    seed: int = 0
    max_iters: int = 2000
    rel_tol: float = 1e-9
    gtol: float = 1e-10
    jitter: float = 1e-3
    gradient: str = "analytic"
    fd_step: float = 1e-5
    leak_tol: float = LEAK_TOL
    cutoff_out: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ParameterError("at least one restart is required")
        if self.gradient not in ("analytic", "fd"):
            raise ParameterError(f"gradient must be 'analytic' or 'fd', got {self.gradient!r}")


@dataclass(frozen=True, eq=False)
class RestartRecord:
    start: str
    start_value: float
    value: float
    iterations: int
    converged: bool
    coherent_fidelity: float
    best_alpha: complex
    log: tuple
    argmin: PureState = field(repr=False)


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_value: float
    argmin: PureState
    restarts_used: int
    converged: bool
    coherent_fidelity: float
    best_alpha: complex
    restarts: tuple = field(repr=False)


class _Objective:
    """``x -> F(channel(x x^dag / |x|^2))`` with its gradient in real coordinates."""

    def __init__(self, transfer: DiagonalTransfer, spectral, sign: float = 1.0):
        self.transfer = transfer
        self.spectral = spectral
        self.sign = sign

    def value(self, x: np.ndarray) -> float:
        psi = self._state(x)
        return self.spectral(self.transfer.apply_pure(psi), want_grad=False)[0]

    def value_and_grad(self, x: np.ndarray):
        psi = self._state(x)
        norm = np.linalg.norm(x)
        val, g = self.spectral(self.transfer.apply_pure(psi), want_grad=True)
        h = self.transfer.adjoint(g) @ psi
        w = 2.0 * (h - np.vdot(psi, h).real * psi) / norm
        return val, np.concatenate([w.real, w.imag])

    def fd_value_and_grad(self, x: np.ndarray, step: float):
        grad = np.empty_like(x)
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = step
            grad[i] = (self.value(x + e) - self.value(x - e)) / (2.0 * step)
        return self.value(x), grad

    @staticmethod
    def _state(x: np.ndarray) -> np.ndarray:
        half = x.size // 2
        z = x[:half] + 1j * x[half:]
        return z / np.linalg.norm(z)


def _spectral_functional(f: ConcaveFunctionSpec):
    def evaluate(rho: np.ndarray, want_grad: bool):
        if not want_grad:
            lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
            return float(np.sum(f(lam))), None
        lam, vec = np.linalg.eigh(rho)
        lam = np.clip(lam, 0.0, None)
        slope = f.derivative(np.maximum(lam, GRADIENT_EIG_FLOOR))
        return float(np.sum(f(lam))), (vec * slope) @ vec.conj().T

    return evaluate


def _negative_purity(rho: np.ndarray, want_grad: bool):
    return -float(np.sum(np.abs(rho) ** 2)), (-2.0 * rho if want_grad else None)


def coherent_fit(psi: PureState, refine_steps: int = 20) -> tuple[float, complex]:
    r"""Largest overlap :math:`\max_\alpha |\langle\alpha|\psi\rangle|^2` and its maximizer.

    A polar grid (24 angles, radii in steps of 0.1 up to :math:`\sqrt D/2`)
    plus the mean-field guess :math:`\langle a\rangle` seeds a short BFGS
    refinement. The coherent amplitudes are the exact untruncated ones, so the
    overlap is exact for ``psi`` living in the truncated space.
    """
    c = psi.amplitudes
    d = c.size

    def overlaps(alphas):
        alphas = np.atleast_1d(alphas)
        amps = np.empty((alphas.size, d), dtype=complex)
        amps[:, 0] = np.exp(-0.5 * np.abs(alphas) ** 2)
        for n in range(1, d):
            amps[:, n] = amps[:, n - 1] * alphas / math.sqrt(n)
        return np.abs(amps.conj() @ c) ** 2

    radii = np.arange(0.0, math.sqrt(d) / 2.0 + 1e-12, 0.1)
    angles = np.exp(2j * np.pi * np.arange(24) / 24)
    grid = np.concatenate([(radii[:, None] * angles[None, :]).ravel(), [np.vdot(c[:-1], np.sqrt(np.arange(1, d)) * c[1:])]])
    values = overlaps(grid)
    start = grid[int(np.argmax(values))]
    res = minimize(
        lambda v: -overlaps(v[0] + 1j * v[1])[0],
        np.array([start.real, start.imag]),
        method="BFGS",
        options={"maxiter": refine_steps, "gtol": 1e-12},
    )
    best = complex(res.x[0], res.x[1])
    fid = float(overlaps(best)[0])
    if fid < values.max():
        best, fid = complex(start), float(values.max())
    return min(fid, 1.0), best


def _starts(opts: OptimizerOptions):
    children = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    out = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        if i == 0:
            alpha = complex(*(0.5 * rng.standard_normal(2)))
            out.append(("coherent", coherent_vector(alpha, opts.cutoff, leak_tol=1.0), rng))
        elif i == 1:
            out.append(("fock", fock_vector(1, opts.cutoff), rng))
        else:
            out.append(("haar", random_pure(int(rng.integers(2**32)), opts.cutoff), rng))
    return out


def _run(objective: _Objective, starts, opts: OptimizerOptions) -> OptimizationResult:
    records = []
    for label, state, rng in starts:
        z = state.amplitudes.copy()
        if opts.jitter > 0:
            noise = rng.standard_normal(z.size) + 1j * rng.standard_normal(z.size)
            z = z + opts.jitter * noise / np.linalg.norm(noise)
        x0 = np.concatenate([z.real, z.imag])
        if opts.gradient == "analytic":
            fun = objective.value_and_grad
        else:
            fun = lambda x: objective.fd_value_and_grad(x, opts.fd_step)  # noqa: E731
        start_value = objective.value(x0)
        log = [start_value]
        res = minimize(
            fun,
            x0,
            jac=True,
            method="L-BFGS-B",
            callback=lambda intermediate_result: log.append(float(intermediate_result.fun)),
            options={"maxiter": opts.max_iters, "ftol": opts.rel_tol, "gtol": opts.gtol, "maxcor": 20},
        )
        argmin = PureState.from_unnormalized(res.x[: z.size] + 1j * res.x[z.size:])
        fid, alpha = coherent_fit(argmin)
        value = objective.value(res.x)
        records.append(RestartRecord(
            start=label,
            start_value=objective.sign * start_value,
            value=objective.sign * value,
            iterations=int(res.nit),
            converged=bool(res.success) and np.isfinite(value),
            coherent_fidelity=fid,
            best_alpha=alpha,
            log=tuple(objective.sign * v for v in log),
            argmin=argmin,
        ))
    best = min(records, key=lambda r: objective.sign * r.value)
    return OptimizationResult(
        best_value=best.value,
        argmin=best.argmin,
        restarts_used=len(records),
        converged=best.converged,
        coherent_fidelity=best.coherent_fidelity,
        best_alpha=best.best_alpha,
        restarts=tuple(records),
    )


def _transfer(channel: ChannelSpec, opts: OptimizerOptions) -> DiagonalTransfer:
    cutoff_out = opts.cutoff_out or worst_case_cutoff(channel, opts.cutoff, opts.leak_tol)
    transfer = channel_transfer(channel, opts.cutoff, cutoff_out)
    worst = float(transfer.column_leak().max())
    if worst > opts.leak_tol:
        raise CutoffError(
            f"{channel} loses up to {worst:.3e} at output cutoff {cutoff_out}; enlarge cutoff_out"
        )
    return transfer


def minimize_output_functional(
    channel: ChannelSpec,
    f: ConcaveFunctionSpec,
    opts: OptimizerOptions | None = None,
    initial: list[PureState] | None = None,
) -> OptimizationResult:
    """Multi-start search for ``min_psi F(channel(|psi><psi|))`` with ``F = Tr f``.

    Default starts: one coherent state with a seeded amplitude, the Fock
    state ``|1>``, then Haar-random vectors, each seeded deterministically.
    ``initial`` replaces them with explicit starting states.

    Raises:
        CutoffError: if the output cutoff cannot contain every input within ``opts.leak_tol``.
    """
    opts = opts or OptimizerOptions()
    f.check_class()
    objective = _Objective(_transfer(channel, opts), _spectral_functional(f))
    return _run(objective, _start_list(opts, initial), opts)


def maximize_beamsplitter_purity(
    eta: float,
    opts: OptimizerOptions | None = None,
    initial: list[PureState] | None = None,
) -> OptimizationResult:
    """Multi-start search for ``max_psi Tr[E_eta(|psi><psi|)^2]``.

    Same contract as :func:`minimize_output_functional`, except that every
    reported value (``best_value``, restart values and logs) is a purity.
    """
    opts = opts or OptimizerOptions()
    objective = _Objective(_transfer(ThermalAttenuator(eta), opts), _negative_purity, sign=-1.0)
    return _run(objective, _start_list(opts, initial), opts)


def _start_list(opts: OptimizerOptions, initial):
    if initial is None:
        return _starts(opts)
    children = np.random.SeedSequence(opts.seed).spawn(len(initial))
    return [("given", state, np.random.default_rng(child)) for state, child in zip(initial, children)]


def output_functional(channel: ChannelSpec, f: ConcaveFunctionSpec, psi: PureState, cutoff_out: int | None = None) -> float:
    """``F(channel(|psi><psi|))`` through the Kraus pipeline."""
    return concave_trace_functional(f, apply_channel(channel, psi, cutoff_out))
