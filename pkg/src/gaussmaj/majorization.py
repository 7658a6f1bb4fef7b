"""Majorization comparator and constructive strictly-concave witnesses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concave import ClippedLinear, ClippedQuadratic, ConcaveFunctionSpec
from .errors import GaussmajError, NoWitnessError
from .fock import Spectrum

BASE_TOL = 1e-9

MAJORIZES = "Majorizes"
FAILS = "Fails"


def as_spectrum(values) -> Spectrum:
    return values if isinstance(values, Spectrum) else Spectrum(values)


def default_tolerance(*spectra: Spectrum) -> float:
    """``1e-9`` plus the truncation leak of every spectrum involved."""
    return BASE_TOL + sum(max(s.leak, 0.0) for s in spectra)


def _padded_pair(a: Spectrum, b: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    size = max(len(a), len(b))
    return a.head(size), b.head(size)


@dataclass(frozen=True, eq=False)
class MajorizationReport:
    """Outcome of ``big > small``.

    ``partial_sum_slack[k-1]`` is the k-th partial sum of ``big`` minus that
    of ``small``; ``worst_index`` is the 1-based ``k`` of the smallest slack.
    """

    verdict: str
    partial_sum_slack: np.ndarray
    worst_index: int
    worst_slack: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.verdict == MAJORIZES


def majorizes(lambda_big, lambda_small, tol: float | None = None) -> MajorizationReport:
    """Check whether ``lambda_big`` majorizes ``lambda_small`` up to ``tol``.

    Spectra are compared as given (not renormalized); the default tolerance
    absorbs their leaks.
    """
    big, small = as_spectrum(lambda_big), as_spectrum(lambda_small)
    tol = default_tolerance(big, small) if tol is None else tol
    b, s = _padded_pair(big, small)
    slack = np.cumsum(b) - np.cumsum(s)
    worst = int(np.argmin(slack))
    verdict = MAJORIZES if slack[worst] >= -tol else FAILS
    return MajorizationReport(verdict, slack, worst + 1, float(slack[worst]), tol)


def eval_concave_sum(f: ConcaveFunctionSpec, lam) -> float:
    """``sum_j f(lambda_j)``; zero padding is harmless because ``f(0) = 0``.

    Raises:
        FunctionClassError: if ``f`` is negative somewhere on [0, 1].
    """
    f.check_class()
    values = lam.values if isinstance(lam, Spectrum) else np.asarray(lam, dtype=float)
    return float(np.sum(f(values)))


@dataclass(frozen=True)
class ConcaveWitness:
    """Data of a strictly concave ``f`` with ``sum f(lambda') > sum f(lambda)``.

    ``n`` is the 1-based index of the first violated partial sum, ``c`` the
    clipping level, ``delta`` the gap achieved by the clipped-linear function
    and ``eps`` the quadratic bend.
    """

    c: float
    n: int
    delta: float
    eps: float

    @property
    def function(self) -> ClippedQuadratic:
        return ClippedQuadratic(self.c, self.eps)

    def margin(self, lambda_prime, lam) -> float:
        """``sum f(lambda') - sum f(lambda)``, guaranteed ``>= delta - eps``."""
        f = self.function
        return eval_concave_sum(f, as_spectrum(lambda_prime)) - eval_concave_sum(f, as_spectrum(lam))


def build_witness(lambda_prime, lam, tol: float | None = None) -> ConcaveWitness:
    """Certificate that ``lambda_prime`` does not majorize ``lam``.

    Clips at ``c = lambda'_n`` for the first ``n`` whose partial sum of
    ``lambda'`` falls short of ``lam`` by more than ``tol``. The bend is
    ``eps = min(delta/2, c)``: half the gap, capped so that the witness stays
    nonnegative on [0, 1].

    Raises:
        NoWitnessError: if ``lambda_prime`` majorizes ``lam`` within ``tol``.
    """
    lp, lm = as_spectrum(lambda_prime), as_spectrum(lam)
    report = majorizes(lp, lm, tol)
    if report.holds:
        raise NoWitnessError("the first spectrum majorizes the second; no witness exists")
    n = int(np.nonzero(report.partial_sum_slack < -report.tolerance)[0][0]) + 1
    a, b = _padded_pair(lp, lm)
    c = float(a[n - 1])
    clipped = ClippedLinear(c)
    delta = eval_concave_sum(clipped, a) - eval_concave_sum(clipped, b)
    if not delta > 0.0:
        raise GaussmajError(f"clipped-linear gap {delta:.3e} is not positive; spectra inconsistent")
    return ConcaveWitness(c=c, n=n, delta=delta, eps=min(delta / 2.0, c))
