"""Batch experiments over channel grids and input batteries, with JSON/CSV reports.

Every case is a pure function of the configuration (and the integer seed it
echoes), so cases may run concurrently; the report is assembled in case
order and is byte-identical across runs apart from ``generated_at``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
import scipy

from .channels import ChannelSpec, ThermalAttenuator, apply_channel
from .concave import CONCAVE_BATTERY, from_name
from .errors import ConfigError, CutoffError, GaussmajError, NoWitnessError, ParameterError
from .fock import LEAK_TOL, coherent_vector, fock_vector, random_pure, spectrum, thermal_density
from .functionals import (
    OptimizerOptions,
    concave_trace_functional,
    maximize_beamsplitter_purity,
    minimize_output_functional,
    von_neumann_entropy,
)
from .gaussian import Coherent, Thermal, apply_channel_gaussian, gaussian_entropy, gaussian_of, gaussian_spectrum
from .majorization import build_witness, eval_concave_sum, majorizes

SCHEMA_VERSION = "1.0"

EXPERIMENTS = ("verify-majorization", "minimize-functional", "purity-max", "witness", "oracle-xcheck")

DEFAULT_CHANNELS = (
    {"kind": "attenuator", "eta": 0.6, "N": 0.5},
    {"kind": "additive", "n": 1.0},
    {"kind": "amplifier", "kappa": 1.5, "N": 0.3},
    {"kind": "amplifier", "kappa": 2.0, "N": 0.0},
    {"kind": "attenuator", "eta": 0.3, "N": 0.0},
)

DEFAULT_CUTOFFS = {
    "verify-majorization": 40,
    "minimize-functional": 30,
    "purity-max": 25,
    "witness": 8,
    "oracle-xcheck": 40,
}

BENCHMARK_LEAK = 1e-10

# Fresh output cutoffs are tried at most this many times per case.
GROW_ATTEMPTS = 3


@dataclass
class ExperimentConfig:
    """Everything a run depends on. Unused fields are ignored by other experiments.

    ``cutoff`` of ``None`` selects the per-experiment default in
    ``DEFAULT_CUTOFFS``; for ``witness`` it is the dimension of generated
    spectrum pairs.
    """

    experiment: str = "verify-majorization"
    channels: list = field(default_factory=lambda: [dict(c) for c in DEFAULT_CHANNELS])
    cutoff: int | None = None
    seed: int = 0
    leak_tol: float = LEAK_TOL
    base_tol: float = 1e-9
    # verify-majorization battery
    reference_alpha: list = field(default_factory=lambda: [0.0, 0.0])
    alphas: list = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    phases: int = 4
    fock_max: int = 5
    thermal: list = field(default_factory=lambda: [0.2, 1.0])
    random_states: int = 20
    negative_controls: bool = False
    control_margin: float = 1e-3
    # optimizer experiments
    functionals: list = field(default_factory=lambda: ["ShannonTerm", "PowerGap(2)"])
    restarts: int = 8
    max_iters: int = 2000
    rel_tol: float = 1e-9
    value_tol: float = 5e-3
    fidelity_min: float = 0.99
    etas: list = field(default_factory=lambda: [0.3, 0.5, 0.7])
    purity_tol: float = 1e-6
    # witness
    pairs: list = field(default_factory=list)
    pairs_file: str | None = None
    random_pairs: int = 0
    soundness_tol: float = 1e-12
    # oracle-xcheck
    eigen_count: int = 20
    oracle_tol: float = 1e-6
    # output
    output: str | None = None
    csv: str | None = None
    jobs: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        try:
            self.channel_specs()
        except (ParameterError, KeyError, TypeError) as exc:
            raise ConfigError(f"invalid channel: {exc}") from exc
        if self.cutoff is not None and (not isinstance(self.cutoff, int) or self.cutoff < 2):
            raise ConfigError(f"cutoff must be an integer >= 2, got {self.cutoff!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        for name in ("restarts", "jobs", "phases", "eigen_count"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        for name in ("fock_max", "random_states", "random_pairs", "max_iters"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 0:
                raise ConfigError(f"{name} must be a nonnegative integer")
        for name in ("leak_tol", "base_tol", "value_tol", "purity_tol", "oracle_tol", "soundness_tol", "rel_tol"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} must be >= 0")
        if any(n < 0 for n in self.thermal):
            raise ConfigError("thermal photon numbers must be >= 0")
        if any(not 0.0 < e < 1.0 for e in self.etas):
            raise ConfigError("transmissivities must lie in (0, 1)")
        if len(self.reference_alpha) != 2:
            raise ConfigError("reference_alpha must be [re, im]")
        try:
            [from_name(name) for name in self.functionals]
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
        for i, pair in enumerate(self.pairs):
            _check_pair(pair, f"pairs[{i}]")

    def channel_specs(self) -> list[ChannelSpec]:
        return [ChannelSpec.from_dict(c) for c in self.channels]

    def resolved_cutoff(self) -> int:
        return self.cutoff if self.cutoff is not None else DEFAULT_CUTOFFS[self.experiment]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc


def _check_pair(pair, where: str):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ConfigError(f"{where} must be a [lambda_prime, lambda] pair")
    out = []
    for side in pair:
        try:
            values = np.asarray(side, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: spectrum is not numeric") from exc
        if values.ndim != 1 or values.size == 0:
            raise ConfigError(f"{where}: spectrum must be a nonempty list")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ConfigError(f"{where}: spectrum has a negative or non-finite entry")
        if values.sum() > 1.0 + 1e-10:
            raise ConfigError(f"{where}: spectrum sums to {values.sum():.6g} > 1")
        out.append(values)
    return out


@dataclass
class Report:
    experiment: str
    config: dict
    cases: list
    summary: dict
    seeds: dict
    generated_at: str = ""

    @property
    def passed(self) -> bool:
        return self.summary["status"] == "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.summary["status"]]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "generated_at": self.generated_at,
            "versions": versions(),
            "seeds": self.seeds,
            "config": self.config,
            "cases": self.cases,
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["case_id", "channel", "input", "worst_slack", "verdict"])
        for case in self.cases:
            slack = case.get("worst_slack")
            writer.writerow([
                case["case_id"],
                case.get("channel", ""),
                case.get("input", ""),
                "" if slack is None else repr(float(slack)),
                case["verdict"],
            ])
        return buf.getvalue()


def versions() -> dict:
    from . import __version__

    return {
        "gaussmaj": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": sys.version.split()[0],
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _child_seeds(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def _summarize(cases: list, slack_key: str = "worst_slack") -> dict:
    counts = {v: sum(1 for c in cases if c["status"] == v) for v in ("pass", "fail", "error")}
    slacks = [c[slack_key] for c in cases if c.get(slack_key) is not None and c["status"] != "error"]
    status = "error" if counts["error"] else ("fail" if counts["fail"] else "pass")
    return {
        "status": status,
        "total": len(cases),
        "passed": counts["pass"],
        "failed": counts["fail"],
        "errors": counts["error"],
        "worst_slack": min(slacks) if slacks else None,
    }


def _guarded(task):
    """Run one case, turning numerical-validity errors into an ``error`` record."""
    meta, fn = task
    try:
        return {**meta, **fn()}
    except GaussmajError as exc:
        return {**meta, "status": "error", "verdict": "Error", "error": f"{type(exc).__name__}: {exc}"}


def _execute(tasks: list, jobs: int) -> list:
    if jobs <= 1:
        cases = [_guarded(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cases = list(pool.map(_guarded, tasks))
    for i, case in enumerate(cases):
        case["case_id"] = i
    return cases


def _output_with_growth(channel, state, leak_tol):
    """Channel output at the exact default cutoff, retried larger on a leak overflow."""
    err = None
    cutoff = None
    for _ in range(GROW_ATTEMPTS):
        try:
            return apply_channel(channel, state, cutoff_out=cutoff, leak_tol=leak_tol)
        except CutoffError as exc:
            err = exc
            base = cutoff or state.cutoff
            cutoff = int(math.ceil(2 * base + 20))
    raise err


# -- verify-majorization ------------------------------------------------------


def _input_battery(config: ExperimentConfig, cutoff: int):
    """``(label, state, seed)`` triples in a fixed order."""
    battery = []
    for r in config.alphas:
        phases = 1 if r == 0 else config.phases
        for k in range(phases):
            alpha = complex(r * np.exp(2j * np.pi * k / phases))
            battery.append((f"coherent({alpha.real:.6g}{alpha.imag:+.6g}j)", ("coherent", alpha), None))
    for n in range(config.fock_max + 1):
        battery.append((f"fock({n})", ("fock", n), None))
    for n_th in config.thermal:
        battery.append((f"thermal({n_th:g})", ("thermal", n_th), None))
    for i, seed in enumerate(_child_seeds(config.seed, config.random_states)):
        battery.append((f"random[{i}]", ("random", seed), seed))
    return battery


def _make_input(desc, cutoff, leak_tol):
    """Battery input at ``cutoff``, enlarged (up to 4x) when its own tail leaks too much.

    Half of the leak budget is kept for the channel output.
    """
    kind, value = desc
    if kind == "fock":
        return fock_vector(value, cutoff)
    if kind == "random":
        return random_pure(value, cutoff)
    build = coherent_vector if kind == "coherent" else thermal_density
    err = None
    for trial in (cutoff, 2 * cutoff, 4 * cutoff):
        try:
            return build(value, trial, leak_tol=leak_tol / 2)
        except CutoffError as exc:
            err = exc
    raise err


def run_verify_majorization(config: ExperimentConfig) -> Report:
    cutoff = config.resolved_cutoff()
    alpha_ref = complex(*config.reference_alpha)
    battery = _input_battery(config, cutoff)
    tasks = []
    for channel in config.channel_specs():
        ref_cache = {}

        def reference(channel=channel, cache=ref_cache):
            if "output" not in cache:
                psi = _make_input(("coherent", alpha_ref), cutoff, config.leak_tol)
                cache["output"] = spectrum(_output_with_growth(channel, psi, config.leak_tol))
            return cache["output"]

        # Build the reference once, before any concurrent case needs it.
        try:
            reference()
        except GaussmajError:
            pass
        for label, desc, seed in battery:
            meta = {"channel": str(channel), "input": label, "role": "sweep", "seed": seed}
            tasks.append((meta, _sweep_case(channel, desc, cutoff, config, reference)))
        if config.negative_controls:
            for n_th in config.thermal:
                if n_th == 0:
                    continue
                meta = {"channel": str(channel), "input": f"thermal({n_th:g})", "role": "control", "seed": None}
                tasks.append((meta, _control_case(channel, n_th, cutoff, config, reference)))
    cases = _execute(tasks, config.jobs)
    sweep = [c for c in cases if c["role"] == "sweep"]
    controls = [c for c in cases if c["role"] == "control"]
    summary = _summarize(cases)
    summary["worst_slack"] = _summarize(sweep)["worst_slack"]
    summary["sweep_cases"] = len(sweep)
    summary["controls"] = len(controls)
    summary["control_worst_slack"] = max((c["worst_slack"] for c in controls if "worst_slack" in c), default=None)
    return _report(config, cases, summary)


def _sweep_case(channel, desc, cutoff, config, reference):
    def run():
        ref = reference()
        out = spectrum(_output_with_growth(channel, _make_input(desc, cutoff, config.leak_tol), config.leak_tol))
        tol = config.base_tol + ref.leak + out.leak
        rep = majorizes(ref, out, tol)
        return {
            "verdict": rep.verdict,
            "status": "pass" if rep.holds else "fail",
            "worst_slack": rep.worst_slack,
            "worst_index": rep.worst_index,
            "tolerance": tol,
            "leak": out.leak,
            "reference_leak": ref.leak,
            "reverse_worst_slack": majorizes(out, ref, tol).worst_slack,
        }

    return run


def _control_case(channel, n_th, cutoff, config, reference):
    """Arguments swapped on purpose: a mixed input must fail to majorize the optimum."""

    def run():
        ref = reference()
        state = _make_input(("thermal", n_th), cutoff, config.leak_tol)
        out = spectrum(_output_with_growth(channel, state, config.leak_tol))
        tol = config.base_tol + ref.leak + out.leak
        rep = majorizes(out, ref, tol)
        ok = (not rep.holds) and rep.worst_slack < -config.control_margin
        return {
            "verdict": rep.verdict,
            "status": "pass" if ok else "fail",
            "worst_slack": rep.worst_slack,
            "worst_index": rep.worst_index,
            "tolerance": tol,
            "expected": "Fails",
        }

    return run


# -- minimize-functional / purity-max -----------------------------------------


def _options(config: ExperimentConfig, seed: int) -> OptimizerOptions:
    return OptimizerOptions(
        cutoff=config.resolved_cutoff(),
        restarts=config.restarts,
        seed=seed,
        max_iters=config.max_iters,
        rel_tol=config.rel_tol,
        leak_tol=config.leak_tol,
    )


def _restart_rows(result):
    return [
        {
            "start": r.start,
            "start_value": r.start_value,
            "value": r.value,
            "iterations": r.iterations,
            "converged": r.converged,
            "coherent_fidelity": r.coherent_fidelity,
            "best_alpha": r.best_alpha,
        }
        for r in result.restarts
    ]


def run_minimize_functional(config: ExperimentConfig) -> Report:
    channels = config.channel_specs()
    funcs = [from_name(name) for name in config.functionals]
    seeds = _child_seeds(config.seed, len(channels) * len(funcs))
    tasks = []
    for i, channel in enumerate(channels):
        for j, f in enumerate(funcs):
            seed = seeds[i * len(funcs) + j]
            meta = {"channel": str(channel), "input": str(f), "functional": str(f), "seed": seed}
            tasks.append((meta, _minimize_case(channel, f, config, seed)))
    cases = _execute(tasks, config.jobs)
    return _report(config, cases, _summarize(cases))


def _minimize_case(channel, f, config, seed):
    def run():
        vacuum = fock_vector(0, 2)
        # The benchmark is cheap, so it is computed far below the sweep leak.
        benchmark = concave_trace_functional(f, _output_with_growth(channel, vacuum, BENCHMARK_LEAK))
        result = minimize_output_functional(channel, f, _options(config, seed))
        gap = result.best_value - benchmark
        beats = gap < -config.value_tol
        near = [r for r in result.restarts if abs(r.value - benchmark) <= config.value_tol]
        bad_argmin = [r for r in near if r.coherent_fidelity <= config.fidelity_min]
        ok = not beats and not bad_argmin
        return {
            "verdict": "Consistent" if ok else "Counterexample" if beats else "NonCoherentArgmin",
            "status": "pass" if ok else "fail",
            "benchmark": benchmark,
            "best_value": result.best_value,
            "worst_slack": gap,
            "coherent_fidelity": result.coherent_fidelity,
            "best_alpha": result.best_alpha,
            "converged": result.converged,
            "restarts": _restart_rows(result),
        }

    return run


def run_purity_max(config: ExperimentConfig) -> Report:
    seeds = _child_seeds(config.seed, len(config.etas))
    tasks = []
    for eta, seed in zip(config.etas, seeds):
        meta = {"channel": str(ThermalAttenuator(eta)), "input": "optimized", "seed": seed}
        tasks.append((meta, _purity_case(eta, config, seed)))
    cases = _execute(tasks, config.jobs)
    return _report(config, cases, _summarize(cases))


def _purity_case(eta, config, seed):
    def run():
        from .fock import purity

        result = maximize_beamsplitter_purity(eta, _options(config, seed))
        ok = abs(result.best_value - 1.0) <= config.purity_tol and result.coherent_fidelity > config.fidelity_min
        channel = ThermalAttenuator(eta)
        cutoff = config.resolved_cutoff()
        references = {
            "fock(1)": purity(apply_channel(channel, fock_vector(1, cutoff))),
            "thermal(1)": purity(apply_channel(channel, _make_input(("thermal", 1.0), cutoff, config.leak_tol))),
        }
        return {
            "verdict": "PureOutput" if ok else "Impure",
            "status": "pass" if ok else "fail",
            "best_value": result.best_value,
            "worst_slack": result.best_value - 1.0,
            "coherent_fidelity": result.coherent_fidelity,
            "best_alpha": result.best_alpha,
            "reference_purities": references,
            "restarts": _restart_rows(result),
        }

    return run


# -- witness ------------------------------------------------------------------


def _load_pairs(config: ExperimentConfig):
    pairs = [(f"pairs[{i}]", *_check_pair(p, f"pairs[{i}]")) for i, p in enumerate(config.pairs)]
    if config.pairs_file:
        try:
            with open(config.pairs_file, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read pairs file {config.pairs_file}: {exc}") from exc
        if isinstance(data, dict):
            data = data.get("pairs")
        if not isinstance(data, list):
            raise ConfigError("pairs file must hold a list of [lambda_prime, lambda] pairs")
        for i, p in enumerate(data):
            pairs.append((f"file[{i}]", *_check_pair(p, f"{config.pairs_file}[{i}]")))
    dim = config.cutoff if config.cutoff is not None else DEFAULT_CUTOFFS["witness"]
    rng = np.random.default_rng(config.seed)
    for i in range(config.random_pairs):
        a, b = rng.dirichlet(np.ones(dim)), rng.dirichlet(np.ones(dim))
        pairs.append((f"random[{i}]", a, b))
    return pairs


def run_witness(config: ExperimentConfig) -> Report:
    pairs = _load_pairs(config)
    tasks = [
        ({"channel": "", "input": label, "lambda_prime": lp.tolist(), "lambda": lm.tolist()}, _witness_case(lp, lm, config))
        for label, lp, lm in pairs
    ]
    cases = _execute(tasks, config.jobs)
    return _report(config, cases, _summarize(cases, "soundness_slack"))


def _witness_case(lp, lm, config):
    def run():
        forward = majorizes(lp, lm, config.base_tol)
        backward = majorizes(lm, lp, config.base_tol)
        row = {
            "forward_verdict": forward.verdict,
            "backward_verdict": backward.verdict,
            "worst_slack": forward.worst_slack,
        }
        try:
            w = build_witness(lp, lm, config.base_tol)
        except NoWitnessError:
            gaps = {str(f): eval_concave_sum(f, lp) - eval_concave_sum(f, lm) for f in CONCAVE_BATTERY}
            slack = -max(gaps.values())
            ok = slack >= -config.soundness_tol
            return {**row, "verdict": "NoWitness", "status": "pass" if ok else "fail",
                    "battery_gaps": gaps, "soundness_slack": slack}
        margin = w.margin(lp, lm)
        slack = margin - (w.delta - w.eps)
        ok = slack >= -config.soundness_tol and margin > 0
        return {**row, "verdict": "Witness", "status": "pass" if ok else "fail",
                "n": w.n, "c": w.c, "delta": w.delta, "eps": w.eps,
                "margin": margin, "guaranteed_margin": w.delta - w.eps, "soundness_slack": slack}

    return run


# -- oracle-xcheck ------------------------------------------------------------


def run_oracle_xcheck(config: ExperimentConfig) -> Report:
    cutoff = config.resolved_cutoff()
    inputs = []
    for r in config.alphas:
        phases = 1 if r == 0 else config.phases
        for k in range(phases):
            alpha = complex(r * np.exp(2j * np.pi * k / phases))
            inputs.append((f"coherent({alpha.real:.6g}{alpha.imag:+.6g}j)", Coherent(alpha)))
    for n_th in config.thermal:
        inputs.append((f"thermal({n_th:g})", Thermal(n_th)))
    tasks = []
    for channel in config.channel_specs():
        for label, g in inputs:
            meta = {"channel": str(channel), "input": label}
            tasks.append((meta, _oracle_case(channel, g, cutoff, config)))
    cases = _execute(tasks, config.jobs)
    return _report(config, cases, _summarize(cases))


def _oracle_case(channel, g, cutoff, config):
    def run():
        desc = ("coherent", g.alpha) if isinstance(g, Coherent) else ("thermal", g.N)
        state = _make_input(desc, cutoff, config.leak_tol)
        fock_spec = spectrum(_output_with_growth(channel, state, config.leak_tol))
        exact = apply_channel_gaussian(channel, gaussian_of(g))
        count = config.eigen_count
        eig_gap = float(np.max(np.abs(fock_spec.head(count) - gaussian_spectrum(exact, count).values)))
        ent_gap = abs(von_neumann_entropy(fock_spec) - gaussian_entropy(exact))
        eig_tol = config.oracle_tol + fock_spec.leak
        ok = eig_gap <= eig_tol and ent_gap <= config.oracle_tol
        return {
            "verdict": "Agree" if ok else "Disagree",
            "status": "pass" if ok else "fail",
            "eigen_gap": eig_gap,
            "entropy_gap": ent_gap,
            "leak": fock_spec.leak,
            "worst_slack": min(eig_tol - eig_gap, config.oracle_tol - ent_gap),
        }

    return run


# -- dispatch -----------------------------------------------------------------


# Output plumbing that cannot influence any result; left out of the echo so
# that reports do not depend on where or how concurrently they were produced.
_NOT_ECHOED = ("output", "csv", "jobs")


def _report(config: ExperimentConfig, cases: list, summary: dict) -> Report:
    seeds = {"seed": config.seed, "case_seeds": [c.get("seed") for c in cases]}
    echo = {k: v for k, v in config.to_dict().items() if k not in _NOT_ECHOED}
    return Report(config.experiment, echo, cases, summary, seeds)


RUNNERS = {
    "verify-majorization": run_verify_majorization,
    "minimize-functional": run_minimize_functional,
    "purity-max": run_purity_max,
    "witness": run_witness,
    "oracle-xcheck": run_oracle_xcheck,
}


def run_experiment(config: ExperimentConfig, timestamp: bool = True) -> Report:
    report = RUNNERS[config.experiment](config)
    if timestamp:
        report.generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report
