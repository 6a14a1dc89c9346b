"""Seeded Monte Carlo checks of the tail bounds and moment identities.

Trial ``t`` always uses random stream ``(master_seed, t)``. Trials are
processed in fixed-size chunks of consecutive stream ids; ``jobs`` only
decides which process handles a chunk, so every summary is independent of
the degree of parallelism.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .deviation import (
    DeviationParams,
    chebyshev_size_bound,
    deviation_bound,
    failure_prob_bound,
    hayes_threshold,
    main_threshold,
    per_part_tail_bound,
    proof_alpha,
    proof_lambda,
)
from .errors import InputError, ResourceError
from .field import SpaceParams, dot_row
from .sampling import SeedSpec, bernoulli_rows, make_rng, uniform_rows
from .spectral import _frequency_index, character_table, dft_batch, phi_from_coeffs

CHUNK = 4096
MAX_TRIALS = 10 ** 8

# (n, delta, seed) cells past this many trial-points are rejected up front
TRIAL_POINT_BUDGET = 2 ** 31


def stat_slack(bound, trials, k=3.0):
    """One-sided k-standard-error allowance for an empirical frequency.

    The bound is clipped to [0, 1] inside the variance term only.
    """
    b = min(max(bound, 0.0), 1.0)
    return k * math.sqrt(b * (1.0 - b) / trials)


@dataclass(frozen=True)
class TrialRecord:
    stream_id: int
    model: str
    cardinality: int
    phi: float
    threshold: float
    exceeded: bool
    real_part_abs: float
    imag_part_abs: float


@dataclass
class ExperimentSummary:
    experiment: str
    params: dict
    trials: int
    exceed_count: int
    empirical_prob: float
    theoretical_bound: float
    passed: bool
    wall_time: float
    master_seed: int
    slack: float = 0.0
    version: str = __version__
    details: dict = field(default_factory=dict)
    trial_data: dict = field(default=None, repr=False)

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "version": self.version,
            "master_seed": self.master_seed,
            "params": self.params,
            "trials": self.trials,
            "exceed_count": self.exceed_count,
            "empirical_prob": self.empirical_prob,
            "theoretical_bound": self.theoretical_bound,
            "slack": self.slack,
            "pass": self.passed,
            "wall_time": self.wall_time,
            "details": self.details,
        }

    def records(self):
        """Per-trial records in stream order (empty if none were kept)."""
        data = self.trial_data
        if not data:
            return
        for k in range(len(data["stream_id"])):
            yield TrialRecord(
                stream_id=int(data["stream_id"][k]),
                model=data["model"],
                cardinality=int(data["cardinality"][k]),
                phi=float(data["phi"][k]),
                threshold=float(data["threshold"]),
                exceeded=bool(data["exceeded"][k]),
                real_part_abs=float(data["real_part_abs"][k]),
                imag_part_abs=float(data["imag_part_abs"][k]),
            )


@dataclass
class ExpectationReport:
    params: dict
    trials: int
    mean_coeff: complex
    mean_coeff_slack: float
    mean_sq_modulus: float
    expected_sq_modulus: float
    sq_modulus_stderr: float
    passed: bool
    wall_time: float
    master_seed: int
    version: str = __version__
    experiment: str = "expectation"

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "version": self.version,
            "master_seed": self.master_seed,
            "params": self.params,
            "trials": self.trials,
            "mean_coeff_real": self.mean_coeff.real,
            "mean_coeff_imag": self.mean_coeff.imag,
            "mean_coeff_abs": abs(self.mean_coeff),
            "mean_coeff_slack": self.mean_coeff_slack,
            "mean_sq_modulus": self.mean_sq_modulus,
            "expected_sq_modulus": self.expected_sq_modulus,
            "sq_modulus_stderr": self.sq_modulus_stderr,
            "pass": self.passed,
            "wall_time": self.wall_time,
        }


def _check_trials(trials):
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)):
        raise InputError(f"trials must be an integer, got {trials!r}")
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    if trials > MAX_TRIALS:
        raise ResourceError(f"trials = {trials} exceeds the limit {MAX_TRIALS}")


def _check_jobs(jobs):
    if jobs is None:
        return 1
    if jobs < 1:
        raise InputError(f"jobs must be >= 1, got {jobs}")
    return int(jobs)


def _probe(space, probe_xi):
    xi = 1 if probe_xi is None else _frequency_index(space, probe_xi)
    if xi == 0:
        raise InputError("probe frequency must be nonzero")
    return xi


def _simulate_chunk(task):
    p, d, model, param, master_seed, start, stop, probe = task
    space = SpaceParams(p, d)
    ids = range(start, stop)
    if model == "percolation":
        rows = bernoulli_rows(space, param, master_seed, ids)
    else:
        rows = uniform_rows(space, param, master_seed, ids)
    coeffs = dft_batch(rows, space)
    phi, _ = phi_from_coeffs(coeffs)
    return {
        "cardinality": rows.sum(axis=1),
        "phi": phi,
        "probe": coeffs[:, probe],
    }


def _simulate(space, model, param, trials, master_seed, probe, jobs):
    """Per-trial arrays in stream order, computed chunk by chunk."""
    if trials * space.n > TRIAL_POINT_BUDGET:
        raise ResourceError(
            f"{trials} trials on {space.n} points exceeds the trial budget"
        )
    tasks = [
        (space.p, space.d, model, param, master_seed, s, min(s + CHUNK, trials), probe)
        for s in range(0, trials, CHUNK)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            parts = list(pool.map(_simulate_chunk, tasks))
    else:
        parts = [_simulate_chunk(t) for t in tasks]
    out = {k: np.concatenate([part[k] for part in parts]) for k in parts[0]}
    out["stream_id"] = np.arange(trials)
    return out


def _trial_data(sim, model, threshold):
    exceeded = sim["phi"] >= threshold if not math.isnan(threshold) else None
    return {
        "stream_id": sim["stream_id"],
        "model": model,
        "cardinality": sim["cardinality"],
        "phi": sim["phi"],
        "threshold": threshold,
        "exceeded": (
            exceeded if exceeded is not None else np.zeros(len(sim["phi"]), bool)
        ),
        "real_part_abs": np.abs(sim["probe"].real),
        "imag_part_abs": np.abs(sim["probe"].imag),
    }


def _summary(name, params, trials, count, bound, master_seed, t0, details, data):
    emp = count / trials
    slack = stat_slack(bound, trials)
    return ExperimentSummary(
        experiment=name,
        params=params,
        trials=trials,
        exceed_count=int(count),
        empirical_prob=emp,
        theoretical_bound=bound,
        passed=bool(emp <= bound + slack),
        wall_time=time.perf_counter() - t0,
        master_seed=master_seed,
        slack=slack,
        details=details,
        trial_data=data,
    )


def percolation_tail_experiment(
    space, delta, epsilon, trials, master_seed, probe_xi=None, jobs=1
):
    """Frequency of phi(E) >= main_threshold against the 4 n**-eps bound."""
    t0 = time.perf_counter()
    _check_trials(trials)
    jobs = _check_jobs(jobs)
    probe = _probe(space, probe_xi)
    threshold = main_threshold(space.n, delta, epsilon)
    bound = failure_prob_bound(space.n, epsilon)
    sim = _simulate(space, "percolation", delta, trials, master_seed, probe, jobs)
    data = _trial_data(sim, "percolation", threshold)
    lam = proof_lambda(space.n, delta, epsilon)
    details = {
        "threshold": threshold,
        "alpha": proof_alpha(space.n, delta, epsilon),
        "lambda": lam,
        "lambda_valid": lam <= 1.0,
        "max_phi": float(sim["phi"].max()),
        "mean_phi": float(sim["phi"].mean()),
    }
    params = {"p": space.p, "d": space.d, "delta": delta, "epsilon": epsilon,
              "probe_xi": probe}
    return _summary("percolation", params, trials, int(data["exceeded"].sum()),
                    bound, master_seed, t0, details, data)


def uniform_tail_experiment(
    space, m, epsilon, trials, master_seed, constant=4.0, probe_xi=None, jobs=1
):
    """Frequency of phi(E) >= hayes_threshold for uniform m-subsets.

    The decay ``n**-eps`` comes with an unspecified constant, so the check is
    against ``constant * n**-eps`` and the implied constant is reported.
    """
    t0 = time.perf_counter()
    _check_trials(trials)
    jobs = _check_jobs(jobs)
    probe = _probe(space, probe_xi)
    threshold = hayes_threshold(m, space.n, epsilon)
    decay = space.n ** (-epsilon)
    sim = _simulate(space, "uniform-m", m, trials, master_seed, probe, jobs)
    data = _trial_data(sim, "uniform-m", threshold)
    count = int(data["exceeded"].sum())
    details = {
        "threshold": threshold,
        "decay": decay,
        "constant": constant,
        "implied_constant": (count / trials) / decay,
        "max_phi": float(sim["phi"].max()),
        "mean_phi": float(sim["phi"].mean()),
    }
    params = {"p": space.p, "d": space.d, "m": m, "epsilon": epsilon,
              "probe_xi": probe}
    return _summary("uniform", params, trials, count, constant * decay,
                    master_seed, t0, details, data)


def real_imag_tail_experiment(
    space, delta, epsilon, trials, probe_xi, master_seed, jobs=1
):
    """Tails of |Re F(xi)| and |Im F(xi)| at level alpha against 2 n**-(1+eps).

    Top-level counts refer to the real part; the imaginary part is under
    ``details["imag"]``. ``passed`` requires both.
    """
    t0 = time.perf_counter()
    _check_trials(trials)
    jobs = _check_jobs(jobs)
    probe = _probe(space, probe_xi)
    alpha = proof_alpha(space.n, delta, epsilon)
    bound = per_part_tail_bound(space.n, epsilon)
    sim = _simulate(space, "percolation", delta, trials, master_seed, probe, jobs)
    data = _trial_data(sim, "percolation", main_threshold(space.n, delta, epsilon))
    re_count = int((data["real_part_abs"] >= alpha).sum())
    im_count = int((data["imag_part_abs"] >= alpha).sum())
    slack = stat_slack(bound, trials)
    im_prob = im_count / trials
    pooled = (re_count + im_count) / (2 * trials)
    se = math.sqrt(2 * pooled * (1 - pooled) / trials)
    lam = proof_lambda(space.n, delta, epsilon)
    details = {
        "alpha": alpha,
        "lambda": lam,
        "lambda_valid": lam <= 1.0,
        "imag": {
            "exceed_count": im_count,
            "empirical_prob": im_prob,
            "pass": bool(im_prob <= bound + slack),
        },
        # two-proportion z statistic for the Re/Im tail symmetry
        "symmetry_z": 0.0 if se == 0 else (re_count - im_count) / trials / se,
    }
    params = {"p": space.p, "d": space.d, "delta": delta, "epsilon": epsilon,
              "probe_xi": probe}
    summary = _summary("tail", params, trials, re_count, bound, master_seed, t0,
                       details, data)
    summary.passed = summary.passed and details["imag"]["pass"]
    return summary


def expectation_identity_experiment(
    space, delta, trials, probe_xi, master_seed, jobs=1
):
    """Empirical mean of F(xi) and |F(xi)|^2 against 0 and n delta (1 - delta)."""
    t0 = time.perf_counter()
    _check_trials(trials)
    jobs = _check_jobs(jobs)
    probe = _probe(space, probe_xi)
    sim = _simulate(space, "percolation", delta, trials, master_seed, probe, jobs)
    vals = sim["probe"]
    sq = np.abs(vals) ** 2
    mean = complex(vals.mean())
    mean_sq = float(sq.mean())
    stderr = float(sq.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    expected = space.n * delta * (1.0 - delta)
    mean_slack = 3.0 * math.sqrt(space.n * delta / trials)
    passed = abs(mean) <= mean_slack and abs(mean_sq - expected) <= 3.0 * stderr
    return ExpectationReport(
        params={"p": space.p, "d": space.d, "delta": delta, "probe_xi": probe},
        trials=trials,
        mean_coeff=mean,
        mean_coeff_slack=mean_slack,
        mean_sq_modulus=mean_sq,
        expected_sq_modulus=expected,
        sq_modulus_stderr=stderr,
        passed=bool(passed),
        wall_time=time.perf_counter() - t0,
        master_seed=master_seed,
    )


def size_concentration_experiment(space, delta, trials, master_seed, jobs=1):
    """Frequency of |#E - n delta| >= n delta / 2 against the Chebyshev bound."""
    t0 = time.perf_counter()
    _check_trials(trials)
    jobs = _check_jobs(jobs)
    sim = _simulate(space, "percolation", delta, trials, master_seed, 1, jobs)
    center = space.n * delta
    dev = np.abs(sim["cardinality"] - center)
    count = int((dev >= center / 2.0).sum())
    data = _trial_data(sim, "percolation", math.nan)
    details = {
        "mean_cardinality": float(sim["cardinality"].mean()),
        "var_cardinality": float(sim["cardinality"].var(ddof=1)) if trials > 1 else 0.0,
        "expected_mean": center,
        "expected_var": center * (1.0 - delta),
    }
    params = {"p": space.p, "d": space.d, "delta": delta}
    return _summary("size", params, trials, count,
                    chebyshev_size_bound(space.n, delta), master_seed, t0, details,
                    data)


@dataclass(frozen=True)
class VariableSpec:
    """Family of independent summands with |X_j| <= 1.

    ``rademacher``: X_j = +-1.
    ``bernoulli``: X_j = (B_j - q) / max(q, 1 - q) with B_j ~ Bernoulli(q).
    ``cosine``: X_x = E(x) cos(2 pi x.xi / p) over all x in F_p^d, with E a
    percolation sample of density ``delta``; N is then p**d.
    """

    family: str
    N: int = 1
    q: float = 0.5
    p: int = 7
    d: int = 2
    delta: float = 0.3
    xi: int = 1

    def __post_init__(self):
        if self.family not in ("rademacher", "bernoulli", "cosine"):
            raise InputError(f"unknown variable family {self.family!r}")
        if self.family == "cosine":
            object.__setattr__(self, "N", self.p ** self.d)
            if not 0.0 < self.delta < 1.0:
                raise InputError(f"delta must lie in (0, 1), got {self.delta}")
        elif self.N < 1:
            raise InputError(f"N must be >= 1, got {self.N}")
        if self.family == "bernoulli" and not 0.0 < self.q < 1.0:
            raise InputError(f"q must lie in (0, 1), got {self.q}")

    def moments(self):
        """``(mu1, mu2)``: sums of first and second moments."""
        if self.family == "rademacher":
            return 0.0, float(self.N)
        if self.family == "bernoulli":
            s = max(self.q, 1.0 - self.q)
            return 0.0, self.N * self.q * (1.0 - self.q) / (s * s)
        c = self._cosines()
        return self.delta * float(c.sum()), self.delta * float((c * c).sum())

    def _cosines(self):
        space = SpaceParams(self.p, self.d)
        return character_table(self.p)[dot_row(space, self.xi)].real


def _lemma_chunk(task):
    spec, master_seed, chunk_index, size = task
    if spec.family == "cosine":
        space = SpaceParams(spec.p, spec.d)
        start = chunk_index * CHUNK
        rows = bernoulli_rows(space, spec.delta, master_seed, range(start, start + size))
        return rows @ spec._cosines()
    rng = make_rng(SeedSpec(master_seed, chunk_index))
    if spec.family == "rademacher":
        return 2.0 * rng.binomial(spec.N, 0.5, size=size) - spec.N
    s = max(spec.q, 1.0 - spec.q)
    return (rng.binomial(spec.N, spec.q, size=size) - spec.N * spec.q) / s


def lemma_oracle_experiment(N, variable_spec, alpha, lam, trials, master_seed, jobs=1):
    """Empirical P(|sum X_j| >= alpha) against the exponential moment bound.

    Sums for the Rademacher and Bernoulli families are drawn as binomials,
    one random stream per chunk of trials; the cosine family samples the
    underlying point set with one stream per trial.
    """
    t0 = time.perf_counter()
    _check_trials(trials)
    jobs = _check_jobs(jobs)
    spec = variable_spec
    if spec.family != "cosine" and N != spec.N:
        spec = VariableSpec(spec.family, N=N, q=spec.q)
    mu1, mu2 = spec.moments()
    params = DeviationParams(N=spec.N, mu1=mu1, mu2=mu2, alpha=alpha, lam=lam)
    bound = deviation_bound(params)
    tasks = [
        (spec, master_seed, k, min(CHUNK, trials - k * CHUNK))
        for k in range((trials + CHUNK - 1) // CHUNK)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            sums = np.concatenate(list(pool.map(_lemma_chunk, tasks)))
    else:
        sums = np.concatenate([_lemma_chunk(t) for t in tasks])
    count = int((np.abs(sums) >= alpha).sum())
    details = {"mu1": mu1, "mu2": mu2, "vacuous": bound >= 1.0,
               "mean_sum": float(sums.mean())}
    run_params = {"family": spec.family, "N": spec.N, "alpha": alpha, "lambda": lam}
    if spec.family == "bernoulli":
        run_params["q"] = spec.q
    if spec.family == "cosine":
        run_params.update(p=spec.p, d=spec.d, delta=spec.delta, xi=spec.xi)
    return _summary("lemma", run_params, trials, count, bound, master_seed, t0,
                    details, None)
