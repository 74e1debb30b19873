"""Monte Carlo realization of the measure-and-resend protocol.

Each run prepares one state from the ensemble, measures it with the
scenario's POVM, resends the identified state, and verifies it against the
original with a projective check.  A trial is N such runs; its fidelity is
the fraction of runs that pass verification.

Randomness is counter based: the uniform consumed by (trial, run, stage)
sits at a fixed position in a Philox stream keyed by (seed, n_runs) and a
block counter, so any number of worker threads produces bit-identical
results.  An exact dynamic-programming oracle over the pass-count
distribution covers small N without sampling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discrimination import born_matrix
from .errors import BudgetExceededError, PreconditionError
from .scenarios import Scenario
from .stats import classical_fidelity

_U64 = (1 << 64) - 1

#: Trials per sampling block; fixed so results never depend on worker count.
_MAX_BLOCK_TRIALS = 32_768

#: Upper bound on uniforms drawn per block (keeps block memory modest).
_BLOCK_VALUE_BUDGET = 4_000_000

#: Elementary-operation budget for the exact pass-count oracle.
_EXACT_OPS_BUDGET = 20_000_000


@dataclass(frozen=True, eq=False)
class SimConfig:
    """One experiment: ``n_trials`` independent repetitions of N runs.

    ``n_runs`` must be a multiple of the ensemble size; by default each
    state is prepared exactly ``n_runs / a`` times (preparation-count
    fluctuations neglected).  Setting ``multinomial_preparation`` samples
    each run's state from the priors instead, a sensitivity mode that goes
    beyond that fixed-schedule assumption.
    """

    scenario: Scenario
    n_runs: int
    n_trials: int
    seed: int
    multinomial_preparation: bool = False

    def __post_init__(self):
        a = self.scenario.ensemble.size
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be positive, got {self.n_runs}")
        if self.n_runs % a != 0:
            raise PreconditionError(
                f"n_runs must be a multiple of the ensemble size {a}, "
                f"got {self.n_runs}"
            )
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be positive, got {self.n_trials}")
        if not 0 <= self.seed <= _U64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.multinomial_preparation and not self.scenario.ensemble.has_uniform_priors(tol=1e-9):
            raise PreconditionError(
                "the fixed preparation schedule requires uniform priors; "
                "enable multinomial_preparation for non-uniform ensembles"
            )


@dataclass(frozen=True, eq=False)
class TrialTally:
    """Counting record of one trial.

    ``prepared_counts[i]`` is how often state i was prepared,
    ``outcome_counts[i, k]`` how often measuring state i produced outcome k,
    and ``pass_counts[i, k]`` how many of those runs passed verification.
    """

    prepared_counts: np.ndarray
    outcome_counts: np.ndarray
    pass_counts: np.ndarray

    def validate(self, n_runs: int) -> None:
        if int(self.prepared_counts.sum()) != n_runs:
            raise AssertionError("prepared counts do not sum to n_runs")
        if not np.array_equal(self.outcome_counts.sum(axis=1), self.prepared_counts):
            raise AssertionError("outcome counts do not sum to prepared counts")
        if np.any(self.pass_counts > self.outcome_counts):
            raise AssertionError("pass counts exceed outcome counts")
        if np.any(self.prepared_counts < 0) or np.any(self.outcome_counts < 0):
            raise AssertionError("negative counts")


@dataclass(frozen=True, eq=False)
class SimReport:
    """Aggregate of an experiment; tally matrices are summed over trials."""

    fidelities: np.ndarray
    mean_fidelity: float
    exceedance_count: int
    threshold: float
    n_runs: int
    n_trials: int
    seed: int
    prepared_counts: np.ndarray
    outcome_counts: np.ndarray
    pass_counts: np.ndarray
    pass_count_histogram: np.ndarray

    @property
    def exceedance_frequency(self) -> float:
        return self.exceedance_count / self.n_trials


@dataclass(frozen=True)
class LlnRow:
    """Deviation statistics of the trial fidelity around its mean at one N."""

    n_runs: int
    mean_fidelity: float
    mean_abs_deviation: float
    rms_deviation: float


def stream(seed: int, subkey: int = 0, block: int = 0) -> np.random.Generator:
    """Deterministic Philox stream for (seed, subkey) at a block offset.

    Blocks are separated by 2**128 counter steps, so streams with different
    block indices never overlap.
    """
    bits = np.random.Philox(
        key=[seed & _U64, subkey & _U64], counter=[0, 0, block & _U64, 0]
    )
    return np.random.Generator(bits)


def _protocol_tables(scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative outcome probabilities and verification pass probabilities.

    Row i of the first table is the cumulative Born distribution of outcomes
    for prepared state i, with the final entry pinned to 1.  Entry (i, k) of
    the second is the probability that resent state k passes verification
    against state i; the diagonal is pinned to 1 because resending the
    correct state always passes.
    """
    born = born_matrix(scenario.ensemble, scenario.povm)
    born = np.clip(born, 0.0, None)
    cum = np.cumsum(born, axis=1)
    cum[:, -1] = 1.0
    pass_prob = np.clip(scenario.ensemble.overlap_matrix(), 0.0, 1.0)
    np.fill_diagonal(pass_prob, 1.0)
    return cum, pass_prob


def _consume_block(
    uniforms: np.ndarray,
    born_cum: np.ndarray,
    pass_prob: np.ndarray,
    prior_cum: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Turn a (trials, runs, stages) uniform block into passes and tallies."""
    a = born_cum.shape[0]
    n_block, n_runs = uniforms.shape[0], uniforms.shape[1]
    passes = np.zeros(n_block, dtype=np.int64)
    prepared = np.zeros(a, dtype=np.int64)
    outcomes = np.zeros((a, a), dtype=np.int64)
    passed_counts = np.zeros((a, a), dtype=np.int64)

    if prior_cum is None:
        # Fixed schedule: state i occupies runs [i*n, (i+1)*n) of every trial.
        per_state = n_runs // a
        for i in range(a):
            sl = slice(i * per_state, (i + 1) * per_state)
            u_out = uniforms[:, sl, 0]
            u_ver = uniforms[:, sl, 1]
            k = np.searchsorted(born_cum[i], u_out.ravel(), side="right")
            np.minimum(k, a - 1, out=k)
            k = k.reshape(u_out.shape)
            ok = u_ver < pass_prob[i, k]
            passes += ok.sum(axis=1)
            prepared[i] += n_block * per_state
            outcomes[i] += np.bincount(k.ravel(), minlength=a)
            passed_counts[i] += np.bincount(k[ok], minlength=a)
    else:
        state = np.searchsorted(prior_cum, uniforms[:, :, 0].ravel(), side="right")
        np.minimum(state, a - 1, out=state)
        state = state.reshape(n_block, n_runs)
        ok_all = np.zeros((n_block, n_runs), dtype=bool)
        for i in range(a):
            mask = state == i
            u_out = uniforms[:, :, 1][mask]
            k = np.searchsorted(born_cum[i], u_out, side="right")
            np.minimum(k, a - 1, out=k)
            ok = uniforms[:, :, 2][mask] < pass_prob[i, k]
            ok_all[mask] = ok
            prepared[i] += int(mask.sum())
            outcomes[i] += np.bincount(k, minlength=a)
            passed_counts[i] += np.bincount(k[ok], minlength=a)
        passes += ok_all.sum(axis=1)
    return passes, prepared, outcomes, passed_counts


def run_trial(
    scenario: Scenario, n_runs: int, rng: np.random.Generator
) -> tuple[TrialTally, float]:
    """Simulate one N-run trial on an explicit random stream.

    Uses the fixed preparation schedule (exactly ``n_runs / a`` runs per
    state).  The same stream state always yields the same tally and
    fidelity.
    """
    a = scenario.ensemble.size
    if n_runs < 1 or n_runs % a != 0:
        raise PreconditionError(
            f"n_runs must be a positive multiple of the ensemble size {a}, "
            f"got {n_runs}"
        )
    if not scenario.ensemble.has_uniform_priors(tol=1e-9):
        raise PreconditionError(
            "the fixed preparation schedule requires uniform priors"
        )
    born_cum, pass_prob = _protocol_tables(scenario)
    uniforms = rng.random((1, n_runs, 2))
    passes, prepared, outcomes, passed = _consume_block(
        uniforms, born_cum, pass_prob, None
    )
    tally = TrialTally(prepared, outcomes, passed)
    return tally, float(passes[0]) / n_runs


def _block_layout(cfg: SimConfig) -> tuple[int, int, int]:
    stages = 3 if cfg.multinomial_preparation else 2
    block_trials = max(
        1, min(_MAX_BLOCK_TRIALS, _BLOCK_VALUE_BUDGET // (stages * cfg.n_runs))
    )
    n_blocks = -(-cfg.n_trials // block_trials)
    return stages, block_trials, n_blocks


def _simulate_passes(cfg: SimConfig, workers: int):
    """Pass counts per trial plus aggregated tallies, block by block."""
    born_cum, pass_prob = _protocol_tables(cfg.scenario)
    prior_cum = None
    if cfg.multinomial_preparation:
        prior_cum = np.cumsum(cfg.scenario.ensemble.priors)
        prior_cum[-1] = 1.0
    stages, block_trials, n_blocks = _block_layout(cfg)

    def one_block(b: int):
        lo = b * block_trials
        hi = min(cfg.n_trials, lo + block_trials)
        g = stream(cfg.seed, subkey=cfg.n_runs, block=b)
        uniforms = g.random((hi - lo, cfg.n_runs, stages))
        return _consume_block(uniforms, born_cum, pass_prob, prior_cum)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_block, range(n_blocks)))
    else:
        results = [one_block(b) for b in range(n_blocks)]

    passes = np.concatenate([r[0] for r in results])
    a = cfg.scenario.ensemble.size
    prepared = np.zeros(a, dtype=np.int64)
    outcomes = np.zeros((a, a), dtype=np.int64)
    passed = np.zeros((a, a), dtype=np.int64)
    for r in results:
        prepared += r[1]
        outcomes += r[2]
        passed += r[3]
    return passes, prepared, outcomes, passed


def run_experiment(cfg: SimConfig, threshold: float, workers: int = 1) -> SimReport:
    """Run ``cfg.n_trials`` independent trials and count threshold exceedances.

    Output is fully determined by ``cfg`` and ``threshold``; the worker
    count only changes how blocks are scheduled.
    """
    passes, prepared, outcomes, passed = _simulate_passes(cfg, workers)
    fidelities = passes / cfg.n_runs
    fidelities.setflags(write=False)
    return SimReport(
        fidelities=fidelities,
        mean_fidelity=float(fidelities.mean()),
        exceedance_count=int(np.count_nonzero(fidelities >= threshold)),
        threshold=float(threshold),
        n_runs=cfg.n_runs,
        n_trials=cfg.n_trials,
        seed=cfg.seed,
        prepared_counts=prepared,
        outcome_counts=outcomes,
        pass_counts=passed,
        pass_count_histogram=np.bincount(passes, minlength=cfg.n_runs + 1),
    )


def run_pass_probabilities(scenario: Scenario) -> np.ndarray:
    """Per-state probability that a single run passes verification.

    ``q_i = sum_k B[i, k] * pass_prob[i, k]`` with the diagonal pass
    probability pinned to 1; a run is a Bernoulli(q_i) event once the
    intermediate outcome is marginalized out.
    """
    born_cum, pass_prob = _protocol_tables(scenario)
    born = np.diff(born_cum, axis=1, prepend=0.0)
    q = (born * pass_prob).sum(axis=1)
    return np.clip(q, 0.0, 1.0)


def pass_count_distribution(scenario: Scenario, n_runs: int) -> np.ndarray:
    """Exact distribution of the number of passing runs in a trial.

    Convolves one Bernoulli(q_i) factor per run under the fixed schedule.
    Cost grows quadratically with ``n_runs``; beyond the work budget a
    ``BudgetExceededError`` points the caller at the Monte Carlo path.
    """
    a = scenario.ensemble.size
    if n_runs < 1 or n_runs % a != 0:
        raise PreconditionError(
            f"n_runs must be a positive multiple of the ensemble size {a}, "
            f"got {n_runs}"
        )
    if not scenario.ensemble.has_uniform_priors(tol=1e-9):
        raise PreconditionError("the exact oracle requires uniform priors")
    if n_runs * (n_runs + 1) > _EXACT_OPS_BUDGET:
        raise BudgetExceededError(
            f"exact enumeration at n_runs={n_runs} exceeds the work budget; "
            "use the Monte Carlo simulator instead"
        )
    q = run_pass_probabilities(scenario)
    dist = np.zeros(n_runs + 1)
    dist[0] = 1.0
    per_state = n_runs // a
    for i in range(a):
        qi = float(q[i])
        for _ in range(per_state):
            dist[1:] = dist[1:] * (1.0 - qi) + dist[:-1] * qi
            dist[0] *= 1.0 - qi
    return dist


def exact_exceedance(scenario: Scenario, n_runs: int, threshold: float) -> float:
    """Exact probability that a trial's fidelity reaches ``threshold``."""
    dist = pass_count_distribution(scenario, n_runs)
    s_min = math.ceil(threshold * n_runs - 1e-9)
    if s_min <= 0:
        return 1.0
    if s_min > n_runs:
        return 0.0
    return float(dist[s_min:].sum())


def lln_sweep(
    scenario: Scenario,
    n_values,
    n_trials: int,
    seed: int,
    workers: int = 1,
) -> list[LlnRow]:
    """Deviation of the trial fidelity from its infinite-N value per N.

    Every N in ``n_values`` must be a multiple of the ensemble size.  The
    RMS column shrinks like 1/sqrt(N), which a log-log fit over a geometric
    ladder exposes as a slope near -1/2.
    """
    f_th = classical_fidelity(scenario.ensemble, scenario.povm)
    rows = []
    for n_runs in n_values:
        cfg = SimConfig(
            scenario=scenario, n_runs=int(n_runs), n_trials=n_trials, seed=seed
        )
        passes, _, _, _ = _simulate_passes(cfg, workers)
        fidelities = passes / cfg.n_runs
        dev = fidelities - f_th
        rows.append(
            LlnRow(
                n_runs=cfg.n_runs,
                mean_fidelity=float(fidelities.mean()),
                mean_abs_deviation=float(np.abs(dev).mean()),
                rms_deviation=float(np.sqrt(np.mean(dev * dev))),
            )
        )
    return rows


def rms_loglog_slope(rows: list[LlnRow]) -> float:
    """Least-squares slope of log10(rms deviation) against log10(N)."""
    if len(rows) < 2:
        raise ValueError("need at least two ladder points to fit a slope")
    x = np.log10([row.n_runs for row in rows])
    y = np.log10([row.rms_deviation for row in rows])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
