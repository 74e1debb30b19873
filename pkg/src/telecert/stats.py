"""Fidelity benchmarks, the finite-run exceedance bound, and normal-model error rates.

The centerpiece is the Hoeffding-type tail bound on the probability that a
strategy without shared entanglement reaches a given fidelity in N runs.
Bound magnitudes span dozens of orders of magnitude across interesting N,
so every bound is computed and reported in base-10 log space; the linear
value is provided as a convenience and is allowed to underflow to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrimination import Povm, born_matrix
from .ensembles import Ensemble
from .errors import PreconditionError

_LN10 = math.log(10.0)


def classical_fidelity(ensemble: Ensemble, povm: Povm) -> float:
    """Average fidelity of the measure-and-resend protocol.

    The prepared state is measured with ``povm``; outcome ``l`` makes the
    receiver resend state ``l``, which then passes verification against the
    original state ``i`` with probability ``|<psi_i|psi_l>|^2``.  The
    returned value is the prior-weighted pass probability for the supplied
    measurement (no optimization over measurements is performed).
    """
    b = born_matrix(ensemble, povm)
    o = ensemble.overlap_matrix()
    return float(np.einsum("i,ik,ik->", ensemble.priors, b, o))


def mu_of(f_th_cla: float, a: int) -> float:
    """Per-variable mean implied by a classical fidelity for ``a`` states."""
    if a < 2:
        raise ValueError(f"a must be at least 2, got {a}")
    if not -1e-9 <= f_th_cla <= 1.0 + 1e-9:
        raise ValueError(f"fidelity must lie in [0, 1], got {f_th_cla!r}")
    return (f_th_cla - 1.0) / (a - 1)


def t_of(f_target: float, f_th_cla: float, a: int) -> float:
    """Per-variable exceedance offset needed to reach ``f_target``."""
    if a < 2:
        raise ValueError(f"a must be at least 2, got {a}")
    if f_target <= f_th_cla:
        raise PreconditionError(
            f"target fidelity {f_target!r} does not exceed the classical "
            f"fidelity {f_th_cla!r}; the exceedance probability is trivially 1"
        )
    return (f_target - f_th_cla) / (a - 1)


@dataclass(frozen=True)
class BoundInput:
    """Everything the specialized exceedance bound consumes.

    ``mu`` is the per-variable mean in (-1, 0), ``t`` the exceedance offset
    with ``0 < t < -mu``, ``a`` the ensemble size, and ``n_runs`` the number
    of experiment repetitions.
    """

    mu: float
    t: float
    a: int
    n_runs: int

    def __post_init__(self):
        if self.a < 2:
            raise ValueError(f"a must be at least 2, got {self.a}")
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be positive, got {self.n_runs}")
        if self.mu == 0.0:
            raise PreconditionError(
                "classical strategy is already perfect (fidelity 1); "
                "no quantum advantage is testable"
            )
        if not -1.0 < self.mu < 0.0:
            raise ValueError(f"mu must lie in (-1, 0], got {self.mu!r}")
        f = 1.0 + (self.a - 1) * self.mu
        if not -1e-9 <= f <= 1.0 + 1e-9:
            raise ValueError(
                f"mu={self.mu!r} with a={self.a} implies a fidelity of {f!r}, "
                "outside [0, 1]"
            )
        if self.t <= 0.0:
            raise PreconditionError(
                f"exceedance offset t must be positive, got {self.t!r}; "
                "for t <= 0 the bound is trivially 1"
            )
        if self.t >= -self.mu:
            raise PreconditionError(
                f"t={self.t!r} is outside the bound's validity range "
                f"0 < t < {-self.mu!r}; the implied target fidelity reaches "
                "or exceeds 1"
            )

    @property
    def f_th_cla(self) -> float:
        return 1.0 + (self.a - 1) * self.mu


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound row; ``bound`` may underflow to 0 by design."""

    f_th_cla: float
    mu: float
    t: float
    a: int
    n_runs: int
    log10_bound: float
    bound: float


def hoeffding_log10_bound(inp: BoundInput) -> float:
    """log10 of the exceedance bound for variables confined to [-1, 0].

    Evaluates ``(a-1) * N * log10[((mu+1)/(mu+1+t))^(mu+1+t)
    * ((mu+t)/mu)^(mu+t)]`` entirely in log space.  Both ``mu`` and
    ``mu + t`` are negative, so the second ratio is positive.  The result is
    finite and nonpositive for every valid input.
    """
    mu, t = inp.mu, inp.t
    term_upper = (mu + 1.0 + t) * math.log((mu + 1.0) / (mu + 1.0 + t))
    term_lower = (mu + t) * math.log((mu + t) / mu)
    return (inp.a - 1) * inp.n_runs * (term_upper + term_lower) / _LN10


def hoeffding_generic(mu_prime: float, t_prime: float, m: int) -> float:
    """log10 of the generic bound for unit-interval variables.

    ``mu_prime`` is the normalized mean in (0, 1) and ``t_prime`` the
    normalized offset with ``0 < t_prime < 1 - mu_prime``; ``m`` is the
    number of independent variables.  The specialized bound above equals
    ``hoeffding_generic(mu + 1, t, (a - 1) * n_runs)`` exactly.
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if not 0.0 < mu_prime < 1.0:
        raise PreconditionError(
            f"normalized mean must lie in (0, 1), got {mu_prime!r}"
        )
    if not 0.0 < t_prime < 1.0 - mu_prime:
        raise PreconditionError(
            f"t'={t_prime!r} is outside the validity range "
            f"0 < t' < {1.0 - mu_prime!r}"
        )
    if m == 0:
        return 0.0
    term_low = (mu_prime + t_prime) * math.log(mu_prime / (mu_prime + t_prime))
    term_high = (1.0 - mu_prime - t_prime) * math.log(
        (1.0 - mu_prime) / (1.0 - mu_prime - t_prime)
    )
    return m * (term_low + term_high) / _LN10


def bound_report(
    f_th_cla: float, f_target: float, a: int, n_runs: int
) -> BoundReport:
    """Evaluate the exceedance bound for one (scenario, target, N) row."""
    mu = mu_of(f_th_cla, a)
    t = t_of(f_target, f_th_cla, a)
    inp = BoundInput(mu=mu, t=t, a=a, n_runs=n_runs)
    log10_bound = hoeffding_log10_bound(inp)
    return BoundReport(
        f_th_cla=f_th_cla,
        mu=mu,
        t=t,
        a=a,
        n_runs=n_runs,
        log10_bound=log10_bound,
        bound=10.0**log10_bound,
    )


def scenario_bound_report(scenario, n_runs: int, f_target: float | None = None):
    """Bound row for a scenario, using its own classical fidelity.

    The finite-run bound relies on the preparer drawing states uniformly,
    so non-uniform priors are rejected.
    """
    ensemble = scenario.ensemble
    if not ensemble.has_uniform_priors(tol=1e-9):
        raise PreconditionError(
            "the finite-run exceedance bound requires uniform priors"
        )
    if f_target is None:
        f_target = scenario.target_fidelity
    f = classical_fidelity(ensemble, scenario.povm)
    return bound_report(f, f_target, ensemble.size, n_runs)


@dataclass(frozen=True)
class HypothesisConfig:
    """Inputs for the normal-approximation hypothesis test.

    ``f_qm`` and ``f_cla`` are the means of the primary (quantum) and
    secondary (classical) hypotheses, ``f_crit`` the decision threshold
    between them, ``sigma`` the per-run standard deviation, and ``n_runs``
    the number of repetitions.  Typical use keeps ``f_cla < f_crit < f_qm``
    strictly; the boundary equalities are admitted for degenerate checks.
    ``sigma`` must be supplied by the caller; for pass/fail verification
    outcomes the per-run standard deviation is at most 1/2, so that value
    is a safe ceiling when nothing better is known.
    """

    f_qm: float
    f_cla: float
    f_crit: float
    sigma: float
    n_runs: int

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be positive, got {self.n_runs}")
        if not self.f_cla <= self.f_crit <= self.f_qm:
            raise ValueError(
                f"critical value {self.f_crit!r} must lie between the "
                f"classical mean {self.f_cla!r} and the quantum mean "
                f"{self.f_qm!r}"
            )


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    ``0.5 * erfc(-x / sqrt(2))`` keeps full relative accuracy in the lower
    tail; absolute error is bounded by roughly 1e-15, far inside the 1e-12
    accuracy this module documents.
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def type_one_error(cfg: HypothesisConfig) -> float:
    """Probability of rejecting the quantum hypothesis when it is true."""
    z = (cfg.f_crit - cfg.f_qm) * math.sqrt(cfg.n_runs) / cfg.sigma
    return normal_cdf(z)


def type_two_error(cfg: HypothesisConfig) -> float:
    """Probability of accepting the quantum hypothesis for a classical box.

    Equals ``1 - normal_cdf(z)``, evaluated as ``normal_cdf(-z)`` to keep
    tail accuracy.
    """
    z = (cfg.f_crit - cfg.f_cla) * math.sqrt(cfg.n_runs) / cfg.sigma
    return normal_cdf(-z)
