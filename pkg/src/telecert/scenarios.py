"""Named experiment configurations: ensemble + strategy + target fidelity.

A scenario pins down everything the bound and the simulator need: which
states are teleported, how the sender discriminates them, and which
experimentally reported fidelity the certification is run against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .discrimination import Povm, helstrom_povm, square_root_povm
from .ensembles import (
    Ensemble,
    four_asymmetric,
    helstrom_pair,
    qubit_mubs,
    qutrit_mubs,
    trine,
)

STRATEGIES = ("square-root", "helstrom", "custom")


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    ensemble: Ensemble
    povm: Povm
    strategy: str
    target_fidelity: float
    target_note: str = ""

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(
                f"strategy must be one of {STRATEGIES}, got {self.strategy!r}"
            )
        if not 0.0 < self.target_fidelity <= 1.0:
            raise ValueError(
                f"target fidelity must lie in (0, 1], got {self.target_fidelity!r}"
            )
        if self.povm.dim != self.ensemble.dim:
            raise ValueError("povm and ensemble dimensions differ")
        if self.povm.n_outcomes != self.ensemble.size:
            raise ValueError("povm outcome count and ensemble size differ")


def trine_scenario() -> Scenario:
    ens = trine()
    return Scenario("trine", ens, square_root_povm(ens), "square-root", 0.865)


def four_asymmetric_scenario() -> Scenario:
    ens = four_asymmetric()
    return Scenario(
        "four-asymmetric", ens, square_root_povm(ens), "square-root", 0.875
    )


def qubit_mubs_scenario() -> Scenario:
    ens = qubit_mubs()
    return Scenario("qubit-mubs", ens, square_root_povm(ens), "square-root", 0.77)


def qutrit_mubs_scenario() -> Scenario:
    ens = qutrit_mubs()
    return Scenario("qutrit-mubs", ens, square_root_povm(ens), "square-root", 0.751)


def helstrom_scenario(theta: float = math.pi / 2.0) -> Scenario:
    # No published target fidelity exists for this pair; 0.98 is a
    # deliberately arbitrary stand-in and is flagged as such.
    return Scenario(
        "helstrom",
        helstrom_pair(theta),
        helstrom_povm(theta),
        "helstrom",
        0.98,
        target_note="target arbitrarily set",
    )


def custom_scenario(
    ensemble: Ensemble,
    target_fidelity: float,
    povm: Povm | None = None,
    name: str = "custom",
) -> Scenario:
    """Wrap a user ensemble into a scenario, defaulting to the square-root POVM."""
    if povm is None:
        return Scenario(
            name, ensemble, square_root_povm(ensemble), "square-root", target_fidelity
        )
    return Scenario(name, ensemble, povm, "custom", target_fidelity)


def builtin_scenarios() -> dict[str, Scenario]:
    """The five built-in certification scenarios, keyed by name."""
    scenarios = [
        trine_scenario(),
        four_asymmetric_scenario(),
        qubit_mubs_scenario(),
        qutrit_mubs_scenario(),
        helstrom_scenario(),
    ]
    return {s.name: s for s in scenarios}
