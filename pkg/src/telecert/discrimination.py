"""Measurement strategies for identifying which state was prepared.

Two strategies are provided: the square-root measurement, defined for any
ensemble whose average state supports every member, and the two-outcome
Helstrom projectors, which achieve the minimum discrimination error for a
pair of pure states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .ensembles import Ensemble
from .errors import PreconditionError

#: Entrywise tolerance on the resolution of the identity.
RESOLUTION_TOL = 1e-10

#: Smallest admissible eigenvalue of a POVM element.
PSD_TOL = -1e-10


@dataclass(frozen=True, eq=False)
class Povm:
    """A positive operator valued measure with one outcome per state.

    ``elements`` has shape (a, d, d); each element is Hermitian positive
    semidefinite and the elements sum to the identity.
    """

    elements: np.ndarray

    def __post_init__(self):
        elements = np.array(self.elements, dtype=complex)
        if elements.ndim != 3 or elements.shape[1] != elements.shape[2]:
            raise ValueError(
                f"elements must have shape (a, d, d), got {elements.shape}"
            )
        d = elements.shape[1]
        for k, el in enumerate(elements):
            if not linalg.is_hermitian(el):
                raise ValueError(f"element {k} is not Hermitian")
            w, _ = linalg.eigh(el)
            if float(w[0]) < PSD_TOL:
                raise ValueError(
                    f"element {k} is not positive semidefinite "
                    f"(smallest eigenvalue {w[0]:.3e})"
                )
        dev = float(np.max(np.abs(elements.sum(axis=0) - np.eye(d))))
        if dev > RESOLUTION_TOL:
            raise ValueError(
                f"elements do not resolve the identity (max deviation {dev:.3e})"
            )
        elements.setflags(write=False)
        object.__setattr__(self, "elements", elements)

    @property
    def n_outcomes(self) -> int:
        return self.elements.shape[0]

    @property
    def dim(self) -> int:
        return self.elements.shape[1]


def _check_match(ensemble: Ensemble, povm: Povm) -> None:
    if povm.dim != ensemble.dim:
        raise ValueError(
            f"dimension mismatch: ensemble d={ensemble.dim}, povm d={povm.dim}"
        )
    if povm.n_outcomes != ensemble.size:
        raise ValueError(
            f"outcome count {povm.n_outcomes} does not match "
            f"ensemble size {ensemble.size}"
        )


def square_root_povm(ensemble: Ensemble, null_tol: float = linalg.NULL_TOL) -> Povm:
    """Square-root measurement for ``ensemble``.

    Element ``k`` is ``p_k * r |psi_k><psi_k| r`` where ``r`` is the
    pseudo-inverse square root of the average state.  With uniform priors
    this reduces to the familiar ``(1/a) r |psi_k><psi_k| r`` form.  If the
    ensemble spans only a subspace, the orthogonal complement is split
    uniformly across the outcomes so the elements resolve the identity;
    ensemble states have no weight there, so no outcome probability changes.
    """
    rho = ensemble.average_state()
    r = linalg.inv_sqrt(rho, null_tol=null_tol)
    support = r @ rho @ r  # projector onto the support of rho
    for i, psi in enumerate(ensemble.states):
        residual = float(np.linalg.norm(support @ psi - psi))
        if residual > 1e-8:
            raise PreconditionError(
                f"state {i} lies outside the support of the average state "
                f"(residual {residual:.3e}); the square-root measurement "
                "is undefined for it"
            )
    elements = np.array(
        [
            p * (r @ linalg.projector(psi) @ r)
            for p, psi in zip(ensemble.priors, ensemble.states)
        ]
    )
    complement = np.eye(ensemble.dim) - support
    if float(np.max(np.abs(complement))) > RESOLUTION_TOL:
        elements = elements + complement / ensemble.size
    # Symmetrize away roundoff so the Povm invariants hold at full strictness.
    elements = (elements + elements.conj().transpose(0, 2, 1)) / 2.0
    return Povm(elements)


def helstrom_povm(theta: float) -> Povm:
    """Minimum-error projectors for the two-state ensemble at angle ``theta``.

    The projectors are onto the orthonormal pair that straddles the two
    states symmetrically; their discrimination error is
    ``(1 - sin(theta/2)) / 2``, the two-state optimum.
    """
    if not 0.0 < theta <= math.pi:
        raise ValueError(f"theta must lie in (0, pi], got {theta!r}")
    half = (math.pi - theta) / 4.0
    phi1 = np.array([math.cos(half), -math.sin(half)], dtype=complex)
    phi2 = np.array([math.sin(half), math.cos(half)], dtype=complex)
    return Povm(np.array([linalg.projector(phi1), linalg.projector(phi2)]))


def born_matrix(ensemble: Ensemble, povm: Povm) -> np.ndarray:
    """Outcome probabilities ``B[i, k] = <psi_i| element_k |psi_i>``."""
    _check_match(ensemble, povm)
    b = np.einsum(
        "id,kde,ie->ik", ensemble.states.conj(), povm.elements, ensemble.states
    )
    return b.real


def error_probability(ensemble: Ensemble, povm: Povm) -> float:
    """Probability that the measurement misidentifies the prepared state."""
    b = born_matrix(ensemble, povm)
    off_diagonal = b.sum(axis=1) - np.diag(b)
    return float(ensemble.priors @ off_diagonal)
