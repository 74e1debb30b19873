import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from telecert import linalg
from telecert.ensembles import four_asymmetric, qubit_mubs, trine
from telecert.errors import PreconditionError


def eig2x2_oracle(h):
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.

    Roots of the characteristic polynomial lam^2 - tr*lam + det.
    """
    tr = h[0, 0].real + h[1, 1].real
    det = h[0, 0].real * h[1, 1].real - abs(h[0, 1]) ** 2
    disc = math.sqrt(max(tr * tr / 4.0 - det, 0.0))
    return tr / 2.0 - disc, tr / 2.0 + disc


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2.0


class TestInnerProduct:
    def test_orthonormal_basis(self):
        e0 = np.array([1, 0], complex)
        assert linalg.inner_product(e0, e0) == 1.0

    def test_trine_pair_overlap(self):
        # hand evaluation: <0|(|0> - sqrt(3)|1>)/2 = 1/2
        states = trine().states
        ip = linalg.inner_product(states[0], states[1])
        assert_allclose(ip, 0.5, atol=1e-15)
        assert_allclose(abs(ip) ** 2, 0.25, atol=1e-15)

    def test_qubit_mub_cross_basis_overlap(self):
        states = qubit_mubs().states
        # bases are {0,1}, {2,3}, {4,5}; any cross-basis pair has |ip|^2 = 1/2
        for i in (0, 1):
            for k in (2, 3, 4, 5):
                ip = linalg.inner_product(states[i], states[k])
                assert_allclose(abs(ip) ** 2, 0.5, atol=1e-12)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            d = rng.integers(2, 5)
            u = rng.normal(size=d) + 1j * rng.normal(size=d)
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            assert_allclose(
                linalg.inner_product(u, v),
                np.conj(linalg.inner_product(v, u)),
                atol=1e-12,
            )

    def test_self_inner_product_nonnegative(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            u = rng.normal(size=3) + 1j * rng.normal(size=3)
            val = linalg.inner_product(u, u)
            assert abs(val.imag) < 1e-12
            assert val.real >= 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            linalg.inner_product(np.ones(2), np.ones(3))


class TestEigh:
    def test_identity(self):
        w, _ = linalg.eigh(np.eye(2))
        assert_allclose(w, [1.0, 1.0])

    def test_diagonal(self):
        w, _ = linalg.eigh(np.diag([0.25, 0.75]))
        assert_allclose(w, [0.25, 0.75])

    def test_four_asymmetric_average_state_vs_closed_form(self):
        rho = four_asymmetric().average_state()
        w, _ = linalg.eigh(rho)
        lo, hi = eig2x2_oracle(rho)
        assert_allclose(w, [lo, hi], atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_reconstruction_and_orthonormality(self, d):
        rng = np.random.default_rng(100 + d)
        for _ in range(60):
            h = random_hermitian(rng, d)
            w, v = linalg.eigh(h)
            assert np.all(np.diff(w) >= 0)
            assert np.max(np.abs((v * w) @ v.conj().T - h)) < 1e-10
            assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-10

    def test_random_2x2_matches_closed_form(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            h = random_hermitian(rng, 2)
            w, _ = linalg.eigh(h)
            assert_allclose(w, eig2x2_oracle(h), atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            linalg.eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            linalg.eigh(np.ones((2, 3)))


class TestInvSqrt:
    def test_qubit_mub_average_state(self):
        # average state I/2 inverts to sqrt(2) * I
        out = linalg.inv_sqrt(np.eye(2) / 2.0)
        assert_allclose(out, math.sqrt(2.0) * np.eye(2), atol=1e-12)

    def test_qutrit_mub_average_state(self):
        out = linalg.inv_sqrt(np.eye(3) / 3.0)
        assert_allclose(out, math.sqrt(3.0) * np.eye(3), atol=1e-12)

    def test_rank_one_projector(self):
        p = np.array([[1.0, 0.0], [0.0, 0.0]], complex)
        assert_allclose(linalg.inv_sqrt(p, null_tol=1e-12), p, atol=1e-12)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(PreconditionError, match="not positive semidefinite"):
            linalg.inv_sqrt(np.diag([1.0, -1e-6]))

    @pytest.mark.parametrize("d", [2, 3])
    def test_sandwich_recovers_support_projector(self, d):
        rng = np.random.default_rng(30 + d)
        for k in range(40):
            g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = g @ g.conj().T
            if k % 3 == 0:
                # make it rank deficient
                w, v = linalg.eigh(h)
                w = w.copy()
                w[0] = 0.0
                h = (v * w) @ v.conj().T
            r = linalg.inv_sqrt(h)
            w, v = linalg.eigh(h)
            support = (v * (w > linalg.NULL_TOL).astype(float)) @ v.conj().T
            assert np.max(np.abs(r @ h @ r - support)) < 1e-9
