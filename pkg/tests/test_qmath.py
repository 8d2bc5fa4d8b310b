import numpy as np
import pytest

from thermosup import qmath
from thermosup.qmath import (
    check_conditional_state,
    check_density_matrix,
    check_state_vector,
    condition_on_factor,
    dagger,
    eigvals_hermitian,
    embed_operator,
    fidelity,
    is_unitary,
    kron,
    matmul,
    partial_trace,
    random_unitary,
    reduced_density,
    tensor,
    trace_distance,
)

from oracles import (
    brute_partial_trace,
    random_density,
    sqrtm_fidelity,
    svd_trace_distance,
)

I2 = np.eye(2)
X = np.array([[0.0, 1.0], [1.0, 0.0]])
Z = np.diag([1.0, -1.0])
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])

# frozen oracle values, qubit with level spacing 1
C0 = 0.7310585786300049  # Gibbs weight at T = 1
C1 = 0.2689414213699951
FID_1_INF = 0.9712926654644505  # fidelity of Gibbs(T=1) and I/2


class TestKron:
    def test_identities(self):
        np.testing.assert_array_equal(kron(I2, I2), np.eye(4))

    def test_projector_ordering(self):
        np.testing.assert_array_equal(kron(P0, P1), np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_double_flip(self):
        v00 = np.array([1.0, 0.0, 0.0, 0.0])
        np.testing.assert_array_equal(kron(X, X) @ v00, np.array([0, 0, 0, 1.0]))

    def test_associativity(self):
        rng = np.random.default_rng(0)
        a, b, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
        np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)

    def test_tensor_matches_chained_kron(self):
        np.testing.assert_array_equal(tensor(X, I2, Z), kron(kron(X, I2), Z))


class TestPartialTrace:
    def test_bell_pair(self):
        bell = np.array([1.0, 0, 0, 1.0]) / np.sqrt(2)
        rho = np.outer(bell, bell)
        np.testing.assert_allclose(partial_trace(rho, (2, 2), (0,)), I2 / 2, atol=1e-12)

    def test_product_state(self):
        rng = np.random.default_rng(1)
        ra, rb = random_density(2, rng), random_density(3, rng)
        np.testing.assert_allclose(partial_trace(kron(ra, rb), (2, 3), (0,)), ra, atol=1e-12)

    def test_trace_everything(self):
        rng = np.random.default_rng(2)
        rho = random_density(4, rng)
        out = partial_trace(rho, (2, 2), ())
        assert out.shape == (1, 1)
        assert abs(out[0, 0] - 1.0) < 1e-12

    def test_against_loop_oracle(self):
        rng = np.random.default_rng(3)
        rho = random_density(12, rng)
        for keep in [(0,), (1,), (2,), (0, 2), (1, 2), (0, 1, 2)]:
            np.testing.assert_allclose(
                partial_trace(rho, (2, 3, 2), keep),
                brute_partial_trace(rho, (2, 3, 2), keep),
                atol=1e-12,
            )

    def test_errors(self):
        rho = np.eye(4) / 4
        with pytest.raises(ValueError):
            partial_trace(rho, (2, 3), (0,))  # dims do not multiply to 4
        with pytest.raises(ValueError):
            partial_trace(rho, (2, 2), (2,))  # factor index out of range

    def test_reduced_density_matches(self):
        rng = np.random.default_rng(4)
        psi = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
        for keep in [(0,), (2,), (0, 1)]:
            np.testing.assert_allclose(
                reduced_density(psi, (2, 3, 2), keep),
                partial_trace(rho, (2, 3, 2), keep),
                atol=1e-12,
            )


class TestTraceDistance:
    def test_self(self):
        rho = random_density(3, np.random.default_rng(5))
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure(self):
        assert abs(trace_distance(P0, P1) - 1.0) < 1e-15

    def test_ground_vs_thermal_qubit(self):
        gibbs = np.diag([C0, C1])
        assert abs(trace_distance(P0, gibbs) - C1) < 1e-15

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            a, b = random_density(3, rng), random_density(3, rng)
            t = trace_distance(a, b)
            assert abs(t - trace_distance(b, a)) < 1e-12
            assert -1e-12 <= t <= 1.0 + 1e-12

    def test_triangle_inequality(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a, b, c = (random_density(3, rng) for _ in range(3))
            assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12

    def test_unitary_invariance(self):
        rng = np.random.default_rng(8)
        a, b = random_density(4, rng), random_density(4, rng)
        u = random_unitary(4, rng)
        got = trace_distance(u @ a @ dagger(u), u @ b @ dagger(u))
        assert abs(got - trace_distance(a, b)) < 1e-10

    def test_svd_oracle(self):
        rng = np.random.default_rng(9)
        a, b = random_density(5, rng), random_density(5, rng)
        assert abs(trace_distance(a, b) - svd_trace_distance(a, b)) < 1e-12

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(np.eye(2) / 2, np.eye(3) / 3)


class TestFidelity:
    def test_self(self):
        rho = random_density(3, np.random.default_rng(10))
        assert abs(fidelity(rho, rho) - 1.0) < 1e-12

    def test_orthogonal(self):
        assert fidelity(P0, P1) < 1e-12

    def test_thermal_pair(self):
        gibbs = np.diag([C0, C1])
        assert abs(fidelity(gibbs, I2 / 2) - FID_1_INF) < 1e-14
        assert abs(fidelity(gibbs, I2 / 2) - (np.sqrt(C0 / 2) + np.sqrt(C1 / 2))) < 1e-14

    def test_sqrtm_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            a, b = random_density(3, rng), random_density(3, rng)
            assert abs(fidelity(a, b) - sqrtm_fidelity(a, b)) < 1e-10

    def test_symmetry_and_bounds(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            a, b = random_density(4, rng), random_density(4, rng)
            f = fidelity(a, b)
            assert abs(f - fidelity(b, a)) < 1e-10
            assert -1e-12 <= f <= 1.0 + 1e-10

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(np.eye(2) / 2, np.eye(3) / 3)


class TestRandomUnitary:
    def test_dim_one_is_phase(self):
        u = random_unitary(1, 0)
        assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    def test_unitarity_defect(self):
        for seed in range(5):
            u = random_unitary(4, seed)
            assert np.max(np.abs(dagger(u) @ u - np.eye(4))) < 1e-10

    def test_determinism(self):
        np.testing.assert_array_equal(random_unitary(3, 123), random_unitary(3, 123))

    def test_column_norms(self):
        u = random_unitary(5, 77)
        np.testing.assert_allclose(np.linalg.norm(u, axis=0), np.ones(5), atol=1e-10)

    def test_haar_moment(self):
        rng = np.random.default_rng(2024)
        samples = [abs(random_unitary(2, rng)[0, 0]) ** 2 for _ in range(10_000)]
        assert abs(np.mean(samples) - 0.5) < 0.02

    def test_invalid_dim(self):
        with pytest.raises(ValueError):
            random_unitary(0, 1)


class TestSmallOps:
    def test_dagger_involution(self):
        a = np.array([[1 + 1j, 2], [3, 4 - 2j]])
        np.testing.assert_array_equal(dagger(dagger(a)), a)

    def test_matmul_identity(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(matmul(a, I2), a)

    def test_is_unitary(self):
        assert is_unitary(X)
        assert not is_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_eigvals_hermitian_known_spectrum(self):
        np.testing.assert_allclose(eigvals_hermitian(Z), [-1.0, 1.0], atol=1e-12)

    def test_embed_single_site(self):
        np.testing.assert_allclose(embed_operator(X, (2, 2), (1,)), kron(I2, X), atol=1e-15)

    def test_embed_two_site_nonadjacent(self):
        cnot = np.eye(4)[:, [0, 1, 3, 2]]
        full = embed_operator(cnot, (2, 2, 2), (0, 2))
        v101 = np.zeros(8)
        v101[0b101] = 1.0
        np.testing.assert_allclose(full @ v101, np.eye(8)[:, 0b100], atol=1e-15)

    def test_condition_on_factor(self):
        rng = np.random.default_rng(13)
        ra, rb = random_density(2, rng), random_density(3, rng)
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        got = condition_on_factor(kron(ra, rb), (2, 3), 0, plus)
        expected = (plus.conj() @ ra @ plus) * rb
        np.testing.assert_allclose(got, expected, atol=1e-12)


class TestValidators:
    def test_density_accepts_thermal(self):
        check_density_matrix(np.diag([C0, C1]))

    def test_density_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            check_density_matrix(np.diag([0.6, 0.6]))

    def test_density_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            check_density_matrix(np.array([[0.5, 0.4], [0.1, 0.5]]))

    def test_density_rejects_negative(self):
        with pytest.raises(ValueError):
            check_density_matrix(np.diag([1.5, -0.5]))

    def test_conditional_allows_subnormalized(self):
        check_conditional_state(np.diag([0.3, 0.2]))
        with pytest.raises(ValueError):
            check_conditional_state(np.diag([0.9, 0.9]))

    def test_state_vector_norm(self):
        check_state_vector(np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            check_state_vector(np.array([1.0, 1.0]))

    def test_state_vector_dims(self):
        with pytest.raises(ValueError):
            check_state_vector(np.array([1.0, 0.0, 0.0]), dims=(2, 2))


def test_tolerance_constants_exported():
    assert qmath.HERMITIAN_ATOL == 1e-12
    assert qmath.EIGENVALUE_FLOOR == -1e-10
    assert qmath.UNITARY_ATOL == 1e-10
