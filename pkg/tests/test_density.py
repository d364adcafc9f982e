import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoorder import density as dc
from infoorder.errors import DimensionMismatch, NotHermitian, NotPSD, ParseError, ZeroTrace
from infoorder.sampling import random_unitary

seeds = st.integers(0, 2**31 - 1)


class TestConstruction:
    def test_half_identity_is_bottom(self):
        rho = dc.make_density(np.eye(2) / 2)
        assert rho.allclose(dc.bottom_density(2))

    def test_pure_state(self):
        rho = dc.make_density([[0.5, 0.5], [0.5, 0.5]])
        assert rho.eig.rank == 1

    def test_not_psd(self):
        # eigenvalues of [[1, 2], [2, 1]] are 3 and -1
        with pytest.raises(NotPSD):
            dc.make_density([[1, 2], [2, 1]])

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            dc.make_density([[1, 1j], [1j, 1]])

    def test_zero_trace(self):
        with pytest.raises(ZeroTrace):
            dc.make_density(np.zeros((2, 2)))

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            dc.make_positive(np.ones((2, 3)))

    def test_normalizes_and_symmetrizes(self):
        M = np.array([[2, 1 + 1e-14], [1, 2]])
        rho = dc.make_density(M)
        assert rho.trace == pytest.approx(1.0, abs=1e-15)
        np.testing.assert_array_equal(rho.matrix, rho.matrix.conj().T)

    def test_complex_entries_kept(self):
        rho = dc.make_density([[1, 0.5j], [-0.5j, 1]])
        assert rho.matrix[0, 1] == pytest.approx(0.25j)

    def test_read_only(self):
        with pytest.raises(ValueError):
            dc.bottom_density(2).matrix[0, 0] = 1


class TestEigensystem:
    def test_diagonal(self):
        e = dc.eigensystem(np.diag([0.8, 0.2]))
        np.testing.assert_allclose(e.eigenvalues, [0.8, 0.2])
        np.testing.assert_allclose(np.abs(e.eigenvectors), np.eye(2), atol=1e-15)

    def test_bottom(self):
        np.testing.assert_allclose(dc.bottom_density(4).eig.eigenvalues, [0.25] * 4)

    def test_two_by_two(self):
        e = dc.eigensystem(np.array([[0.5, 0.5], [0.5, 0.5]]))
        np.testing.assert_allclose(e.eigenvalues, [1, 0], atol=1e-15)
        v = e.eigenvectors[:, 0]
        assert abs(abs(np.vdot(v, [1, 1])) / np.sqrt(2) - 1) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), seeds)
    def test_reconstruction_and_orthonormality(self, n, seed):
        rho = dc.random_density(np.random.default_rng(seed), n)
        e = rho.eig
        assert np.max(np.abs(e.reconstruct() - rho.matrix)) <= 1e-9
        assert np.max(np.abs(e.eigenvectors.conj().T @ e.eigenvectors - np.eye(n))) <= 1e-9
        assert np.all(np.diff(e.eigenvalues) <= 0)

    def test_clusters(self):
        e = dc.eigensystem(np.diag([0.4, 0.4 - 1e-10, 0.2, 0.0]))
        assert e.clusters() == [(0, 2), (2, 3), (3, 4)]


class TestEigenspaces:
    def test_pure_state(self):
        rho = dc.pure_state([1, 0, 0])
        assert dc.eigenspace(rho, "kernel").shape[1] == 2
        assert dc.eigenspace(rho, "top").shape[1] == 1

    def test_bottom(self):
        b = dc.bottom_density(3)
        assert dc.eigenspace(b, "top").shape[1] == 3
        assert dc.eigenspace(b, "kernel").shape[1] == 0

    def test_degenerate_diagonal(self):
        rho = dc.embed_diagonal((0.5, 0.5, 0))
        top = dc.eigenspace(rho, "top")
        assert top.shape[1] == 2
        assert dc.eigenspace(rho, "kernel").shape[1] == 1
        assert dc.subspace_equal(dc.eigenspace(rho, "bottom_nonzero"), top)

    def test_subspace_helpers(self):
        E = np.eye(3)
        assert dc.subspace_contains(E[:, :2], E[:, :1])
        assert not dc.subspace_contains(E[:, :1], E[:, 1:2])
        assert dc.subspaces_intersect(E[:, :2], E[:, 1:])
        assert not dc.subspaces_intersect(E[:, :1], E[:, 1:])


class TestTensor:
    def test_bottoms(self):
        assert dc.tensor(dc.bottom_density(2), dc.bottom_density(2)).allclose(dc.bottom_density(4))

    def test_index_convention(self):
        A, B = np.diag([1.0, 2.0]), np.diag([1.0, 10.0, 100.0])
        np.testing.assert_allclose(np.diag(dc.tensor(A, B).matrix).real, [1, 10, 100, 2, 20, 200])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), seeds)
    def test_trace_and_top_multiplicative(self, n, m, seed):
        rng = np.random.default_rng(seed)
        A, B = dc.random_positive(rng, n), dc.random_positive(rng, m)
        T = dc.tensor(A, B)
        assert T.trace == pytest.approx(A.trace * B.trace, rel=1e-12)
        assert abs(T.lam_max - A.lam_max * B.lam_max) <= 1e-9 * max(1, T.lam_max)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_associative_and_bilinear(self, seed):
        rng = np.random.default_rng(seed)
        A, B, C = (dc.random_positive(rng, 2) for _ in range(3))
        a, b, c = A.matrix, B.matrix, C.matrix
        left = dc.tensor(dc.tensor(A, B), C).matrix
        right = dc.tensor(A, dc.tensor(B, C)).matrix
        assert np.max(np.abs(left - right)) <= 1e-12
        s = rng.uniform(0, 2)
        lin = dc.tensor(dc.PositiveOperator(a + s * c), B).matrix
        assert np.max(np.abs(lin - (np.kron(a, b) + s * np.kron(c, b)))) <= 1e-12

    def test_keeps_density_type(self):
        T = dc.tensor(dc.bottom_density(2), dc.pure_state([1, 1]))
        assert isinstance(T, dc.DensityOperator)


class TestInvariants:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5), seeds)
    def test_psd_check_agrees_with_eigensystem(self, n, seed):
        rng = np.random.default_rng(seed)
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        M = (G + G.conj().T) / 2 + rng.uniform(-1, 3) * np.eye(n)
        lam = dc.eigensystem(M).eigenvalues
        valid = lam[-1] >= -dc.psd_eps(float(np.max(np.abs(lam))))
        try:
            dc.make_positive(M)
            accepted = True
        except NotPSD:
            accepted = False
        assert accepted == valid

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), seeds)
    def test_unitary_conjugation_preserves_spectrum(self, n, seed):
        rng = np.random.default_rng(seed)
        rho = dc.random_density(rng, n, rank=int(rng.integers(1, n + 1)))
        U = random_unitary(rng, n)
        np.testing.assert_allclose(dc.conjugate(rho, U).eig.eigenvalues, rho.eig.eigenvalues, atol=1e-9)

    def test_random_unitary_is_unitary(self):
        U = random_unitary(np.random.default_rng(0), 5)
        assert np.max(np.abs(U.conj().T @ U - np.eye(5))) < 1e-12
        assert np.iscomplexobj(U)


class TestEmbedDiagonal:
    @pytest.mark.parametrize(
        "x, diag", [((1 / 3,) * 3, (1 / 3,) * 3), ((0, 1), (0, 1)), ((0.6, 0.2, 0.2), (0.6, 0.2, 0.2))]
    )
    def test_examples(self, x, diag):
        M = dc.embed_diagonal(x).matrix
        np.testing.assert_allclose(M, np.diag(diag), atol=1e-15)


class TestMatrixText:
    def test_round_trip(self, tmp_path):
        rho = dc.random_density(np.random.default_rng(0), 3)
        path = tmp_path / "m.txt"
        path.write_text(dc.format_matrix_text(rho))
        np.testing.assert_allclose(dc.load_matrix(path), rho.matrix, atol=1e-14)

    def test_parse(self):
        M = dc.parse_matrix_text("2\n0.5+0j 0+0.5j\n0-0.5j 0.5\n")
        np.testing.assert_array_equal(M, [[0.5, 0.5j], [-0.5j, 0.5]])

    @pytest.mark.parametrize("text", ["", "x\n1\n", "2\n1 0\n", "2\n1 0\n0 a\n", "2\n1 0 0\n0 1\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            dc.parse_matrix_text(text)
