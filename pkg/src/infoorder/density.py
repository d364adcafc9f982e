"""Positive operators and density matrices on complex n-space.

Matrices are stored as read-only complex arrays. Eigensystems come from
``numpy.linalg.eigh`` sorted by descending eigenvalue; eigenspace queries
group eigenvalues into clusters so that degeneracy has a single numeric
meaning across the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import subspace_angles

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    ParameterOutOfRange,
    ParseError,
    ZeroTrace,
)
from .simplex import as_array

HERMITIAN_TOL = 1e-12
PSD_REL_TOL = 1e-9
CLUSTER_TOL = 1e-8
KERNEL_REL_TOL = 1e-10
#: Principal-angle threshold (radians) for subspace inclusion and intersection.
ANGLE_TOL = 1e-6


def psd_eps(lam_max: float) -> float:
    return PSD_REL_TOL * max(1.0, lam_max)


def eigvalsh_desc(M) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(M)[::-1]
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def is_psd(M, eps=None) -> bool:
    """Smallest eigenvalue of a Hermitian matrix is at least ``-eps``.

    The default slack scales with the spectral radius of ``M``.
    """
    lam = eigvalsh_desc(M)
    if eps is None:
        eps = psd_eps(float(np.max(np.abs(lam))) if lam.size else 0.0)
    return bool(lam[-1] >= -eps)


def hermitian_part(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return 0.5 * (M + M.conj().T)


def _square(entries) -> np.ndarray:
    M = np.array(entries.matrix if isinstance(entries, PositiveOperator) else entries, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NotHermitian("matrix has non-finite entries")
    return M


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def lam_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def zero_tol(self) -> float:
        return KERNEL_REL_TOL * max(self.lam_max, 0.0)

    @property
    def cluster_tol(self) -> float:
        return CLUSTER_TOL * max(1.0, self.lam_max)

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues > self.zero_tol

    @property
    def rank(self) -> int:
        return int(self.nonzero.sum())

    @property
    def lam_min_nonzero(self) -> float:
        nz = self.eigenvalues[self.nonzero]
        return float(nz[-1]) if nz.size else 0.0

    def clusters(self):
        """Index ranges of eigenvalues that agree within the cluster tolerance."""
        lam, out, start = self.eigenvalues, [], 0
        for i in range(1, lam.size + 1):
            if i == lam.size or lam[i - 1] - lam[i] > self.cluster_tol:
                out.append((start, i))
                start = i
        return out

    def eigenspace(self, which: str) -> np.ndarray:
        """Orthonormal basis (columns) of ``kernel``, ``top`` or ``bottom_nonzero``."""
        V, lam = self.eigenvectors, self.eigenvalues
        if which == "kernel":
            return V[:, ~self.nonzero]
        if which == "top":
            if self.rank == 0:
                return V[:, :0]
            return V[:, np.abs(lam - lam[0]) <= self.cluster_tol]
        if which == "bottom_nonzero":
            if self.rank == 0:
                return V[:, :0]
            low = self.lam_min_nonzero
            return V[:, self.nonzero & (np.abs(lam - low) <= self.cluster_tol)]
        raise ParameterOutOfRange(f"unknown eigenspace {which!r}")

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


class PositiveOperator:
    """A Hermitian positive semidefinite matrix."""

    __slots__ = ("_M", "_eig")

    def __init__(self, entries):
        M = _square(entries)
        scale = max(1.0, float(np.max(np.abs(M))))
        if np.max(np.abs(M - M.conj().T)) > HERMITIAN_TOL * scale:
            raise NotHermitian("matrix is not Hermitian")
        M = hermitian_part(M)
        lam = eigvalsh_desc(M)
        if lam[-1] < -psd_eps(lam[0]):
            raise NotPSD(f"smallest eigenvalue {lam[-1]:.3g} is negative")
        self._set(M)

    def _set(self, M):
        M = np.array(M, dtype=complex)
        M.setflags(write=False)
        self._M = M
        self._eig = None

    @classmethod
    def _trusted(cls, M):
        obj = cls.__new__(cls)
        obj._set(M)
        return obj

    @property
    def matrix(self) -> np.ndarray:
        return self._M

    @property
    def n(self) -> int:
        return self._M.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._M if dtype is None else self._M.astype(dtype)

    @property
    def trace(self) -> float:
        return float(np.trace(self._M).real)

    @property
    def eig(self) -> EigenSystem:
        if self._eig is None:
            self._eig = eigensystem(self._M)
        return self._eig

    @property
    def lam_max(self) -> float:
        return self.eig.lam_max

    @property
    def lam_min_nonzero(self) -> float:
        return self.eig.lam_min_nonzero

    def is_zero(self) -> bool:
        return bool(np.max(np.abs(self._M)) <= 1e-14)

    def allclose(self, other, atol=1e-9) -> bool:
        other = other.matrix if isinstance(other, PositiveOperator) else np.asarray(other)
        return other.shape == self._M.shape and bool(np.allclose(self._M, other, rtol=0, atol=atol))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, eigenvalues={np.round(self.eig.eigenvalues, 6)})"


class DensityOperator(PositiveOperator):
    """A positive operator with unit trace (renormalized on construction)."""

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        tr = self.trace
        if tr <= 0:
            raise ZeroTrace("trace must be positive")
        self._set(self._M / tr)


def make_positive(entries) -> PositiveOperator:
    return PositiveOperator(entries)


def make_density(entries) -> DensityOperator:
    """Validate, symmetrize and trace-normalize ``entries``.

    >>> make_density(np.eye(2)).matrix.real
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    return DensityOperator(entries)


def matrix_of(A) -> np.ndarray:
    return A.matrix if isinstance(A, PositiveOperator) else np.asarray(A, dtype=complex)


def eigensystem(A) -> EigenSystem:
    """Eigen-decomposition with eigenvalues sorted descending."""
    M = hermitian_part(matrix_of(A))
    try:
        lam, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    lam, V = lam[::-1].copy(), V[:, ::-1].copy()
    lam.setflags(write=False)
    V.setflags(write=False)
    return EigenSystem(lam, V)


def get_eig(A) -> EigenSystem:
    return A.eig if isinstance(A, PositiveOperator) else eigensystem(A)


def eigenspace(A, which: str) -> np.ndarray:
    """Kernel, top eigenspace or lowest nonzero eigenspace as orthonormal columns."""
    return get_eig(A).eigenspace(which)


def tensor(A, B):
    """Kronecker product with index convention ``(i, j) -> i * m + j``."""
    M = np.kron(matrix_of(A), matrix_of(B))
    if isinstance(A, DensityOperator) and isinstance(B, DensityOperator):
        return DensityOperator._trusted(M)
    return PositiveOperator._trusted(M)


def embed_diagonal(x) -> DensityOperator:
    """The diagonal density matrix with ``x`` on the diagonal."""
    return DensityOperator(np.diag(as_array(x)).astype(complex))


def bottom_density(n: int) -> DensityOperator:
    return DensityOperator._trusted(np.eye(n, dtype=complex) / n)


def pure_state(v) -> DensityOperator:
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityOperator._trusted(np.outer(v, v.conj()))


def conjugate(A, U):
    """``U A U^dagger``, keeping the operator type."""
    M = U @ matrix_of(A) @ U.conj().T
    M = hermitian_part(M)
    cls = type(A) if isinstance(A, PositiveOperator) else PositiveOperator
    return cls._trusted(M)


def commutator_norm(A, B) -> float:
    a, b = matrix_of(A), matrix_of(B)
    return float(np.max(np.abs(a @ b - b @ a)))


def random_density(rng, n, rank=None, basis=None) -> DensityOperator:
    """Random density matrix of the given rank (Wishart-style).

    If ``basis`` (orthonormal columns) is given, the support lies in its span.
    """
    k = n if basis is None else basis.shape[1]
    rank = k if rank is None else rank
    G = rng.normal(size=(k, rank)) + 1j * rng.normal(size=(k, rank))
    if basis is not None:
        G = basis @ G
    M = G @ G.conj().T
    return DensityOperator._trusted(hermitian_part(M / np.trace(M).real))


def random_positive(rng, n, rank=None, scale=1.0) -> PositiveOperator:
    rho = random_density(rng, n, rank)
    return PositiveOperator._trusted(rho.matrix * scale * rng.uniform(0.2, 2.0) * n)


# ---------------------------------------------------------------------------
# subspaces


def _angles(U, W) -> np.ndarray:
    if U.shape[1] == 0 or W.shape[1] == 0:
        return np.zeros(0)
    return subspace_angles(U, W)


def subspace_contains(big, small, tol=ANGLE_TOL) -> bool:
    """Is span(small) contained in span(big)?"""
    if small.shape[1] == 0:
        return True
    if small.shape[1] > big.shape[1]:
        return False
    return bool(np.max(_angles(big, small)) <= tol)


def subspaces_intersect(U, W, tol=ANGLE_TOL) -> bool:
    """Do the spans share a nonzero vector (smallest principal angle near 0)?"""
    ang = _angles(U, W)
    return bool(ang.size and np.min(ang) <= tol)


def subspace_equal(U, W, tol=ANGLE_TOL) -> bool:
    return U.shape[1] == W.shape[1] and subspace_contains(U, W, tol)


# ---------------------------------------------------------------------------
# text format: first line n, then n rows of n complex entries


def parse_matrix_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError(1, "empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError as exc:
        raise ParseError(1, "first line must be the dimension") from exc
    if len(lines) != n + 1:
        raise ParseError(len(lines), f"expected {n} matrix rows, got {len(lines) - 1}")
    M = np.zeros((n, n), dtype=complex)
    for r, line in enumerate(lines[1:]):
        fields = line.split()
        if len(fields) != n:
            raise ParseError(r + 2, f"expected {n} entries, got {len(fields)}")
        try:
            M[r] = [complex(f.replace("i", "j")) for f in fields]
        except ValueError as exc:
            raise ParseError(r + 2, str(exc)) from exc
    return M


def load_matrix(path) -> np.ndarray:
    return parse_matrix_text(Path(path).read_text(encoding="utf-8"))


def format_matrix_text(M) -> str:
    M = matrix_of(M)
    rows = [str(M.shape[0])]
    for row in M:
        rows.append(" ".join(f"{z.real:.15g}{z.imag:+.15g}j" for z in row))
    return "\n".join(rows) + "\n"
