"""Orders on density matrices and positive operators.

The Löwner order and its renormalized versions on density matrices, the four
extensions of the maximum-eigenvalue order to positive operators, the lift of
simplex orders to commuting pairs, and randomized suites for tensor
composition and unitary invariance.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from . import density as dc
from . import sampling
from .classical import ComparisonResult, OrderSpec
from .errors import ConvergenceFailure, DimensionMismatch, ParameterOutOfRange
from .reports import AxiomResult, PropertyReport

#: Trace equalities and inequalities are decided at this absolute tolerance.
TRACE_TOL = 1e-9
#: Largest commutator entry for a pair to count as commuting.
COMMUTE_TOL = 1e-9


def _check(A, B):
    a, b = dc.matrix_of(A), dc.matrix_of(B)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.shape} vs {b.shape}")
    return a, b


def leq_loewner(A, B, dual: bool = False) -> bool:
    """``B - A`` is positive semidefinite (``A - B`` when ``dual``)."""
    a, b = _check(A, B)
    return dc.is_psd(a - b if dual else b - a)


def leq_plus_density(rho, pi) -> bool:
    """The maximum-eigenvalue order: ``pi+ rho - rho+ pi >= 0``."""
    a, b = _check(rho, pi)
    return dc.is_psd(dc.get_eig(pi).lam_max * a - dc.get_eig(rho).lam_max * b)


def leq_minus_density(rho, pi) -> bool:
    """The minimum-nonzero-eigenvalue order, with its kernel clause."""
    a, b = _check(rho, pi)
    er, ep = dc.get_eig(rho), dc.get_eig(pi)
    ker_r, ker_p = er.eigenspace("kernel"), ep.eigenspace("kernel")
    if dc.subspace_equal(ker_r, ker_p):
        return dc.is_psd(er.lam_min_nonzero * b - ep.lam_min_nonzero * a)
    if ker_r.shape[1] < ker_p.shape[1] and dc.subspace_contains(ker_p, ker_r):
        return dc.subspaces_intersect(er.eigenspace("bottom_nonzero"), ker_p)
    return False


# ---------------------------------------------------------------------------
# extensions to positive operators


class ExtensionKind(str, Enum):
    MINIMAL = "minimal"
    INTUITIVE = "intuitive"
    MAXIMAL = "maximal"
    NATURAL = "natural"


def _normalized_by_top(A):
    """``A / A+``, with the zero operator mapped to zero."""
    e = dc.get_eig(A)
    m = dc.matrix_of(A)
    return np.zeros_like(m) if e.lam_max <= 0 else m / e.lam_max


def _trace(A) -> float:
    return float(np.trace(dc.matrix_of(A)).real)


def leq_extension(kind, A, B) -> bool:
    """Evaluate one of the four positive-operator extensions of the maximum-eigenvalue order.

    The zero operator is normalized to zero instead of dividing by ``0+``:
    under ``minimal`` it is comparable only to itself, under ``intuitive`` it
    is the top element.
    """
    kind = ExtensionKind(kind)
    a, b = _check(A, B)
    ta, tb = _trace(a), _trace(b)
    same_trace = abs(ta - tb) <= TRACE_TOL * max(1.0, abs(ta), abs(tb))
    if kind is ExtensionKind.MINIMAL:
        if not same_trace:
            return False
        if ta <= TRACE_TOL:
            return True
        return leq_plus_density(a / ta, b / tb)
    na, nb = _normalized_by_top(a), _normalized_by_top(b)
    if kind is ExtensionKind.INTUITIVE:
        return dc.is_psd(ta * na - tb * nb)
    if kind is ExtensionKind.NATURAL:
        return (ta >= tb or same_trace) and dc.is_psd(na - nb)
    # maximal: equal traces compare the normalized operators, a strictly larger
    # trace only needs kernel inclusion; a smaller trace is incomparable
    if same_trace:
        return dc.is_psd(na - nb)
    if ta > tb:
        return dc.subspace_contains(dc.eigenspace(b, "kernel"), dc.eigenspace(a, "kernel"))
    return False


# ---------------------------------------------------------------------------
# dispatch


class DensityOrderKind(str, Enum):
    LOEWNER = "loewner"
    DUAL_LOEWNER = "dual-loewner"
    PLUS = "dplus"
    MINUS = "dminus"
    EXT_MIN = "ext-min"
    EXT_INT = "ext-int"
    EXT_MAX = "ext-max"
    EXT_NAT = "ext-nat"


_EXTENSIONS = {
    DensityOrderKind.EXT_MIN: ExtensionKind.MINIMAL,
    DensityOrderKind.EXT_INT: ExtensionKind.INTUITIVE,
    DensityOrderKind.EXT_MAX: ExtensionKind.MAXIMAL,
    DensityOrderKind.EXT_NAT: ExtensionKind.NATURAL,
}


def density_leq(kind, A, B) -> bool:
    kind = DensityOrderKind(kind)
    if kind is DensityOrderKind.LOEWNER:
        return leq_loewner(A, B)
    if kind is DensityOrderKind.DUAL_LOEWNER:
        return leq_loewner(A, B, dual=True)
    if kind is DensityOrderKind.PLUS:
        return leq_plus_density(A, B)
    if kind is DensityOrderKind.MINUS:
        return leq_minus_density(A, B)
    return leq_extension(_EXTENSIONS[kind], A, B)


def density_compare(kind, A, B) -> ComparisonResult:
    return ComparisonResult.from_flags(density_leq(kind, A, B), density_leq(kind, B, A))


def requires_density(kind) -> bool:
    """Kinds defined on density matrices (inputs are trace-normalized)."""
    return DensityOrderKind(kind) in (DensityOrderKind.PLUS, DensityOrderKind.MINUS)


# ---------------------------------------------------------------------------
# lifting simplex orders


def simultaneous_diagonalization(rho, pi, seed=0, attempts=5):
    """Common eigenbasis of two commuting Hermitian matrices.

    Diagonalizes ``rho + c pi`` for random ``c`` in (0, 1) and accepts the
    basis once both matrices are diagonal in it.
    """
    a, b = _check(rho, pi)
    rng = np.random.default_rng(seed)
    scale = max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))
    for _ in range(attempts):
        c = rng.uniform(0.05, 0.95)
        V = dc.eigensystem(a + c * b).eigenvectors
        da, db = V.conj().T @ a @ V, V.conj().T @ b @ V
        off = max(np.max(np.abs(da - np.diag(np.diag(da)))), np.max(np.abs(db - np.diag(np.diag(db)))))
        if off <= 1e-9 * scale:
            return V, np.diag(da).real.copy(), np.diag(db).real.copy()
    raise ConvergenceFailure("no common eigenbasis found")


def lift_classical_to_density(spec: OrderSpec, rho, pi) -> bool:
    """A simplex order on commuting density matrices via their joint eigenvalues.

    Non-commuting pairs are incomparable.
    """
    a, b = _check(rho, pi)
    if dc.commutator_norm(a, b) > COMMUTE_TOL:
        return False
    _, x, y = simultaneous_diagonalization(a, b)
    x = np.clip(x, 0, None)
    y = np.clip(y, 0, None)
    return spec.leq(x / x.sum(), y / y.sum())


# ---------------------------------------------------------------------------
# comparable pair constructions


def _complement_psd(rng, n, avoid, rank=None):
    """Random PSD matrix with unit norm that annihilates the columns of ``avoid``."""
    P = np.eye(n) - avoid @ avoid.conj().T
    k = rank or n
    G = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    D = P @ (G @ G.conj().T) @ P
    D = dc.hermitian_part(D)
    norm = np.max(np.abs(np.linalg.eigvalsh(D)))
    return D / norm if norm > 1e-12 else np.zeros_like(D)


def plus_pair(rng, n):
    """``(rho, pi)`` with ``rho <= pi`` in the maximum-eigenvalue order, generically non-commuting.

    ``rho`` is proportional to ``pi / pi+ + s D`` with ``D >= 0`` vanishing on
    the top eigenvector of ``pi`` and ``s`` small enough that the top
    eigenvalue stays 1.
    """
    pi = dc.random_density(rng, n, rank=int(rng.integers(1, n + 1)))
    e = pi.eig
    v = e.eigenvectors[:, :1]
    lam = e.eigenvalues
    gap = 1.0 - (lam[1] / lam[0] if n > 1 else 0.0)
    D = _complement_psd(rng, n, v, rank=int(rng.integers(1, n + 1)))
    F = pi.matrix / lam[0] + rng.uniform(0, 1) * gap * D
    return dc.DensityOperator._trusted(dc.hermitian_part(F / np.trace(F).real)), pi


def minus_pair(rng, n):
    """``(rho, pi)`` with ``rho <= pi`` in the minimum-eigenvalue order.

    Half the time kernels agree and ``pi`` is proportional to ``rho / rho- + D``
    with ``D >= 0`` on the support of ``rho`` vanishing on the lowest
    eigenvector; otherwise ``pi`` lives inside the support of ``rho`` minus
    that eigenvector, so its kernel is strictly larger.
    """
    rho = dc.random_density(rng, n, rank=int(rng.integers(1, n + 1)))
    e = rho.eig
    r = e.rank
    supp = e.eigenvectors[:, :r]
    u = e.eigenvectors[:, r - 1 : r]
    if r >= 2 and rng.random() < 0.5:
        basis = supp[:, : r - 1]
        pi = dc.random_density(rng, n, rank=int(rng.integers(1, r)), basis=basis)
        return rho, pi
    ker = e.eigenvectors[:, r:]
    D = _complement_psd(rng, n, np.hstack([u, ker]))
    G = rho.matrix / e.lam_min_nonzero + rng.uniform(0, 2) * D
    return rho, dc.DensityOperator._trusted(dc.hermitian_part(G / np.trace(G).real))


def loewner_pair(rng, n):
    """Positive operators ``A <= B`` with ``B = A + P`` for a random ``P >= 0``."""
    A = dc.random_positive(rng, n, rank=int(rng.integers(1, n + 1)))
    P = dc.random_positive(rng, n, rank=int(rng.integers(1, n + 1)), scale=rng.uniform(0, 1))
    return A, dc.PositiveOperator._trusted(A.matrix + P.matrix)


_PAIR_MAKERS = {
    DensityOrderKind.LOEWNER: loewner_pair,
    DensityOrderKind.PLUS: plus_pair,
    DensityOrderKind.MINUS: minus_pair,
}


def comparable_pair(kind, rng, n):
    return _PAIR_MAKERS[DensityOrderKind(kind)](rng, n)


def random_pair(kind, rng, n):
    """Independent random elements, mostly incomparable."""
    if DensityOrderKind(kind) is DensityOrderKind.LOEWNER:
        return dc.random_positive(rng, n), dc.random_positive(rng, n)
    return (
        dc.random_density(rng, n, rank=int(rng.integers(1, n + 1))),
        dc.random_density(rng, n, rank=int(rng.integers(1, n + 1))),
    )


# ---------------------------------------------------------------------------
# suites


def _composition_kind(order):
    key = str(getattr(order, "value", order)).lower()
    aliases = {"loewner": "loewner", "lowner": "loewner", "plus": "dplus", "dplus": "dplus",
               "minus": "dminus", "dminus": "dminus"}
    if key not in aliases:
        raise ParameterOutOfRange(f"composition suite supports loewner, plus, minus; got {order!r}")
    return DensityOrderKind(aliases[key])


def composition_suite(order, n: int, m: int, samples: int, seed) -> PropertyReport:
    """Tensor products of comparable pairs stay comparable; right tensoring embeds the order."""
    kind = _composition_kind(order)
    if n * m > 16:
        raise ParameterOutOfRange("composition suite is limited to n*m <= 16")
    rng = sampling.rng_from(seed)
    leq = lambda a, b: density_leq(kind, a, b)  # noqa: E731
    report = PropertyReport(
        f"composition: {kind.value}", meta={"n": n, "m": m, "samples": samples}
    )
    gen = report.add(AxiomResult("generated_pairs_comparable"))
    comp = report.add(AxiomResult("tensor_of_comparable"))
    right = report.add(AxiomResult("right_tensor_embedding"))
    left = report.add(AxiomResult("left_tensor_embedding"))
    for _ in range(samples):
        r1, p1 = comparable_pair(kind, rng, n)
        r2, p2 = comparable_pair(kind, rng, m)
        ok1, ok2 = leq(r1, p1), leq(r2, p2)
        gen.record(ok1 and ok2, {"rho1": r1.matrix, "pi1": p1.matrix, "rho2": r2.matrix, "pi2": p2.matrix})
        if ok1 and ok2:
            comp.record(
                leq(dc.tensor(r1, r2), dc.tensor(p1, p2)),
                {"rho1": r1.matrix, "pi1": p1.matrix, "rho2": r2.matrix, "pi2": p2.matrix},
            )
        # embeddings: half comparable, half independent pairs
        a, b = (r1, p1) if rng.random() < 0.5 else random_pair(kind, rng, n)
        kappa = dc.random_density(rng, m, rank=int(rng.integers(1, m + 1)))
        if kind is DensityOrderKind.LOEWNER:
            kappa = dc.PositiveOperator._trusted(kappa.matrix * rng.uniform(0.5, 2.0))
        base = leq(a, b)
        right.record(base == leq(dc.tensor(a, kappa), dc.tensor(b, kappa)),
                     {"a": a.matrix, "b": b.matrix, "kappa": kappa.matrix, "base": base})
        left.record(base == leq(dc.tensor(kappa, a), dc.tensor(kappa, b)),
                    {"a": a.matrix, "b": b.matrix, "kappa": kappa.matrix, "base": base})
    return report


def unitary_invariance_suite(order, n: int, samples: int, seed) -> PropertyReport:
    """Verdicts are unchanged by a common unitary conjugation."""
    kind = _composition_kind(order)
    rng = sampling.rng_from(seed)
    report = PropertyReport(f"unitary invariance: {kind.value}", meta={"n": n, "samples": samples})
    res = report.add(AxiomResult("conjugation_invariance"))
    comparable = 0
    for i in range(samples):
        a, b = comparable_pair(kind, rng, n) if i % 2 == 0 else random_pair(kind, rng, n)
        U = sampling.random_unitary(rng, n)
        before = density_leq(kind, a, b)
        after = density_leq(kind, dc.conjugate(a, U), dc.conjugate(b, U))
        comparable += before
        res.record(before == after, {"a": a.matrix, "b": b.matrix, "U": U, "before": before})
    report.meta["comparable"] = comparable
    return report
