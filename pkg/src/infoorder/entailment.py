"""Entailment measures between word representations.

Word vectors are read from a plain text file, turned into distributions or
density matrices, and compared with order-based scores (smoothed and graded
orders, the Sim measures) and the usual baselines (cosine, relative entropy).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import density as dc
from . import sampling
from .classical import ORDER_TOL, OrderSpec, RioParams, discordant
from .errors import (
    DimensionMismatch,
    EmptyFile,
    InfeasibleParams,
    NegativeValue,
    ParameterOutOfRange,
    ParseError,
    UnknownToken,
    WeightMismatch,
    ZeroMass,
    ZeroVector,
)
from .simplex import Distribution, as_array, retract

#: Entries between this and zero are treated as rounding noise and clamped.
NEGATIVE_TOL = 1e-9


class WordVectorStore:
    """Read-only mapping from tokens to nonnegative vectors of a common length."""

    def __init__(self, vectors: dict, dim: int = None):
        if not vectors and dim is None:
            raise EmptyFile("no vectors")
        self._vectors = {}
        for token, v in vectors.items():
            arr = np.array(v, dtype=float).ravel()
            if dim is None:
                dim = arr.size
            if arr.size != dim:
                raise DimensionMismatch(f"token {token!r} has length {arr.size}, expected {dim}")
            bad = np.flatnonzero(arr < -NEGATIVE_TOL)
            if bad.size:
                raise NegativeValue(token, int(bad[0]) + 1, float(arr[bad[0]]))
            arr = np.clip(arr, 0.0, None)
            arr.setflags(write=False)
            self._vectors[token] = arr
        self.dim = dim

    def __contains__(self, token):
        return token in self._vectors

    def __getitem__(self, token) -> np.ndarray:
        try:
            return self._vectors[token]
        except KeyError:
            raise UnknownToken(f"unknown token {token!r}") from None

    def __len__(self):
        return len(self._vectors)

    def __iter__(self):
        return iter(self._vectors)

    @property
    def tokens(self):
        return list(self._vectors)


def _is_header(fields):
    return len(fields) == 2 and all(f.isdigit() for f in fields)


def parse_vectors(text: str) -> WordVectorStore:
    """Parse ``token v1 ... vd`` lines, skipping an optional ``count dim`` header."""
    vectors, dim, header_dim = {}, None, None
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        fields = raw.split()
        if not fields:
            continue
        if lineno == 1 and _is_header(fields):
            header_dim = int(fields[1])
            continue
        token, values = fields[0], fields[1:]
        if dim is None:
            dim = header_dim or len(values)
            if dim == 0:
                raise ParseError(lineno, f"token {token!r} has no values")
        if len(values) != dim:
            raise ParseError(lineno, f"expected {dim} values, got {len(values)}")
        try:
            arr = np.array([float(v) for v in values])
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from exc
        if not np.all(np.isfinite(arr)):
            raise ParseError(lineno, "non-finite value")
        bad = np.flatnonzero(arr < -NEGATIVE_TOL)
        if bad.size:
            raise NegativeValue(token, int(bad[0]) + 1, float(arr[bad[0]]))
        if token in vectors:
            warnings.warn(f"line {lineno}: duplicate token {token!r}, keeping the last", stacklevel=2)
        vectors[token] = np.clip(arr, 0.0, None)
    if not vectors:
        raise EmptyFile("no vectors found")
    return WordVectorStore(vectors, dim)


def load_vectors(path) -> WordVectorStore:
    """Load a vector file; see :func:`parse_vectors` for the format."""
    return parse_vectors(Path(path).read_text(encoding="utf-8"))


def to_distribution(store: WordVectorStore, token) -> Distribution:
    """The L1-normalized vector of ``token``."""
    v = store[token]
    if v.sum() <= 0:
        raise ZeroMass(f"token {token!r} has zero mass")
    return Distribution(v)


def to_density(store: WordVectorStore, token, context_rank: int = 0, builder=None) -> dc.DensityOperator:
    """Density matrix for ``token``.

    ``context_rank=0`` gives the diagonal embedding of the normalized vector;
    ``context_rank=r`` keeps only the ``r`` largest coordinates (weighted
    coordinate projections). ``builder(vector) -> matrix`` replaces both with
    a custom construction.
    """
    v = store[token]
    if builder is not None:
        M = builder(v)
    else:
        w = v.astype(float).copy()
        if context_rank:
            if context_rank < 0:
                raise ParameterOutOfRange("context_rank must be nonnegative")
            keep = np.argsort(-w, kind="stable")[:context_rank]
            mask = np.zeros_like(w, dtype=bool)
            mask[keep] = True
            w[~mask] = 0.0
        if w.sum() <= 0:
            raise ZeroMass(f"token {token!r} has zero mass")
        M = np.diag(w)
    return dc.DensityOperator(M)


def cosine_similarity(store: WordVectorStore, a, b) -> float:
    """Cosine of the raw vectors of two tokens."""
    va, vb = store[a], store[b]
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0 or nb == 0:
        raise ZeroVector("cosine of a zero vector is undefined")
    return float(va @ vb / (na * nb))


# ---------------------------------------------------------------------------
# smoothing


def _leq_callable(spec):
    return spec.leq if isinstance(spec, OrderSpec) else spec


def smooth_leq(spec, alpha: float, x, y) -> bool:
    """``x`` below the mix ``alpha x + (1 - alpha) y`` in the base order."""
    if not 0.0 <= alpha < 1.0:
        raise ParameterOutOfRange(f"alpha {alpha} outside [0, 1)")
    xa, ya = as_array(x), as_array(y)
    if xa.shape != ya.shape:
        raise DimensionMismatch(f"dimensions differ: {xa.size} vs {ya.size}")
    return bool(_leq_callable(spec)(xa, alpha * xa + (1 - alpha) * ya))


def find_intransitive_triple(spec, alpha: float, n: int, seed, budget: int = 20000):
    """Search ``(x, y, z)`` with ``x <=a y``, ``y <=a z`` but not ``x <=a z``.

    Points come from uniform, tied and sparse families with equal weight:
    for sector orders the smoothed relation can only differ from the base
    order where the mix lands on a sector boundary.
    """
    rng = np.random.default_rng(seed)

    def draw():
        family = rng.integers(3)
        if family == 0:
            return sampling.uniform_simplex(rng, n, 1)[0]
        if family == 1:
            return sampling.tie_points(rng, n, 1)[0]
        return sampling.sparsify(rng, sampling.uniform_simplex(rng, n, 1), prob=0.5)[0]

    for _ in range(budget):
        x, y, z = draw(), draw(), draw()
        if smooth_leq(spec, alpha, x, y) and smooth_leq(spec, alpha, y, z) and not smooth_leq(spec, alpha, x, z):
            return x, y, z
    return None


# ---------------------------------------------------------------------------
# grading


def _fg(params: RioParams, x, y):
    x, y = as_array(x), as_array(y)
    if x.shape != y.shape or x.size != params.n:
        raise DimensionMismatch(f"expected points of length {params.n}")
    fx, fy = x[:-1] - x[1:], y[:-1] - y[1:]
    gx, gy = params.G @ x, params.G @ y
    return fx * gy, fy * gx


def graded_leq_classical(params: RioParams, k: float, x, y, tol=ORDER_TOL) -> bool:
    """``k f_i(x) g_i(y) <= f_i(y) g_i(x)`` for every ``i``; ``k = 1`` is the plain order."""
    if not isinstance(params, RioParams):
        raise InfeasibleParams("graded order needs feasible RioParams")
    if not 0.0 < k <= 1.0:
        raise ParameterOutOfRange(f"grade {k} outside (0, 1]")
    lhs, rhs = _fg(params, x, y)
    return bool(np.all(k * lhs - rhs <= tol))


def max_classical_grade(params: RioParams, x, y, tol=ORDER_TOL) -> float:
    """Largest ``k`` in ``[0, 1]`` with the graded inequalities holding (0 if none)."""
    lhs, rhs = _fg(params, x, y)
    if np.any((lhs <= tol) & (rhs < -tol)):
        return 0.0
    pos = lhs > tol
    if not np.any(pos):
        return 1.0
    return float(np.clip(np.min(rhs[pos] / lhs[pos]), 0.0, 1.0))


def graded_leq_lifted(params: RioParams, k: float, x, y, tol=ORDER_TOL) -> bool:
    """Graded order on the full simplex: a shared sector is required."""
    X, Y = as_array(x)[None], as_array(y)[None]
    if discordant(X, Y)[0]:
        return False
    return graded_leq_classical(params, k, retract(X)[0], retract(Y)[0], tol)


def max_classical_grade_lifted(params: RioParams, x, y, tol=ORDER_TOL) -> float:
    X, Y = as_array(x)[None], as_array(y)[None]
    if discordant(X, Y)[0]:
        return 0.0
    return max_classical_grade(params, retract(X)[0], retract(Y)[0], tol)


def graded_loewner(rho, pi, k: float) -> bool:
    """``pi - k rho`` is positive semidefinite."""
    if k < 0:
        raise ParameterOutOfRange("grade must be nonnegative")
    a, b = dc.matrix_of(rho), dc.matrix_of(pi)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.shape} vs {b.shape}")
    return dc.is_psd(b - k * a)


def max_grade(rho, pi, method: str = "eig", tol: float = 1e-9) -> float:
    """Supremum of the grades ``k`` with ``pi - k rho >= 0``.

    On the support of ``pi`` this is ``1 / lambda_max(pi^-1/2 rho pi^-1/2)``;
    it is 0 when the support of ``rho`` leaves that of ``pi``. ``method="bisect"``
    searches the PSD test directly.
    """
    a, b = dc.matrix_of(rho), dc.matrix_of(pi)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.shape} vs {b.shape}")
    er, ep = dc.get_eig(rho), dc.get_eig(pi)
    if er.rank == 0:
        return math.inf
    if not dc.subspace_contains(er.eigenspace("kernel"), ep.eigenspace("kernel")):
        return 0.0
    if method == "bisect":
        lo, hi = 0.0, float(np.trace(b).real / np.trace(a).real)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if dc.is_psd(b - mid * a, eps=0.0) else (lo, mid)
        return lo
    P = ep.eigenvectors[:, ep.nonzero]
    mu = ep.eigenvalues[ep.nonzero]
    W = P / np.sqrt(mu)
    lam = dc.eigvalsh_desc(dc.hermitian_part(W.conj().T @ a @ W))[0]
    return float(1.0 / lam) if lam > 0 else math.inf


# ---------------------------------------------------------------------------
# Sim measures


@dataclass(frozen=True)
class SimWeights:
    """Non-increasing nonnegative weights summing to one."""

    weights: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise WeightMismatch("weights must be a nonempty sequence")
        if np.any(w < 0) or np.any(np.diff(w) > 1e-12) or abs(w.sum() - 1) > 1e-9:
            raise ParameterOutOfRange("weights must be nonnegative, non-increasing and sum to 1")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    @classmethod
    def uniform(cls, m: int) -> "SimWeights":
        return cls(tuple([1.0 / m] * m))

    @classmethod
    def geometric(cls, m: int, ratio: float = 0.5) -> "SimWeights":
        w = ratio ** np.arange(m)
        return cls(tuple(w / w.sum()))

    def __len__(self):
        return len(self.weights)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.weights)


def _signs(values, tol):
    return np.where(values >= tol, 1.0, np.where(values <= -tol, -1.0, 0.0))


def sim_classical(params: RioParams, w: SimWeights, x, y, tol=ORDER_TOL) -> float:
    """``sum_i A_i s_i`` with ``s_i = +1`` where ``F_i(x, y) <= -tol``, ``-1`` where ``>= tol``.

    ``F_i(x, y) = f_i(x) g_i(y) - f_i(y) g_i(x)``, so ``x`` strictly below ``y``
    scores 1 and the measure is antisymmetric.
    """
    if len(w) != params.n - 1:
        raise WeightMismatch(f"expected {params.n - 1} weights, got {len(w)}")
    lhs, rhs = _fg(params, x, y)
    return float(-(w.array * _signs(lhs - rhs, tol)).sum()) + 0.0


def sim_classical_lifted(params: RioParams, w: SimWeights, x, y, tol=ORDER_TOL) -> float:
    """Sim on the full simplex: both points are reordered by the permutation sorting ``x``.

    Ties in ``x`` are broken by ``y``; permuting both inputs identically leaves
    the score unchanged.
    """
    xa, ya = as_array(x), as_array(y)
    sigma = np.lexsort((-ya, -xa))
    return sim_classical(params, w, xa[sigma], ya[sigma], tol)


def sim_density(w: SimWeights, rho, pi, tol=ORDER_TOL) -> float:
    """``sum_i A_i (sign s_i + sign t_i)`` for the difference ``pi+ rho - rho+ pi``.

    ``s_i`` and ``t_i`` are its expectations in the eigenvectors of ``rho``
    and of ``pi`` (descending eigenvalue order).
    """
    a, b = dc.matrix_of(rho), dc.matrix_of(pi)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.shape} vs {b.shape}")
    if len(w) != a.shape[0]:
        raise WeightMismatch(f"expected {a.shape[0]} weights, got {len(w)}")
    er, ep = dc.get_eig(rho), dc.get_eig(pi)
    D = ep.lam_max * a - er.lam_max * b
    V, W = er.eigenvectors, ep.eigenvectors
    s = np.einsum("ji,jk,ki->i", V.conj(), D, V).real
    t = np.einsum("ji,jk,ki->i", W.conj(), D, W).real
    return float((w.array * (_signs(s, tol) + _signs(t, tol))).sum()) + 0.0


def kl_and_representativeness(rho, pi):
    """Relative entropy ``Tr rho (ln rho - ln pi)`` and ``1 / (1 + KL)``.

    Logarithms are taken on supports; if the support of ``rho`` is not inside
    that of ``pi`` the divergence is infinite and the representativeness 0.
    """
    a, b = dc.matrix_of(rho), dc.matrix_of(pi)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.shape} vs {b.shape}")
    er, ep = dc.get_eig(rho), dc.get_eig(pi)
    if not dc.subspace_contains(er.eigenspace("kernel"), ep.eigenspace("kernel")):
        return math.inf, 0.0
    lam = er.eigenvalues[er.nonzero]
    self_term = float(np.sum(lam * np.log(lam)))
    W = ep.eigenvectors[:, ep.nonzero]
    mu = ep.eigenvalues[ep.nonzero]
    weights = np.einsum("ji,jk,ki->i", W.conj(), a, W).real
    cross = float(np.sum(weights * np.log(mu)))
    kl = max(0.0, self_term - cross)
    return kl, 1.0 / (1.0 + kl)


# ---------------------------------------------------------------------------
# batch scoring


def read_pairs(path):
    """Tab-separated token pairs, one per line."""
    pairs = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) < 2:
            fields = raw.split()
        if len(fields) != 2:
            raise ParseError(lineno, "expected two tab-separated tokens")
        pairs.append((fields[0].strip(), fields[1].strip()))
    return pairs


MEASURE_NAMES = ("cosine", "kl", "repr", "sim", "graded", "smooth")


def score_pair(store, a, b, measure, spec=None, params=None, alpha=0.5, k=None, weights=None,
               context_rank=0):
    """Score one pair; raises ``UnknownToken`` for missing tokens."""
    if measure == "cosine":
        return cosine_similarity(store, a, b)
    if measure in ("kl", "repr"):
        kl, r = kl_and_representativeness(
            to_density(store, a, context_rank), to_density(store, b, context_rank)
        )
        return kl if measure == "kl" else r
    x, y = to_distribution(store, a), to_distribution(store, b)
    if measure == "smooth":
        return float(smooth_leq(spec or OrderSpec("bayesian"), alpha, x, y))
    params = params or RioParams(store.dim)
    if measure == "graded":
        if k is None:
            return max_classical_grade_lifted(params, x, y)
        return float(graded_leq_lifted(params, k, x, y))
    if measure == "sim":
        w = weights or SimWeights.uniform(store.dim - 1)
        return sim_classical_lifted(params, w, x, y)
    raise ParameterOutOfRange(f"unknown measure {measure!r}")


def score_pairs(store, pairs, measure, **options):
    """Scores in input order; unknown tokens give ``None``."""
    out, missing = [], 0
    for a, b in pairs:
        try:
            out.append((a, b, score_pair(store, a, b, measure, **options)))
        except UnknownToken:
            missing += 1
            out.append((a, b, None))
    return out, missing


__all__ = [
    "WordVectorStore",
    "parse_vectors",
    "load_vectors",
    "to_distribution",
    "to_density",
    "cosine_similarity",
    "smooth_leq",
    "find_intransitive_triple",
    "graded_leq_classical",
    "graded_leq_lifted",
    "max_classical_grade",
    "graded_loewner",
    "max_grade",
    "SimWeights",
    "sim_classical",
    "sim_classical_lifted",
    "sim_density",
    "kl_and_representativeness",
    "read_pairs",
    "score_pair",
    "score_pairs",
]
