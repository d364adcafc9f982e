"""Information orders on the simplex and its monotone sector.

Every order has a vectorized kernel acting on row-stacked arrays ``X, Y`` of
shape ``(N, n)`` and a scalar wrapper. Orders defined on the monotone sector
(Bayesian, the restricted orders ``A``, max and min) are extended to the full
simplex by :func:`lift_to_simplex`: two points are comparable only if some
single permutation sorts both, and then the relation is evaluated on their
retractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import sampling
from .errors import DimensionMismatch, IndexOutOfRange, InfeasibleParams, ParameterOutOfRange
from .reports import FAIL, PASS, AxiomResult, PropertyReport
from .simplex import (
    TIE_TOL,
    ZERO_TOL,
    MonotoneDistribution,
    check_same_dimension,
    retract,
)

#: Absolute slack on the degree-2 inequalities: ``a <= b`` iff ``a - b <= ORDER_TOL``.
ORDER_TOL = 1e-12


class RioParams:
    """Parameters ``A^i_j`` (1-based, ``1 <= i <= n-1``, ``i+2 <= j <= n``).

    ``g_i(y) = y_{i+1} + sum_j A^i_j y_j``; feasibility requires every partial
    sum ``1 + sum_{j=i+2}^{k} A^i_j`` to be positive.
    """

    def __init__(self, n: int, A=None):
        if n < 2:
            raise IndexOutOfRange("restricted orders need n >= 2")
        self.n = int(n)
        entries = {}
        for (i, j), value in dict(A or {}).items():
            i, j = int(i), int(j)
            if not (1 <= i <= n - 1 and i + 2 <= j <= n):
                raise IndexOutOfRange(f"A^{i}_{j} is not a parameter for n={n}")
            entries[(i, j)] = float(value)
        self._A = entries
        G = np.zeros((n - 1, n))
        for i in range(n - 1):
            G[i, i + 1] = 1.0
        for (i, j), value in entries.items():
            G[i - 1, j - 1] = value
        for i in range(n - 1):
            partial = np.cumsum(G[i, i + 1 :])
            if np.any(partial <= 0):
                k = i + 2 + int(np.argmax(partial <= 0))
                raise InfeasibleParams(f"1 + sum_(j<={k}) A^{i + 1}_j is not positive")
        G.setflags(write=False)
        self._G = G

    @property
    def G(self) -> np.ndarray:
        """Matrix with ``g_i(y) = (G @ y)[i-1]``."""
        return self._G

    def __getitem__(self, ij):
        return self._A.get(tuple(ij), 0.0)

    def entries(self) -> np.ndarray:
        """All parameters in a fixed (i, j) order, zeros included."""
        return np.array(
            [self[(i, j)] for i in range(1, self.n) for j in range(i + 2, self.n + 1)]
        )

    def items(self):
        return sorted(self._A.items())

    def __eq__(self, other):
        return isinstance(other, RioParams) and self.n == other.n and np.array_equal(
            self.entries(), other.entries()
        )

    def __repr__(self):
        nz = {f"{i},{j}": v for (i, j), v in self.items() if v != 0}
        return f"RioParams(n={self.n}, A={nz})"

    def to_dict(self):
        out = {}
        for (i, j), v in self.items():
            out.setdefault(str(i), {})[str(j)] = v
        return {"n": self.n, "A": out}

    @classmethod
    def from_dict(cls, data) -> "RioParams":
        try:
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterOutOfRange("parameter file needs an integer 'n'") from exc
        A = {}
        for i, row in (data.get("A") or {}).items():
            for j, value in row.items():
                A[(int(i), int(j))] = float(value)
        return cls(n, A)

    @classmethod
    def from_json(cls, text: str) -> "RioParams":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "RioParams":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def preset_rio(name: str, n: int) -> RioParams:
    """Named parameter sets: ``bayesian`` (A = 0), ``entropy`` (E) and ``ones`` (1)."""
    key = name.lower().replace("_", "").replace("-", "")
    if key in ("bayesian", "zero"):
        return RioParams(n)
    if key in ("entropy", "entropyordere", "e"):
        return RioParams(n, {(1, j): 1.0 for j in range(3, n + 1)})
    if key in ("ones", "onesorder1", "1"):
        return RioParams(n, {(i, j): 1.0 for i in range(1, n) for j in range(i + 2, n + 1)})
    raise ParameterOutOfRange(f"unknown preset {name!r}")


def random_rio_params(rng, n, negative=False) -> RioParams:
    """A feasible random parameter set; all entries are negative if ``negative``."""
    if n < 3:
        return RioParams(n)
    scale = 0.9 / (n - 2)
    A = {}
    for i in range(1, n):
        for j in range(i + 2, n + 1):
            lo, hi = (-1.0, 0.0) if negative else (-1.0, 2.0)
            A[(i, j)] = scale * rng.uniform(lo, hi)
    return RioParams(n, A)


# ---------------------------------------------------------------------------
# kernels on the monotone sector (rows assumed sorted descending)


def _bayesian_mono(X, Y, tol):
    return np.all(X[:, :-1] * Y[:, 1:] - Y[:, :-1] * X[:, 1:] <= tol, axis=1)


def _rio_mono(G, X, Y, tol):
    fX, fY = X[:, :-1] - X[:, 1:], Y[:, :-1] - Y[:, 1:]
    gX, gY = X @ G.T, Y @ G.T
    return np.all(fX * gY - fY * gX <= tol, axis=1)


def _max_mono(X, Y, tol):
    N, n = X.shape
    both_zero = (X <= ZERO_TOL) & (Y <= ZERO_TOL)
    # effective length: strip trailing coordinates where both vanish
    trailing = np.cumprod(both_zero[:, ::-1], axis=1).sum(axis=1)
    m = n - trailing
    rows = np.arange(N)
    xm, ym = X[rows, m - 1], Y[rows, m - 1]
    x_nz, y_nz = xm > ZERO_TOL, ym > ZERO_TOL

    fX, fY = X[:, :-1] - X[:, 1:], Y[:, :-1] - Y[:, 1:]
    case_b = np.all(fX * ym[:, None] - fY * xm[:, None] <= tol, axis=1)
    y_tied = (np.abs(fY) <= TIE_TOL) & (Y[:, :-1] > ZERO_TOL)
    case_c = ~np.any(y_tied & (np.abs(fX) > TIE_TOL), axis=1)

    out = np.where(x_nz & y_nz, case_b, False)
    out = np.where(x_nz & ~y_nz, case_c, out)
    return out | (m <= 1)


def _min_mono(X, Y, tol):
    N, n = X.shape
    Xp = np.hstack([X, np.zeros((N, 1))])
    Yp = np.hstack([Y, np.zeros((N, 1))])
    fX, fY = Xp[:, :-1] - Xp[:, 1:], Yp[:, :-1] - Yp[:, 1:]
    # D[:, k, j] = v_{k+1} - v_j for j in 0..n
    DX = Xp[:, 1:, None] - Xp[:, None, :]
    DY = Yp[:, 1:, None] - Yp[:, None, :]
    k, j = np.meshgrid(np.arange(n), np.arange(n + 1), indexing="ij")
    mask = j > k
    F = fX[:, :, None] * DY - fY[:, :, None] * DX
    ok = np.all((F <= tol) | ~mask, axis=(1, 2))
    x_bot = np.all(np.abs(X - 1.0 / n) <= TIE_TOL, axis=1)
    y_bot = np.all(np.abs(Y - 1.0 / n) <= TIE_TOL, axis=1)
    return np.where(y_bot, x_bot, ok)


# ---------------------------------------------------------------------------
# kernels on the full simplex


def discordant(X, Y, tol=TIE_TOL):
    """True for rows admitting no common sorting permutation.

    Such a permutation exists iff no pair ``i, j`` has ``x_i > x_j`` and
    ``y_i < y_j`` strictly.
    """
    dX = X[:, :, None] - X[:, None, :]
    dY = Y[:, :, None] - Y[:, None, :]
    return np.any((dX > tol) & (dY < -tol), axis=(1, 2))


def lift_batch(mono_kernel, X, Y):
    return ~discordant(X, Y) & mono_kernel(retract(X), retract(Y))


def _lplus(X, Y, tol):
    xp, yp = X.max(axis=1, keepdims=True), Y.max(axis=1, keepdims=True)
    return np.all(xp * Y - yp * X <= tol, axis=1)


def _lminus(X, Y, tol):
    zx, zy = X <= ZERO_TOL, Y <= ZERO_TOL
    xm = np.where(zx, np.inf, X).min(axis=1, keepdims=True)
    ym = np.where(zy, np.inf, Y).min(axis=1, keepdims=True)
    same_z = np.all(zx == zy, axis=1)
    case_1 = same_z & np.all(X * ym - Y * xm <= tol, axis=1)
    strict_sub = np.all(~zx | zy, axis=1) & np.any(zy & ~zx, axis=1)
    case_2 = strict_sub & np.any(zy & (np.abs(X - xm) <= TIE_TOL), axis=1)
    return case_1 | case_2


def _majorization(X, Y, tol):
    cx = np.cumsum(retract(X), axis=1)
    cy = np.cumsum(retract(Y), axis=1)
    return np.all(cx - cy <= tol, axis=1)


# ---------------------------------------------------------------------------
# scalar API


def _pair(x, y):
    xa, ya = check_same_dimension(x, y)
    return xa[None, :], ya[None, :]


def lift_to_simplex(leq_on_monotone, x, y) -> bool:
    """Extend a relation on the monotone sector to the whole simplex."""
    X, Y = _pair(x, y)
    if discordant(X, Y)[0]:
        return False
    return bool(leq_on_monotone(MonotoneDistribution(retract(X)[0]), MonotoneDistribution(retract(Y)[0])))


def leq_bayesian(x, y, tol=ORDER_TOL) -> bool:
    """``x_k y_{k+1} <= y_k x_{k+1}`` in a sector shared by ``x`` and ``y``.

    >>> leq_bayesian([0.5, 0.3, 0.2], [0.6, 0.3, 0.1])
    True
    """
    X, Y = _pair(x, y)
    return bool(lift_batch(lambda a, b: _bayesian_mono(a, b, tol), X, Y)[0])


def leq_rio(params: RioParams, x, y, tol=ORDER_TOL) -> bool:
    """The restricted order ``A`` on the monotone sector."""
    X, Y = _pair(x, y)
    if params.n != X.shape[1]:
        raise DimensionMismatch(f"parameters are for n={params.n}, points have n={X.shape[1]}")
    return bool(_rio_mono(params.G, X, Y, tol)[0])


def leq_max_restricted(x, y, tol=ORDER_TOL) -> bool:
    """The maximal restricted order on the monotone sector."""
    X, Y = _pair(x, y)
    return bool(_max_mono(X, Y, tol)[0])


def leq_min_restricted(x, y, tol=ORDER_TOL) -> bool:
    """The minimal restricted order on the monotone sector."""
    X, Y = _pair(x, y)
    return bool(_min_mono(X, Y, tol)[0])


def leq_lowner_plus_simplex(x, y, tol=ORDER_TOL) -> bool:
    """``x+ y_k <= y+ x_k`` for every ``k``, where ``x+`` is the largest entry."""
    X, Y = _pair(x, y)
    return bool(_lplus(X, Y, tol)[0])


def leq_lowner_minus_simplex(x, y, tol=ORDER_TOL) -> bool:
    """Renormalization by the smallest nonzero entry, with the zero-set clause."""
    X, Y = _pair(x, y)
    return bool(_lminus(X, Y, tol)[0])


def leq_majorization(x, y, tol=ORDER_TOL) -> bool:
    """Prefix sums of the sorted ``x`` are dominated by those of ``y``."""
    X, Y = _pair(x, y)
    return bool(_majorization(X, Y, tol)[0])


# ---------------------------------------------------------------------------
# dispatch


class OrderKind(str, Enum):
    BAYESIAN = "bayesian"
    RIO = "rio"
    MAX = "max"
    MIN = "min"
    LPLUS = "lplus"
    LMINUS = "lminus"
    MAJOR = "major"


class ComparisonResult(str, Enum):
    LESS = "LESS"
    GREATER = "GREATER"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"

    @classmethod
    def from_flags(cls, le: bool, ge: bool) -> "ComparisonResult":
        if le and ge:
            return cls.EQUAL
        if le:
            return cls.LESS
        if ge:
            return cls.GREATER
        return cls.INCOMPARABLE

    def reversed(self) -> "ComparisonResult":
        return {self.LESS: self.GREATER, self.GREATER: self.LESS}.get(self, self)


_SECTOR_KINDS = (OrderKind.BAYESIAN, OrderKind.RIO, OrderKind.MAX, OrderKind.MIN)


@dataclass(frozen=True)
class OrderSpec:
    """A named order on the simplex together with its comparison tolerance."""

    kind: OrderKind
    params: RioParams = None
    tol: float = ORDER_TOL

    def __post_init__(self):
        object.__setattr__(self, "kind", OrderKind(self.kind))
        if self.kind is OrderKind.RIO and self.params is None:
            raise ParameterOutOfRange("a restricted order needs RioParams")

    @classmethod
    def rio(cls, params, tol=ORDER_TOL):
        return cls(OrderKind.RIO, params, tol)

    @classmethod
    def preset(cls, name, n, tol=ORDER_TOL):
        return cls(OrderKind.RIO, preset_rio(name, n), tol)

    @property
    def name(self) -> str:
        if self.kind is OrderKind.RIO:
            nz = ",".join(f"A{i}{j}={v:g}" for (i, j), v in self.params.items() if v)
            return f"rio[{nz}]"
        return self.kind.value

    @property
    def antisymmetric(self) -> bool:
        return self.kind is not OrderKind.MAJOR

    @property
    def on_sector(self) -> bool:
        return self.kind in _SECTOR_KINDS

    def leq_monotone(self, X, Y) -> np.ndarray:
        """Batch relation on sorted rows (sector orders only)."""
        X, Y = np.atleast_2d(X), np.atleast_2d(Y)
        k, tol = self.kind, self.tol
        if k is OrderKind.BAYESIAN:
            return _bayesian_mono(X, Y, tol)
        if k is OrderKind.RIO:
            if self.params.n != X.shape[1]:
                raise DimensionMismatch(
                    f"parameters are for n={self.params.n}, points have n={X.shape[1]}"
                )
            return _rio_mono(self.params.G, X, Y, tol)
        if k is OrderKind.MAX:
            return _max_mono(X, Y, tol)
        if k is OrderKind.MIN:
            return _min_mono(X, Y, tol)
        return self.leq_batch(X, Y)

    def leq_batch(self, X, Y) -> np.ndarray:
        """Row-wise relation on the full simplex."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        if X.shape != Y.shape:
            raise DimensionMismatch(f"shapes differ: {X.shape} vs {Y.shape}")
        if self.on_sector:
            return lift_batch(self.leq_monotone, X, Y)
        if self.kind is OrderKind.LPLUS:
            return _lplus(X, Y, self.tol)
        if self.kind is OrderKind.LMINUS:
            return _lminus(X, Y, self.tol)
        return _majorization(X, Y, self.tol)

    def leq(self, x, y) -> bool:
        X, Y = _pair(x, y)
        return bool(self.leq_batch(X, Y)[0])

    def compare(self, x, y) -> ComparisonResult:
        return compare(self, x, y)


def compare(spec: OrderSpec, x, y) -> ComparisonResult:
    """Evaluate ``spec`` in both directions."""
    X, Y = _pair(x, y)
    both = spec.leq_batch(np.vstack([X, Y]), np.vstack([Y, X]))
    return ComparisonResult.from_flags(bool(both[0]), bool(both[1]))


# ---------------------------------------------------------------------------
# property suite

DEGENERACY_VARIANTS = ("full", "first", "last")

# expected degeneracy outcomes for orders that are not restricted
_DEGENERACY_EXPECTED = {
    OrderKind.LPLUS: {"full": FAIL, "first": PASS, "last": FAIL},
    OrderKind.LMINUS: {"full": FAIL, "first": FAIL, "last": PASS},
    OrderKind.MAJOR: {"full": FAIL, "first": FAIL, "last": FAIL},
}


def expected_degeneracy(spec: OrderSpec, variant: str) -> str:
    return _DEGENERACY_EXPECTED.get(spec.kind, {}).get(variant, PASS)


def degeneracy_violations(X, Y, x_tol=1e-9):
    """Rows where ``y_i = y_j != 0`` but not ``x_i = x_j != 0``."""
    tied = (np.abs(Y[:, :, None] - Y[:, None, :]) <= TIE_TOL) & (Y[:, :, None] > ZERO_TOL)
    x_ok = (np.abs(X[:, :, None] - X[:, None, :]) <= x_tol) & (X[:, :, None] > ZERO_TOL)
    return np.any(tied & ~x_ok, axis=(1, 2))


def _same_sector_noise(rng, Y, scale):
    """Perturb rows of ``Y`` and put the result back into each row's sector."""
    Z = np.clip(Y + rng.normal(scale=scale, size=Y.shape), 0, None)
    Z = retract(Z / Z.sum(axis=1, keepdims=True))
    order = np.argsort(-Y, axis=1, kind="stable")
    out = np.empty_like(Z)
    np.put_along_axis(out, order, Z, axis=1)
    return out


def _upper_candidates(rng, Y):
    """Points likely to lie above the rows of ``Y``."""
    N, n = Y.shape
    tops = np.zeros_like(Y)
    tops[np.arange(N), Y.argmax(axis=1)] = 1.0
    t = rng.random((N, 1))
    near = _same_sector_noise(rng, Y, 0.02)
    towards_top = (1 - t) * Y + t * tops
    return np.vstack([near, towards_top, 0.5 * (near + towards_top)])


def order_property_suite(spec: OrderSpec, n: int, samples: int, seed) -> PropertyReport:
    """Sample the information-order axioms and the degeneracy condition.

    Each axiom gets its own :class:`AxiomResult` with the number of trials,
    failures and the first counterexample. Antisymmetry is expected to fail
    for majorization (a preorder) and the degeneracy variants are expected to
    fail for the unrestricted orders, as recorded in ``expected``.
    """
    if samples < 1 or n < 2:
        raise ParameterOutOfRange("need samples >= 1 and n >= 2")
    rng = sampling.rng_from(seed)
    leq = spec.leq_batch
    report = PropertyReport(
        f"order axioms: {spec.name}", meta={"n": n, "samples": samples, "seed": _seed_meta(seed)}
    )

    pts = np.vstack([sampling.uniform_simplex(rng, n, samples), sampling.boundary_points(n)])

    r = report.add(AxiomResult("reflexivity"))
    r.record_batch(leq(pts, pts), lambda i: {"x": pts[i]})

    bot = np.full_like(pts, 1.0 / n)
    r = report.add(AxiomResult("bottom_least"))
    r.record_batch(leq(bot, pts), lambda i: {"x": pts[i]})

    # pure states are only maximal up to permutation for a preorder
    r = report.add(AxiomResult("tops_maximal", expected=PASS if spec.antisymmetric else FAIL))
    for i in range(n):
        top = np.zeros_like(pts)
        top[:, i] = 1.0
        ok = ~leq(top, pts) | np.all(np.abs(pts - top) <= 1e-9, axis=1)
        r.record_batch(ok, lambda k, i=i: {"top": i + 1, "above": pts[k]})

    X, Y = sampling.candidate_pairs(rng, n, samples)
    perms = sampling.random_permutations(rng, n, len(X))
    PX, PY = sampling.permute_rows(X, perms), sampling.permute_rows(Y, perms)
    r = report.add(AxiomResult("permutation_invariance"))
    r.record_batch(leq(X, Y) == leq(PX, PY), lambda i: {"x": X[i], "y": Y[i], "sigma": perms[i]})

    CX, CY = sampling.comparable_pairs(leq, rng, n, samples)
    report.meta["comparable_pairs"] = len(CX)
    r = report.add(AxiomResult("mixing"))
    for t in np.round(np.arange(0.1, 1.0, 0.1), 1):
        M = (1 - t) * CX + t * CY
        ok = leq(CX, M) & leq(M, CY)
        r.record_batch(ok, lambda i, t=t: {"x": CX[i], "y": CY[i], "t": t})

    # antisymmetry: permuted copies, near pairs and comparable pairs
    perms = sampling.random_permutations(rng, n, len(pts))
    AX = np.vstack([pts, CX, X])
    AY = np.vstack([sampling.permute_rows(pts, perms), CY, Y])
    both = leq(AX, AY) & leq(AY, AX)
    equal = np.all(np.abs(AX - AY) <= 1e-9, axis=1)
    r = report.add(
        AxiomResult("antisymmetry", expected=PASS if spec.antisymmetric else FAIL)
    )
    idx = np.flatnonzero(both)
    r.record_batch(equal[idx], lambda i: {"x": AX[idx[i]], "y": AY[idx[i]]})

    r = report.add(AxiomResult("transitivity"))
    Z = _upper_candidates(rng, CY)
    XX, YY = np.tile(CX, (3, 1)), np.tile(CY, (3, 1))
    chain = leq(YY, Z)
    idx = np.flatnonzero(chain)
    r.record_batch(
        leq(XX[idx], Z[idx]), lambda i: {"x": XX[idx[i]], "y": YY[idx[i]], "z": Z[idx[i]]}
    )

    for variant in DEGENERACY_VARIANTS:
        DX, DY = _degeneracy_pairs(rng, n, samples, variant)
        mask = leq(DX, DY)
        idx = np.flatnonzero(mask)
        bad = degeneracy_violations(DX[idx], DY[idx])
        r = report.add(
            AxiomResult(f"degeneracy_{variant}", expected=expected_degeneracy(spec, variant))
        )
        r.record_batch(~bad, lambda i: {"x": DX[idx[i]], "y": DY[idx[i]]})
    return report


def _degeneracy_pairs(rng, n, samples, variant):
    if variant == "last":
        Y = sampling.tie_points(rng, n, samples, where="last")
    elif variant == "first":
        Y = sampling.tie_points(rng, n, samples, where="first")
    else:
        Y = sampling.tie_points(rng, n, samples, where="any")
    q = len(Y)
    t = rng.random((q, 1))
    bot = np.full_like(Y, 1.0 / n)
    cands = [
        sampling.uniform_simplex(rng, n, q),
        sampling.uniform_monotone(rng, n, q),
        _same_sector_noise(rng, Y, 0.02),
        _same_sector_noise(rng, Y, 0.005),
        (1 - t) * bot + t * Y,
        _same_sector_noise(rng, (1 - t) * bot + t * Y, 0.01),
    ]
    X = np.vstack(cands)
    Y = np.tile(Y, (len(cands), 1))
    perms = sampling.random_permutations(rng, n, len(X))
    return sampling.permute_rows(X, perms), sampling.permute_rows(Y, perms)


def _seed_meta(seed):
    return seed if isinstance(seed, (int, type(None))) else "generator"


__all__ = [
    "ORDER_TOL",
    "RioParams",
    "preset_rio",
    "random_rio_params",
    "OrderKind",
    "OrderSpec",
    "ComparisonResult",
    "compare",
    "lift_to_simplex",
    "leq_bayesian",
    "leq_rio",
    "leq_max_restricted",
    "leq_min_restricted",
    "leq_lowner_plus_simplex",
    "leq_lowner_minus_simplex",
    "leq_majorization",
    "order_property_suite",
    "degeneracy_violations",
    "discordant",
    "lift_batch",
]
