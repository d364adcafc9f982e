"""Points of the probability simplex and its monotone sector.

A :class:`Distribution` is an immutable point of the simplex on ``n`` points;
a :class:`MonotoneDistribution` additionally has non-increasing entries.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NegativeEntry,
    ParameterOutOfRange,
    ZeroMass,
)

#: Entries at or below this value count as zero (zero sets, x_minus, ties).
ZERO_TOL = 1e-10
#: Two entries closer than this are treated as tied.
TIE_TOL = 1e-10
#: Negative noise tolerated (and clamped) on construction.
NEG_TOL = 1e-12


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


class Distribution:
    """A probability vector. Construction clamps tiny negatives and renormalizes."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size < 1:
            raise DimensionMismatch("a distribution needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise NegativeEntry("entries must be finite")
        bad = np.flatnonzero(arr < -NEG_TOL)
        if bad.size:
            raise NegativeEntry(f"entry {bad[0]} is negative ({arr[bad[0]]!r})")
        arr = np.clip(arr, 0.0, None)
        total = arr.sum()
        if total <= 0:
            raise ZeroMass("entries sum to zero")
        self._values = _frozen(arr / total)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.size

    def __array__(self, dtype=None, copy=None):
        return self._values if dtype is None else self._values.astype(dtype)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self._values.tolist())

    def __getitem__(self, i):
        return self._values[i]

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._values, other._values))

    def __hash__(self):
        return hash(self._values.tobytes())

    def allclose(self, other, atol=1e-9) -> bool:
        other = np.asarray(other, dtype=float)
        return other.shape == self._values.shape and bool(
            np.allclose(self._values, other, rtol=0.0, atol=atol)
        )

    def __repr__(self):
        body = ", ".join(f"{v:.6g}" for v in self._values)
        return f"{type(self).__name__}({body})"


class MonotoneDistribution(Distribution):
    """A distribution whose entries are non-increasing."""

    __slots__ = ()

    def __init__(self, values):
        super().__init__(values)
        if np.any(np.diff(self._values) > TIE_TOL):
            raise ParameterOutOfRange("entries are not sorted in non-increasing order")


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0..n-1}``; ``apply(x)[i] == x[mapping[i]]``."""

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(i) for i in self.mapping)
        if sorted(m) != list(range(len(m))):
            raise ParameterOutOfRange(f"{self.mapping!r} is not a permutation")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, mapping: Sequence[int]) -> "Permutation":
        return cls(tuple(i - 1 for i in mapping))

    @property
    def one_based(self) -> tuple:
        return tuple(i + 1 for i in self.mapping)

    @property
    def n(self) -> int:
        return len(self.mapping)

    def apply(self, x):
        arr = np.asarray(x, dtype=float)
        out = arr[..., list(self.mapping)]
        if isinstance(x, Distribution):
            return Distribution(out)
        return out

    def inverse(self) -> "Permutation":
        inv = np.empty(self.n, dtype=int)
        inv[list(self.mapping)] = np.arange(self.n)
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.mapping == tuple(range(self.n))


def as_array(x) -> np.ndarray:
    return x.values if isinstance(x, Distribution) else np.asarray(x, dtype=float)


def make_distribution(raw, n: int) -> Distribution:
    """Validate ``raw`` as an ``n``-point distribution, renormalizing by its sum.

    >>> make_distribution([6, 2, 2], 3)
    Distribution(0.6, 0.2, 0.2)
    """
    arr = np.asarray(raw, dtype=float).ravel()
    if arr.size != n:
        raise DimensionMismatch(f"expected {n} entries, got {arr.size}")
    return Distribution(arr)


def bottom(n: int) -> Distribution:
    """The uniform distribution on ``n`` points."""
    if n < 1:
        raise IndexOutOfRange("n must be positive")
    return MonotoneDistribution(np.full(n, 1.0 / n))


def top(n: int, i: int) -> Distribution:
    """The pure distribution concentrated on point ``i`` (1-based)."""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"pure state index {i} outside 1..{n}")
    arr = np.zeros(n)
    arr[i - 1] = 1.0
    return MonotoneDistribution(arr) if i == 1 else Distribution(arr)


def canonical(n: int, which) -> Distribution:
    """``which`` is ``"bottom"`` or ``("top", i)`` with 1-based ``i``."""
    if which == "bottom":
        return bottom(n)
    kind, i = which
    if kind != "top":
        raise ParameterOutOfRange(f"unknown canonical element {which!r}")
    return top(n, i)


def sort_permutation(x) -> Permutation:
    """Stable descending sort of ``x``; ties keep their original index order."""
    arr = as_array(x)
    return Permutation(tuple(np.argsort(-arr, kind="stable")))


def monotone_retraction(x):
    """Return ``(r(x), sigma)`` with ``sigma.apply(x) == r(x)`` sorted descending."""
    arr = as_array(x)
    sigma = sort_permutation(arr)
    return MonotoneDistribution(arr[list(sigma.mapping)]), sigma


def retract(arr: np.ndarray) -> np.ndarray:
    """Row-wise descending sort of a batch of distributions."""
    return -np.sort(-np.asarray(arr, dtype=float), axis=-1)


def mix(x, y, t: float) -> Distribution:
    """The convex combination ``(1-t) x + t y``."""
    xa, ya = as_array(x), as_array(y)
    if xa.shape != ya.shape:
        raise DimensionMismatch(f"dimensions differ: {xa.size} vs {ya.size}")
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"mixing parameter {t} outside [0, 1]")
    return Distribution((1.0 - t) * xa + t * ya)


def extremal_coordinates(x) -> np.ndarray:
    """Weights ``a_k = k (x_k - x_{k+1})`` expressing ``x`` in the ``bottom(k)`` basis.

    ``x`` must already be sorted; ``sum_k a_k * bottom(k)`` (each padded with
    zeros to length n) reconstructs it.
    """
    arr = as_array(x)
    padded = np.append(arr, 0.0)
    k = np.arange(1, arr.size + 1)
    return k * (padded[:-1] - padded[1:])


def from_extremal_coordinates(a) -> np.ndarray:
    """Inverse of :func:`extremal_coordinates`."""
    a = np.asarray(a, dtype=float)
    n = a.size
    out = np.zeros(n)
    for k in range(1, n + 1):
        out[:k] += a[k - 1] / k
    return out


@dataclass(frozen=True)
class SpectralStats:
    x_plus: float
    x_minus: float
    zeros: int

    def __iter__(self):
        return iter((self.x_plus, self.x_minus, self.zeros))


def spectral_stats(x) -> SpectralStats:
    """Largest entry, smallest nonzero entry and number of zero entries."""
    arr = as_array(x)
    nonzero = arr[arr > ZERO_TOL]
    return SpectralStats(float(arr.max()), float(nonzero.min()), int(arr.size - nonzero.size))


def zero_set(x) -> frozenset:
    arr = as_array(x)
    return frozenset(np.flatnonzero(arr <= ZERO_TOL).tolist())


def is_bottom(x, atol: float = TIE_TOL) -> bool:
    arr = as_array(x)
    return bool(np.all(np.abs(arr - 1.0 / arr.size) <= atol))


def check_same_dimension(x, y):
    xa, ya = as_array(x), as_array(y)
    if xa.shape != ya.shape:
        raise DimensionMismatch(f"dimensions differ: {xa.shape} vs {ya.shape}")
    return xa, ya
