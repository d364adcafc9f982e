"""Seeded samplers for points and pairs of the simplex.

Uniform points come from a symmetric Dirichlet(1). The pair generators bias
towards comparable pairs, since independent uniform pairs are rarely
comparable for the stricter orders.
"""

import numpy as np

from .simplex import retract


def rng_from(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def uniform_simplex(rng, n, size):
    return rng.dirichlet(np.ones(n), size=size)


def uniform_monotone(rng, n, size):
    return retract(uniform_simplex(rng, n, size))


def random_permutations(rng, n, size):
    return np.argsort(rng.random((size, n)), axis=1)


def permute_rows(X, perms):
    return np.take_along_axis(X, perms, axis=1)


def boundary_points(n):
    """Deterministic boundary cases: embedded uniforms, pure states, ties, zeros."""
    pts = []
    for k in range(1, n + 1):
        v = np.zeros(n)
        v[:k] = 1.0 / k
        pts.append(v)
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        pts.append(v)
    if n >= 3:
        pts.append(np.r_[[0.4, 0.4], np.full(n - 2, 0.2 / (n - 2))])
        pts.append(np.r_[1.0 - 0.3 * (n - 1) / n, np.full(n - 1, 0.3 / n)])
        pts.append(np.r_[[0.5, 0.3, 0.2], np.zeros(n - 3)])
        pts.append(np.r_[[0.2, 0.5, 0.3], np.zeros(n - 3)])
    pts.append(np.r_[[0.7], np.full(n - 1, 0.3 / (n - 1))])
    return np.array(pts)


def _normalize(X):
    X = np.clip(X, 0.0, None)
    return X / X.sum(axis=1, keepdims=True)


def sparsify(rng, X, prob=0.3):
    """Zero out trailing entries of a random subset of sorted rows."""
    X = X.copy()
    n = X.shape[1]
    rows = np.flatnonzero(rng.random(len(X)) < prob)
    for r in rows:
        keep = rng.integers(1, n)
        X[r, keep:] = 0.0
    return _normalize(X)


def tie_points(rng, n, size, where="any"):
    """Sorted points with a forced tie between two adjacent nonzero entries."""
    X = uniform_monotone(rng, n, size)
    if where == "first":
        idx = np.zeros(size, dtype=int)
    elif where == "last":
        idx = np.full(size, n - 2)
    else:
        idx = rng.integers(0, n - 1, size)
    rows = np.arange(size)
    avg = 0.5 * (X[rows, idx] + X[rows, idx + 1])
    X[rows, idx] = avg
    X[rows, idx + 1] = avg
    if where == "any":
        # occasionally zero the tail below the tie
        for r in np.flatnonzero(rng.random(size) < 0.3):
            if idx[r] + 2 < n:
                X[r, idx[r] + 2 :] = 0.0
        X = _normalize(X)
    return X


def candidate_pairs(rng, n, size):
    """A mixture of pair families; rows of X and Y share a sector.

    Families: independent sorted pairs, small perturbations, mixtures with
    the uniform point or a pure state, and points with ties or zeros.
    """
    parts = []
    q = max(size // 6, 1)

    X = uniform_monotone(rng, n, q)
    Y = uniform_monotone(rng, n, q)
    parts.append((X, Y))

    X = uniform_monotone(rng, n, q)
    Y = retract(_normalize(X + rng.normal(scale=0.03, size=X.shape)))
    parts.append((X, Y))

    Y = uniform_monotone(rng, n, q)
    t = rng.random((q, 1))
    parts.append(((1 - t) * np.full((q, n), 1.0 / n) + t * Y, Y))

    X = uniform_monotone(rng, n, q)
    top = np.zeros((q, n))
    top[:, 0] = 1.0
    t = rng.random((q, 1))
    parts.append((X, (1 - t) * X + t * top))

    X = sparsify(rng, uniform_monotone(rng, n, q), prob=0.5)
    Y = sparsify(rng, uniform_monotone(rng, n, q), prob=0.5)
    parts.append((X, Y))

    r = size - 5 * q
    parts.append((uniform_monotone(rng, n, r), tie_points(rng, n, r)))

    X = np.vstack([p[0] for p in parts])
    Y = np.vstack([p[1] for p in parts])
    swap = rng.random(len(X)) < 0.5
    X[swap], Y[swap] = Y[swap].copy(), X[swap].copy()
    perms = random_permutations(rng, n, len(X))
    return permute_rows(X, perms), permute_rows(Y, perms)


def comparable_pairs(leq_batch, rng, n, wanted, batch=None, max_rounds=200):
    """Draw candidate pairs until ``wanted`` rows with ``leq(X, Y)`` are found.

    Pairs comparable in the reverse direction are swapped so every returned
    row satisfies ``leq``. Fewer rows are returned if the budget runs out.
    """
    batch = batch or max(4 * wanted, 600)
    xs, ys, got = [], [], 0
    for _ in range(max_rounds):
        X, Y = candidate_pairs(rng, n, batch)
        fwd = leq_batch(X, Y)
        bwd = leq_batch(Y, X) & ~fwd
        xs += [X[fwd], Y[bwd]]
        ys += [Y[fwd], X[bwd]]
        got += int(fwd.sum() + bwd.sum())
        if got >= wanted:
            break
    return np.vstack(xs)[:wanted], np.vstack(ys)[:wanted]


def random_unitary(rng, n):
    """Haar-distributed unitary from the QR decomposition of a complex Gaussian."""
    Z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
