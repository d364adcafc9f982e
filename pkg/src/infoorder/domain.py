"""Falsification probes for directed joins and the way-below relation.

Way-below is universally quantified over directed sets, so these probes can
only refute: they build seeded families of increasing chains and report the
first chain that witnesses a failure, or that none was found.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import density as dc
from . import sampling
from .classical import OrderKind, OrderSpec
from .density_orders import DensityOrderKind, density_leq
from .errors import NotConvergent, NotIncreasing, PreconditionFailed
from .reports import _plain
from .simplex import ZERO_TOL, Distribution, as_array, retract

CHAIN_LENGTH = 40
CAUCHY_TOL = 1e-7
#: Chain elements this close to the target count as reaching it.
HIT_TOL = 1e-9
#: Chain elements this close to the join are numerically the join itself.
RESOLUTION = 1e-8


def mixing_parameters(length=CHAIN_LENGTH) -> np.ndarray:
    """Geometric schedule ``t_i = 1 - 2^-i`` for ``i = 0 .. length-1``."""
    return 1.0 - 0.5 ** np.arange(length)


def geometric_chain(start, target, length=CHAIN_LENGTH):
    """Points ``(1 - t_i) start + t_i target`` along the geometric schedule."""
    density = isinstance(start, dc.PositiveOperator)
    a, b = (dc.matrix_of(start), dc.matrix_of(target)) if density else (as_array(start), as_array(target))
    out = []
    for t in mixing_parameters(length):
        m = (1 - t) * a + t * b
        out.append(dc.DensityOperator._trusted(m) if density else m)
    return out


class _Order:
    """Uniform view of simplex and density orders for the probes."""

    def __init__(self, order):
        self.spec = None
        self.kind = None
        if isinstance(order, OrderSpec):
            self.spec = order
        elif isinstance(order, DensityOrderKind):
            self.kind = order
        elif isinstance(order, str):
            try:
                self.spec = OrderSpec(OrderKind(order))
            except ValueError:
                self.kind = DensityOrderKind(order)
        elif callable(order):
            self._fn = order
        else:
            raise PreconditionFailed(f"unsupported order {order!r}")

    @property
    def density(self):
        return self.kind is not None

    def leq(self, a, b) -> bool:
        if self.spec is not None:
            return self.spec.leq(a, b)
        if self.kind is not None:
            return density_leq(self.kind, a, b)
        return bool(self._fn(a, b))


def _snap(element):
    """Round tiny entries (or eigenvalues) to zero and renormalize."""
    if isinstance(element, dc.PositiveOperator):
        e = element.eig
        lam = np.where(e.eigenvalues <= ZERO_TOL, 0.0, e.eigenvalues)
        V = e.eigenvectors
        M = dc.hermitian_part((V * lam) @ V.conj().T)
        return dc.DensityOperator._trusted(M / lam.sum())
    arr = np.where(as_array(element) <= ZERO_TOL, 0.0, as_array(element))
    return Distribution(arr)


def _distance(a, b) -> float:
    if isinstance(a, dc.PositiveOperator) or isinstance(b, dc.PositiveOperator):
        return float(np.max(np.abs(dc.matrix_of(a) - dc.matrix_of(b))))
    return float(np.max(np.abs(as_array(a) - as_array(b))))


@dataclass
class NoJoinEvidence:
    """The numeric limit of a chain fails to bound the element at ``index``."""

    index: int
    limit: object
    chain_length: int

    def to_dict(self):
        return {"no_join": True, "index": self.index, "limit": _plain(_values(self.limit)),
                "chain_length": self.chain_length}


def _values(x):
    return dc.matrix_of(x) if isinstance(x, dc.PositiveOperator) else as_array(x)


def chain_join(order, chain):
    """Join of an increasing, numerically convergent chain.

    Verifies the chain is increasing (``NotIncreasing``; neighbours within
    ``HIT_TOL`` of each other are exempt) and Cauchy within
    ``1e-7`` over its last quarter (``NotConvergent``); returns the snapped
    limit if it bounds every element, else :class:`NoJoinEvidence`.
    """
    leq = _Order(order).leq
    chain = list(chain)
    if not chain:
        raise NotConvergent("empty chain")
    for i in range(len(chain) - 1):
        # neighbours closer than the resolution are numerically the same point
        if not leq(chain[i], chain[i + 1]) and _distance(chain[i], chain[i + 1]) > HIT_TOL:
            raise NotIncreasing(i)
    tail = chain[len(chain) - max(1, len(chain) // 4) :]
    spread = max(_distance(a, tail[-1]) for a in tail)
    if spread > CAUCHY_TOL:
        raise NotConvergent(f"last quarter spreads by {spread:.3g}")
    limit = _snap(chain[-1])
    for i, a in enumerate(chain):
        if not leq(a, limit):
            return NoJoinEvidence(i, limit, len(chain))
    return limit


# ---------------------------------------------------------------------------
# way-below


@dataclass
class NoCounterexample:
    claim: str
    chains_tried: int
    families: dict = field(default_factory=dict)

    found = False

    def to_dict(self):
        return {"claim": self.claim, "chains_tried": self.chains_tried,
                "families": self.families, "counterexample": None}


@dataclass
class Counterexample:
    claim: str
    chains_tried: int
    family: str
    chain: list
    join: object

    found = True

    def to_dict(self):
        return {
            "claim": self.claim,
            "chains_tried": self.chains_tried,
            "counterexample": {
                "family": self.family,
                "join": _plain(_values(self.join)),
                "first": _plain(_values(self.chain[0])),
                "last": _plain(_values(self.chain[-1])),
                "length": len(self.chain),
            },
        }


def _classical_families(spec, rng, x, y, restrict):
    """Yield ``(family, start, upper)`` for simplex orders, round-robin."""
    n = y.size
    leq = spec.leq
    top_i = int(np.argmax(y))
    top = np.zeros(n)
    top[top_i] = 1.0
    bottom = np.full(n, 1.0 / n)
    order = np.argsort(-y, kind="stable")

    def in_sector(v):
        # place the sorted entries of v into y's sector
        out = np.empty(n)
        out[order] = retract(v[None])[0]
        return out

    def upper():
        for _ in range(50):
            r = rng.random()
            if r < 0.3:
                u = y.copy()
            elif r < 0.7:
                u = (1 - rng.random()) * y + rng.random() * top
                u /= u.sum()
            else:
                u = np.clip(y + rng.normal(scale=0.05, size=n), 0, None)
                u = in_sector(u / u.sum())
            if leq(y, u):
                return u
        return top

    crossing = not restrict and n >= 3 and leq(y, top)
    families = ["mix_from_bottom", "random_below"] + (["sector_crossing"] if crossing else [])
    k = 0
    while True:
        fam = families[k % len(families)]
        k += 1
        if fam == "mix_from_bottom":
            u = upper()
            s = (1 - rng.random()) * bottom + rng.random() * u
            s = s / s.sum()
        elif fam == "random_below":
            u = upper()
            for _ in range(50):
                s = sampling.uniform_simplex(rng, n, 1)[0]
                if restrict or spec.on_sector:
                    s = in_sector(s)
                if leq(s, u):
                    break
            else:
                s = bottom
        else:
            # start in another sector that keeps y's argmax on top and head to that pure state
            u = top
            rest = [i for i in range(n) if i != top_i]
            vals = np.sort(rng.dirichlet(np.ones(n)))[::-1]
            if rng.random() < 0.5:
                vals[-1] = 0.0
            s = np.empty(n)
            s[top_i] = vals[0]
            perm = rng.permutation(len(rest))
            while n > 2 and np.array_equal(np.asarray(rest)[perm], order[1:]):
                perm = rng.permutation(len(rest))
            s[np.asarray(rest)[perm]] = vals[1:]
            s = s / s.sum()
        yield fam, s, u


def _density_families(kind, rng, x, y):
    n = y.n
    e = y.eig
    v = e.eigenvectors[:, :1]
    P = dc.pure_state(v[:, 0])
    bottom = dc.bottom_density(n)
    top_ok = density_leq(kind, y, P)
    families = ["mix_from_bottom"]
    if kind is DensityOrderKind.PLUS:
        families += ["rotated_below"] + (["pure_rotating"] if top_ok and n >= 2 else [])

    def upper():
        r = rng.random()
        if r < 0.4 or not top_ok:
            return y
        t = rng.random()
        return dc.DensityOperator._trusted((1 - t) * y.matrix + t * P.matrix)

    k = 0
    while True:
        fam = families[k % len(families)]
        k += 1
        if fam == "mix_from_bottom":
            u = upper()
            t = rng.random()
            s = dc.DensityOperator._trusted((1 - t) * bottom.matrix + t * u.matrix)
        elif fam == "rotated_below":
            u = upper()
            s = _plus_below(rng, u)
        else:
            u = P
            M = dc.random_density(rng, n, basis=_complement_basis(v))
            c = rng.uniform(0.5, 1.0)
            s = dc.DensityOperator._trusted(c * P.matrix + (1 - c) * M.matrix)
        yield fam, s, u


def _complement_basis(v):
    n = v.shape[0]
    Q, _ = np.linalg.qr(np.hstack([v, np.eye(n, dtype=complex)]))
    return Q[:, 1:n]


def _plus_below(rng, u):
    """A random density matrix below ``u`` in the maximum-eigenvalue order."""
    e = u.eig
    n = u.n
    v = e.eigenvectors[:, :1]
    lam = e.eigenvalues
    gap = 1.0 - (lam[1] / lam[0] if n > 1 else 0.0)
    B = _complement_basis(v)
    G = rng.normal(size=(n - 1, n - 1)) + 1j * rng.normal(size=(n - 1, n - 1))
    D = B @ (G @ G.conj().T) @ B.conj().T
    D /= np.max(np.linalg.eigvalsh(D))
    F = u.matrix / lam[0] + rng.uniform(0, 1) * gap * D
    return dc.DensityOperator._trusted(dc.hermitian_part(F / np.trace(F).real))


def way_below_probe(order, x, y, sequence_budget: int, seed, restrict_to_monotone=False):
    """Search for an increasing chain whose join is above ``y`` but no element is above ``x``.

    Chain families: mixtures from the uniform point towards random upper
    bounds of ``y``, random starts below such bounds, and adversarial chains
    that cross sectors (simplex orders) or rotate the eigenbasis (density
    maximum-eigenvalue order). ``restrict_to_monotone`` keeps every simplex
    chain inside the monotone sector.
    """
    o = _Order(order)
    if not o.leq(x, y):
        raise PreconditionFailed("x must be below y")
    rng = sampling.rng_from(seed)
    if o.density:
        gen = _density_families(o.kind, rng, x, y)
    else:
        spec = o.spec or OrderSpec(OrderKind.BAYESIAN)
        gen = _classical_families(spec, rng, as_array(x), as_array(y), restrict_to_monotone)
    claim = "x way-below y"
    tried, per_family = 0, {}
    for _ in range(sequence_budget):
        fam, s, u = next(gen)
        chain = geometric_chain(s, u)
        join = _snap(chain[-1])
        if not o.leq(y, join):
            continue
        tried += 1
        per_family[fam] = per_family.get(fam, 0) + 1
        if _reaches(o, x, chain, join):
            continue
        return Counterexample(claim, tried, fam, chain, join)
    return NoCounterexample(claim, tried, per_family)


def _reaches(o, x, chain, join) -> bool:
    """Some element is above ``x`` (or within ``HIT_TOL`` of it).

    Elements within ``RESOLUTION`` of the join cannot be told apart from it
    (their small entries fall under the zero and tie thresholds), so only
    resolvable elements are tested against ``x``.
    """
    for a in chain:
        if _distance(x, a) <= HIT_TOL:
            return True
    resolvable = [a for a in chain if _distance(a, join) > RESOLUTION]
    # chains are increasing, so test the far end first
    return any(o.leq(x, a) for a in reversed(resolvable))


# ---------------------------------------------------------------------------
# the maximal restricted order is not directed complete


def dcpo_max_counterexample(n=3, x=None, length=CHAIN_LENGTH, bound_count=50):
    """Chain in the maximal restricted order heading to the embedded ``bottom(2)``.

    Returns the join evidence together with checks that the family
    ``y_k = (1 + 1/k, 1 - 1/k, 0, ...)/2`` bounds the chain while the
    embedded ``bottom(2)`` does not.
    """
    spec = OrderSpec(OrderKind.MAX)
    if x is None:
        x = np.array([0.5, 0.3, 0.2]) if n == 3 else np.arange(n, 0, -1.0) / (n * (n + 1) / 2)
    bot2 = np.zeros(n)
    bot2[:2] = 0.5
    chain = geometric_chain(x, bot2, length)
    evidence = chain_join(spec, chain)
    ks = np.arange(2, bound_count + 2)
    bounds = [np.r_[0.5 * (1 + 1 / k), 0.5 * (1 - 1 / k), np.zeros(n - 2)] for k in ks]
    bounds_ok = all(spec.leq(a, b) for b in bounds for a in chain)
    decreasing = all(spec.leq(bounds[i + 1], bounds[i]) for i in range(len(bounds) - 1))
    bottom_bounds = all(spec.leq(a, bot2) for a in chain)
    below_bounds = all(spec.leq(bot2, b) for b in bounds)
    return {
        "evidence": evidence,
        "no_join": isinstance(evidence, NoJoinEvidence),
        "bounds_are_upper_bounds": bounds_ok,
        "bounds_decreasing": decreasing,
        "bottom2_is_upper_bound": bottom_bounds,
        "bottom2_below_bounds": below_bounds,
        "chain": chain,
        "bounds": bounds,
    }
