"""Acceptance criteria, one test each, at their stated sizes and tolerances.

Run with ``pytest tests/test_acceptance.py`` (a verdict line per criterion is
printed in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from acceptance_log import verdict
from infoorder import density as dc
from infoorder import sampling
from infoorder.classical import (
    ComparisonResult,
    OrderSpec,
    RioParams,
    compare,
    order_property_suite,
    random_rio_params,
)
from infoorder.density_orders import (
    composition_suite,
    leq_extension,
    leq_loewner,
    leq_minus_density,
    leq_plus_density,
    unitary_invariance_suite,
)
from infoorder.domain import Counterexample, dcpo_max_counterexample, way_below_probe
from infoorder.entailment import SimWeights, max_grade, sim_classical, sim_density
from infoorder.measurements import monotonicity_report
from infoorder.simplex import bottom, mix, retract


def test_criterion_01_contradiction_pair():
    x, y = (0.6, 0.2, 0.2), (0.5, 1 / 3, 1 / 6)
    plus, minus = OrderSpec("lplus", tol=1e-12), OrderSpec("lminus", tol=1e-12)
    compare(plus, x, y)
    start = time.perf_counter()
    p, m = compare(plus, x, y), compare(minus, x, y)
    elapsed = time.perf_counter() - start
    ok = (
        ComparisonResult.EQUAL not in (p, m)
        and ComparisonResult.INCOMPARABLE not in (p, m)
        and p is m.reversed()
        and elapsed < 1e-3
    )
    verdict(1, ok, f"lplus {p.value}, lminus {m.value}, {elapsed * 1e3:.3f} ms")


def test_criterion_02_bayesian_is_zero_parameter_rio():
    start = time.perf_counter()
    disagreements, total = 0, 0
    for n in (3, 4):
        rng = np.random.default_rng(200 + n)
        X, Y = sampling.candidate_pairs(rng, n, 10_000)
        X, Y = retract(X[:10_000]), retract(Y[:10_000])
        a = OrderSpec("bayesian").leq_batch(X, Y)
        b = OrderSpec.rio(RioParams(n)).leq_batch(X, Y)
        disagreements += int(np.sum(a != b))
        total += len(X)
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 5
    verdict(2, ok, f"{disagreements} disagreements over {total} pairs in {elapsed:.2f} s")


def test_criterion_03_max_is_maximal():
    n, violations, comparable = 4, 0, 0
    rng = np.random.default_rng(3)
    mx = OrderSpec("max")
    for _ in range(20):
        spec = OrderSpec.rio(random_rio_params(rng, n))
        X, Y = sampling.candidate_pairs(rng, n, 10_000)
        CX, CY = sampling.comparable_pairs(spec.leq_batch, rng, n, 2_000)
        X, Y = np.vstack([X[:10_000], CX]), np.vstack([Y[:10_000], CY])
        for A, B in ((X, Y), (Y, X)):
            below = spec.leq_batch(A, B)
            comparable += int(below.sum())
            violations += int(np.sum(below & ~mx.leq_batch(A, B)))
    verdict(3, violations == 0, f"{violations} violations over {comparable} comparable pairs, 20 parameter sets")


def test_criterion_04_mu_minus_strict():
    rng = np.random.default_rng(4)
    specs = [OrderSpec.rio(random_rio_params(rng, 4)) for _ in range(5)] + [OrderSpec("max"), OrderSpec("lminus")]
    failures, pairs = 0, 0
    for i, spec in enumerate(specs):
        report = monotonicity_report("mu_minus", spec, 4, 10_000, 40 + i, expected="pass")
        failures += report["monotone"].failures + report["strict"].failures
        pairs += report.meta["comparable_pairs"]
    verdict(4, failures == 0, f"{failures} violations over {pairs} comparable pairs, 7 orders")


def test_criterion_05_entropy_claims():
    lines, ok = [], True
    for n in (3, 4, 5):
        for kind, spec in (
            ("entropy", OrderSpec("bayesian")),
            ("entropy", OrderSpec.preset("entropy", n)),
            ("mu_plus", OrderSpec.preset("entropy", n)),
        ):
            r = monotonicity_report(kind, spec, n, 10_000, n)
            good = r.as_expected and r.total_failures == 0
            ok &= good
            if not good:
                lines.append(f"{kind}/{spec.name}/n={n}")
        r = monotonicity_report("entropy", OrderSpec("max"), n, 10_000, n)
        refuted = r.as_expected and r["strict_monotone"].first_counterexample is not None
        ok &= refuted
        if not refuted:
            lines.append(f"entropy/max/n={n} not refuted")
    verdict(5, ok, "entropy claims hold, max refuted at n=3..5" if ok else "; ".join(lines))


def test_criterion_06_degeneracy():
    rng = np.random.default_rng(6)
    variants = ("degeneracy_full", "degeneracy_first", "degeneracy_last")
    passing = [OrderSpec("bayesian")] + [OrderSpec.rio(random_rio_params(rng, 4)) for _ in range(5)]
    ok, notes = True, []
    for spec in passing:
        r = order_property_suite(spec, 4, 3_000, 60)
        bad = sum(r[v].failures for v in variants)
        ok &= bad == 0
        if bad:
            notes.append(f"{spec.name} {bad}")
    for name, variant in (("lminus", "degeneracy_first"), ("major", "degeneracy_full")):
        res = order_property_suite(OrderSpec(name), 4, 3_000, 61)[variant]
        refuted = res.expected == "fail" and res.first_counterexample is not None
        ok &= refuted
        if not refuted:
            notes.append(f"{name} not refuted")
    verdict(6, ok, "Bayesian and 5 sampled RIO pass; lminus and major refuted" if ok else "; ".join(notes))


def test_criterion_07_dcpo_max():
    r = dcpo_max_counterexample(3)
    ok = r["no_join"] and r["bounds_are_upper_bounds"] and r["bounds_decreasing"] and not r["bottom2_is_upper_bound"]
    verdict(7, ok, f"no join at index {r['evidence'].index}; bounds verified; bottom(2) not a bound")


def test_criterion_08_density_coherence():
    disagreements, total = 0, 0
    plus, minus = OrderSpec("lplus"), OrderSpec("lminus")
    for n in (2, 3, 4):
        rng = np.random.default_rng(80 + n)
        X, Y = sampling.candidate_pairs(rng, n, 1_000)
        for x, y in zip(X[:1_000], Y[:1_000]):
            rho, pi = dc.embed_diagonal(x), dc.embed_diagonal(y)
            disagreements += leq_plus_density(rho, pi) != plus.leq(x, y)
            disagreements += leq_minus_density(rho, pi) != minus.leq(x, y)
            total += 1
    verdict(8, disagreements == 0, f"{disagreements} disagreements over {total} diagonal pairs")


def test_criterion_09_composition():
    failures, notes = 0, []
    for order in ("loewner", "dplus", "dminus"):
        for m in (2, 3):
            r = composition_suite(order, 2, m, 1_000, 90 + m)
            failures += r.total_failures
            if r.total_failures:
                notes.append(f"{order} (2,{m})")
            for name in ("right_tensor_embedding", "left_tensor_embedding"):
                if r[name].trials != 1_000:
                    failures += 1
    verdict(9, failures == 0, "all tensor and embedding checks hold" if not failures else ", ".join(notes))


def test_criterion_10_unitary_invariance():
    failures, trials = 0, 0
    for order in ("loewner", "dplus", "dminus"):
        r = unitary_invariance_suite(order, 3, 1_000, 10)
        failures += r.total_failures
        trials += r["conjugation_invariance"].trials
    verdict(10, failures == 0, f"{failures} changed verdicts over {trials} conjugations")


def test_criterion_11_extension_fixtures():
    def d(*v):
        return dc.make_positive(np.diag(v))

    ok = (
        leq_extension("intuitive", d(2, 3), d(2, 1))
        and not leq_extension("intuitive", d(2, 3), d(2, 2))
        and leq_loewner(d(3, 1), d(2, 1), dual=True)
        and not leq_extension("natural", d(3, 1), d(2, 1))
        and leq_extension("natural", d(0.5, 0.5), d(1, 0))
        and not leq_loewner(d(0.5, 0.5), d(1, 0), dual=True)
    )
    verdict(11, ok, "intuitive mixing failure, natural vs dual-Loewner, bottom(2) vs diag(1,0)")


def test_criterion_12_domain_probes():
    start = time.perf_counter()
    y = np.array([0.5, 0.3, 0.2])
    ok, notes = True, []
    rng = np.random.default_rng(12)
    for order in ("bayesian", OrderSpec.rio(random_rio_params(rng, 3))):
        for t in (0.25, 0.5, 0.9):
            r = way_below_probe(order, mix(bottom(3), y, t).values, y, 1_000, 12, restrict_to_monotone=True)
            good = not r.found and r.chains_tried == 1_000
            ok &= good
            if not good:
                notes.append(f"sector t={t}")
    pi = dc.random_density(rng, 2)
    x = dc.DensityOperator._trusted(0.5 * dc.bottom_density(2).matrix + 0.5 * pi.matrix)
    r = way_below_probe("dplus", x, pi, 1_000, 12)
    ok &= not r.found and r.chains_tried == 1_000
    # witnesses live in the figure's sector x1 >= x3 >= x2 and rise to the top;
    # the figure chain (1 - s, 0, s) is the member with x2 = 0
    x = mix(bottom(3), y, 0.5).values
    r = way_below_probe("bayesian", x, y, 1_000, 12)
    spec = OrderSpec("bayesian")
    figure = [np.array([1 - 1 / k, 0.0, 1 / k]) for k in range(2, 10_000)]
    found = (
        isinstance(r, Counterexample)
        and np.array_equal(r.join.values, [1.0, 0.0, 0.0])
        and r.family == "sector_crossing"
        and all(a[0] >= a[2] >= a[1] for a in r.chain)
        and not any(spec.leq(x, a) for a in figure)
        and all(spec.leq(a, b) for a, b in zip(figure, figure[1:]))
    )
    ok &= found
    if not found:
        notes.append("figure chain")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    verdict(12, ok, f"sector and density probes clean, figure chain found, {elapsed:.1f} s" + "".join(f"; {m} failed" for m in notes))


def test_criterion_13_graded_multiplicativity():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(1_000):
        vecs = sampling.sparsify(rng, sampling.uniform_simplex(rng, 3, 4), prob=0.15)
        r1, p1, r2, p2 = (dc.embed_diagonal(v) for v in vecs)
        product = max_grade(r1, p1) * max_grade(r2, p2)
        joint = max_grade(dc.tensor(r1, r2), dc.tensor(p1, p2))
        worst = max(worst, abs(joint - product))
    verdict(13, worst <= 1e-6, f"largest deviation {worst:.2e} over 1000 diagonal pairs")


def test_criterion_14_sim_contract():
    tol = 1e-12
    rng = np.random.default_rng(14)
    n = 4
    params = random_rio_params(rng, n)
    spec = OrderSpec.rio(params)
    w = SimWeights.geometric(n - 1)
    X, Y = sampling.comparable_pairs(spec.leq_batch, rng, n, 1_000)
    strict, bad_strict = 0, 0
    for x, y in zip(retract(X), retract(Y)):
        F = (x[:-1] - x[1:]) * (params.G @ y) - (y[:-1] - y[1:]) * (params.G @ x)
        if np.all(F <= -tol):
            strict += 1
            bad_strict += sim_classical(params, w, x, y, tol) != 1.0
    A, B = sampling.uniform_monotone(rng, n, 1_000), sampling.uniform_monotone(rng, n, 1_000)
    bad_anti = sum(sim_classical(params, w, a, b, tol) != -sim_classical(params, w, b, a, tol) for a, b in zip(A, B))
    bad_self = 0
    for _ in range(1_000):
        rho = dc.random_density(rng, 3, rank=int(rng.integers(1, 4)))
        bad_self += sim_density(SimWeights.uniform(3), rho, rho) != 0.0
    ok = strict > 100 and bad_strict == 0 and bad_anti == 0 and bad_self == 0
    verdict(
        14, ok,
        f"strict pairs {strict} (bad {bad_strict}), antisymmetry bad {bad_anti}, self-similarity bad {bad_self}",
    )


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
