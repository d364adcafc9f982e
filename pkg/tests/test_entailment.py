import math
import warnings

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from infoorder import density as dc
from infoorder import sampling
from infoorder.classical import OrderSpec, RioParams, random_rio_params
from infoorder.density_orders import comparable_pair, leq_plus_density
from infoorder.entailment import (
    SimWeights,
    WordVectorStore,
    cosine_similarity,
    find_intransitive_triple,
    graded_leq_classical,
    graded_leq_lifted,
    graded_loewner,
    kl_and_representativeness,
    load_vectors,
    max_classical_grade,
    max_grade,
    parse_vectors,
    read_pairs,
    score_pair,
    score_pairs,
    sim_classical,
    sim_classical_lifted,
    sim_density,
    smooth_leq,
    to_density,
    to_distribution,
)
from infoorder.errors import (
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

seeds = st.integers(0, 2**31 - 1)

VECTORS = """3 3
dog 1 2 1
animal 2 2 2
cat 0 3 1
none 0 0 0
top 4 0 0
"""


@pytest.fixture
def store():
    return parse_vectors(VECTORS)


class TestLoader:
    def test_header_skipped(self, store):
        assert len(store) == 5 and store.dim == 3
        np.testing.assert_array_equal(store["dog"], [1, 2, 1])
        assert "dog" in store and "wolf" not in store
        assert store.tokens[0] == "dog"

    def test_without_header(self):
        assert parse_vectors("a 1 0\nb 0 1\n").dim == 2

    def test_unknown_token(self, store):
        with pytest.raises(UnknownToken):
            store["wolf"]

    @pytest.mark.parametrize("text, line", [("a 1 2\nb 1\n", 2), ("a 1 x\n", 1), ("a 1 nan\n", 1)])
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_vectors(text)
        assert info.value.line == line

    def test_negative_value(self):
        with pytest.raises(NegativeValue):
            parse_vectors("a 1 -0.5\n")

    def test_tiny_negative_clamped(self):
        assert parse_vectors("a 1 -1e-12\n")["a"][1] == 0.0

    def test_duplicate_last_wins(self):
        with pytest.warns(UserWarning):
            s = parse_vectors("a 1 0\na 0 1\n")
        np.testing.assert_array_equal(s["a"], [0, 1])

    def test_empty(self):
        with pytest.raises(EmptyFile):
            parse_vectors("\n\n")

    def test_load_and_pairs(self, tmp_path):
        (tmp_path / "v.txt").write_text(VECTORS)
        (tmp_path / "p.tsv").write_text("dog\tanimal\ncat animal\n\n")
        assert load_vectors(tmp_path / "v.txt").dim == 3
        assert read_pairs(tmp_path / "p.tsv") == [("dog", "animal"), ("cat", "animal")]
        (tmp_path / "bad.tsv").write_text("dog\n")
        with pytest.raises(ParseError):
            read_pairs(tmp_path / "bad.tsv")

    def test_store_validates_lengths(self):
        with pytest.raises(DimensionMismatch):
            WordVectorStore({"a": [1, 2], "b": [1, 2, 3]})


class TestConversions:
    def test_distribution(self, store):
        np.testing.assert_allclose(to_distribution(store, "dog").values, [0.25, 0.5, 0.25])
        np.testing.assert_array_equal(to_distribution(store, "top").values, [1, 0, 0])
        with pytest.raises(ZeroMass):
            to_distribution(store, "none")

    def test_density_diagonal(self, store):
        rho = to_density(store, "dog")
        np.testing.assert_allclose(rho.matrix, np.diag([0.25, 0.5, 0.25]))
        for t in ("dog", "animal", "cat", "top"):
            np.testing.assert_allclose(np.diag(to_density(store, t).matrix).real, to_distribution(store, t).values)

    def test_context_rank(self, store):
        np.testing.assert_allclose(np.diag(to_density(store, "dog", 1).matrix).real, [0, 1, 0])
        with pytest.raises(ParameterOutOfRange):
            to_density(store, "dog", -1)
        with pytest.raises(ZeroMass):
            to_density(store, "none")

    def test_builder(self, store):
        rho = to_density(store, "dog", builder=lambda v: np.outer(v, v))
        assert isinstance(rho, dc.DensityOperator) and rho.eig.rank == 1

    def test_cosine(self, store):
        assert cosine_similarity(store, "dog", "dog") == pytest.approx(1.0)
        assert cosine_similarity(store, "dog", "animal") == pytest.approx(8 / math.sqrt(6 * 12))
        with pytest.raises(ZeroVector):
            cosine_similarity(store, "dog", "none")


class TestSmoothing:
    @pytest.mark.parametrize("order", ["bayesian", "max", "lplus", "major"])
    def test_alpha_zero_is_base(self, order):
        spec = OrderSpec(order)
        X, Y = sampling.candidate_pairs(np.random.default_rng(0), 3, 300)
        for x, y in zip(X, Y):
            assert smooth_leq(spec, 0.0, x, y) == spec.leq(x, y)

    @pytest.mark.parametrize("order", ["bayesian", "max", "lminus", "major"])
    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
    def test_mixing_property(self, order, alpha):
        spec = OrderSpec(order)
        X, Y = sampling.comparable_pairs(spec.leq_batch, np.random.default_rng(1), 3, 200)
        for x, y in zip(X, Y):
            assert smooth_leq(spec, alpha, x, y)

    @pytest.mark.parametrize("order", ["max", "major"])
    def test_intransitive_triple(self, order):
        spec = OrderSpec(order)
        triple = find_intransitive_triple(spec, 0.5, 3, 0)
        assert triple is not None
        x, y, z = triple
        assert smooth_leq(spec, 0.5, x, y) and smooth_leq(spec, 0.5, y, z)
        assert not smooth_leq(spec, 0.5, x, z)

    def test_known_max_triple(self):
        spec = OrderSpec("max")
        x, y, z = (0.4414, 0.4953, 0.0633), (0.5, 0.5, 0.0), (0.8156, 0.1844, 0.0)
        assert smooth_leq(spec, 0.5, x, y) and smooth_leq(spec, 0.5, y, z)
        assert not smooth_leq(spec, 0.5, x, z)

    def test_errors(self):
        with pytest.raises(ParameterOutOfRange):
            smooth_leq(OrderSpec("bayesian"), 1.0, (1, 0), (0, 1))
        with pytest.raises(DimensionMismatch):
            smooth_leq(OrderSpec("bayesian"), 0.5, (1, 0), (1, 0, 0))

    def test_callable_base(self):
        assert smooth_leq(lambda a, b: a[0] <= b[0], 0.5, (0.2, 0.8), (0.6, 0.4))


def _grade_by_bisection(params, x, y, steps=60):
    if not graded_leq_classical(params, 1e-300, x, y, tol=0):
        return 0.0
    lo, hi = 1e-300, 1.0
    if graded_leq_classical(params, 1.0, x, y, tol=0):
        return 1.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if graded_leq_classical(params, mid, x, y, tol=0) else (lo, mid)
    return lo


class TestClassicalGrading:
    @pytest.mark.parametrize("n", [3, 4])
    def test_k_one_is_plain_order(self, n):
        rng = np.random.default_rng(n)
        params = random_rio_params(rng, n)
        spec = OrderSpec.rio(params)
        X, Y = sampling.uniform_monotone(rng, n, 500), sampling.uniform_monotone(rng, n, 500)
        for x, y in zip(X, Y):
            assert graded_leq_classical(params, 1.0, x, y) == spec.leq(x, y)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 5), seeds, st.floats(0.01, 1.0))
    def test_monotone_in_k(self, n, seed, k):
        rng = np.random.default_rng(seed)
        params = random_rio_params(rng, n)
        x, y = sampling.uniform_monotone(rng, n, 2)
        if graded_leq_classical(params, k, x, y):
            assert graded_leq_classical(params, k / 2, x, y)

    @pytest.mark.parametrize("n", [3, 4])
    def test_max_grade_matches_bisection(self, n):
        rng = np.random.default_rng(10 + n)
        params = RioParams(n)
        spec = OrderSpec.rio(params)
        positive = 0
        for x, y in zip(sampling.uniform_monotone(rng, n, 200), sampling.uniform_monotone(rng, n, 200)):
            k = max_classical_grade(params, x, y)
            assert k == pytest.approx(_grade_by_bisection(params, x, y), abs=1e-12)
            if not spec.leq(x, y) and k > 0:
                positive += 1
        # interior Bayesian pairs that are incomparable become comparable at a small grade
        assert positive > 50

    def test_infeasible_and_range(self):
        with pytest.raises(InfeasibleParams):
            graded_leq_classical(None, 0.5, (0.5, 0.5), (1, 0))
        with pytest.raises(ParameterOutOfRange):
            graded_leq_classical(RioParams(2), 0.0, (0.5, 0.5), (1, 0))

    def test_lifted_needs_shared_sector(self):
        params = RioParams(3)
        assert not graded_leq_lifted(params, 0.01, (0.5, 0.3, 0.2), (0.2, 0.3, 0.5))
        assert graded_leq_lifted(params, 1.0, (0.3, 0.5, 0.2), (0.2, 0.8, 0.0))


def _rand_full(rng, n):
    return dc.random_density(rng, n)


class TestGradedLoewner:
    def test_k_zero(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert graded_loewner(_rand_full(rng, 3), dc.random_density(rng, 3, rank=1), 0.0)
        with pytest.raises(ParameterOutOfRange):
            graded_loewner(dc.bottom_density(2), dc.bottom_density(2), -1)

    def test_self(self):
        rho = dc.random_density(np.random.default_rng(1), 4, rank=2)
        assert max_grade(rho, rho) == pytest.approx(1.0, abs=1e-9)

    def test_diagonal_is_ratio_minimum(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            x, y = rng.dirichlet(np.ones(3), size=2)
            assert max_grade(dc.embed_diagonal(x), dc.embed_diagonal(y)) == pytest.approx(np.min(y / x), rel=1e-9)

    def test_support_violation(self):
        assert max_grade(dc.bottom_density(2), dc.pure_state([1, 0])) == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_bisection_agrees(self, seed):
        rng = np.random.default_rng(seed)
        rho, pi = _rand_full(rng, 3), dc.random_density(rng, 3, rank=int(rng.integers(1, 4)))
        assert max_grade(rho, pi) == pytest.approx(max_grade(rho, pi, method="bisect"), abs=1e-8)

    @pytest.mark.parametrize("seed", range(10))
    def test_tensor_multiplicative(self, seed):
        rng = np.random.default_rng(seed)
        r1, p1, r2, p2 = (_rand_full(rng, 2) for _ in range(4))
        k, l = max_grade(r1, p1), max_grade(r2, p2)
        assert graded_loewner(r1, p1, k * (1 - 1e-9)) and graded_loewner(r2, p2, l * (1 - 1e-9))
        kt = max_grade(dc.tensor(r1, r2), dc.tensor(p1, p2))
        assert kt == pytest.approx(k * l, rel=1e-8)
        assert graded_loewner(dc.tensor(r1, r2), dc.tensor(p1, p2), k * l * (1 - 1e-9))


class TestSimWeights:
    def test_valid(self):
        assert SimWeights.uniform(4).array.sum() == pytest.approx(1)
        w = SimWeights.geometric(3)
        np.testing.assert_allclose(w.array, [4 / 7, 2 / 7, 1 / 7])

    @pytest.mark.parametrize("weights", [(0.2, 0.8), (0.5, 0.6), (1.2, -0.2)])
    def test_invalid(self, weights):
        with pytest.raises(ParameterOutOfRange):
            SimWeights(weights)


class TestSimClassical:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_strictly_below_scores_one(self, n):
        rng = np.random.default_rng(n)
        params = random_rio_params(rng, n)
        spec = OrderSpec.rio(params)
        w = SimWeights.geometric(n - 1)
        X, Y = sampling.comparable_pairs(spec.leq_batch, rng, n, 300)
        for x, y in zip(X, Y):
            if spec.leq(y, x):
                continue
            fx, fy = x[:-1] - x[1:], y[:-1] - y[1:]
            F = fx * (params.G @ y) - fy * (params.G @ x)
            if np.all(F <= -1e-12):
                assert sim_classical(params, w, x, y) == 1.0

    @settings(max_examples=80, deadline=None)
    @given(st.integers(3, 5), seeds)
    def test_antisymmetric(self, n, seed):
        rng = np.random.default_rng(seed)
        params = random_rio_params(rng, n)
        w = SimWeights.uniform(n - 1)
        x, y = sampling.uniform_monotone(rng, n, 2)
        assert sim_classical(params, w, x, y) == -sim_classical(params, w, y, x)
        assert sim_classical(params, w, x, x) == 0.0

    def test_lifted_permutation_invariant(self):
        rng = np.random.default_rng(4)
        params, w = RioParams(4), SimWeights.uniform(3)
        for _ in range(100):
            x, y = rng.dirichlet(np.ones(4), size=2)
            p = rng.permutation(4)
            assert sim_classical_lifted(params, w, x, y) == sim_classical_lifted(params, w, x[p], y[p])

    def test_weight_mismatch(self):
        with pytest.raises(WeightMismatch):
            sim_classical(RioParams(3), SimWeights.uniform(3), (0.5, 0.3, 0.2), (0.6, 0.3, 0.1))


def _sim_density_oracle(weights, rho, pi, tol=1e-12):
    a, b = rho.matrix, pi.matrix
    la, Va = np.linalg.eigh(a)
    lb, Vb = np.linalg.eigh(b)
    Va, Vb = Va[:, ::-1], Vb[:, ::-1]
    D = lb.max() * a - la.max() * b
    total = 0.0
    for i, wi in enumerate(weights):
        for v in (Va[:, i], Vb[:, i]):
            q = float(np.real(v.conj() @ D @ v))
            total += wi * (1 if q >= tol else -1 if q <= -tol else 0)
    return total


class TestSimDensity:
    def test_self_zero(self):
        rho = dc.random_density(np.random.default_rng(0), 3)
        assert sim_density(SimWeights.uniform(3), rho, rho) == 0.0

    @pytest.mark.parametrize("n", [2, 3])
    def test_plus_pairs(self, n):
        """The shared top eigenvector gives a zero form, so the score is ``2 - 2 A_1`` generically."""
        rng = np.random.default_rng(n)
        w = SimWeights.geometric(n)
        generic = 0
        for _ in range(200):
            rho, pi = comparable_pair("dplus", rng, n)
            assert leq_plus_density(rho, pi)
            s = sim_density(w, rho, pi)
            assert s <= 2 - 2 * w.weights[0] + 1e-12
            if s == pytest.approx(2 - 2 * w.weights[0]):
                generic += 1
        assert generic > 100

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 4), seeds)
    def test_antisymmetric_and_oracle(self, n, seed):
        rng = np.random.default_rng(seed)
        rho, pi = dc.random_density(rng, n), dc.random_density(rng, n)
        w = SimWeights.uniform(n)
        s = sim_density(w, rho, pi)
        assert s == -sim_density(w, pi, rho)
        assert s == pytest.approx(_sim_density_oracle(w.weights, rho, pi), abs=1e-12)

    def test_weight_mismatch(self):
        with pytest.raises(WeightMismatch):
            sim_density(SimWeights.uniform(2), dc.bottom_density(3), dc.bottom_density(3))


class TestKL:
    def test_self(self):
        rho = dc.random_density(np.random.default_rng(0), 3, rank=2)
        kl, r = kl_and_representativeness(rho, rho)
        assert kl == pytest.approx(0, abs=1e-12) and r == pytest.approx(1, abs=1e-12)

    def test_diagonal(self):
        x, y = np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.2, 0.6])
        kl, r = kl_and_representativeness(dc.embed_diagonal(x), dc.embed_diagonal(y))
        expected = float(np.sum(x * np.log(x / y)))
        assert kl == pytest.approx(expected, abs=1e-12)
        assert r == pytest.approx(1 / (1 + expected))

    def test_support_violation(self):
        assert kl_and_representativeness(dc.bottom_density(2), dc.pure_state([1, 0])) == (math.inf, 0.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_matrix_logarithm_oracle(self, seed):
        rng = np.random.default_rng(seed)
        rho, pi = dc.random_density(rng, 3), dc.random_density(rng, 3)
        a, b = rho.matrix, pi.matrix
        expected = np.trace(a @ (scipy.linalg.logm(a) - scipy.linalg.logm(b))).real
        assert kl_and_representativeness(rho, pi)[0] == pytest.approx(expected, abs=1e-9)


class TestScoring:
    def test_measures(self, store):
        assert score_pair(store, "dog", "dog", "repr") == pytest.approx(1.0)
        assert score_pair(store, "dog", "top", "kl") == math.inf
        assert score_pair(store, "dog", "animal", "cosine") == pytest.approx(8 / math.sqrt(72))
        assert score_pair(store, "animal", "top", "graded", k=1.0) == 1.0
        # dog peaks at the second coordinate, so it shares no sector with top
        assert score_pair(store, "dog", "top", "graded") == 0.0
        assert score_pair(store, "dog", "dog", "sim") == 0.0
        assert score_pair(store, "animal", "dog", "smooth") == 1.0
        with pytest.raises(ParameterOutOfRange):
            score_pair(store, "dog", "dog", "bogus")

    def test_unknown_tokens(self, store):
        out, missing = score_pairs(store, [("dog", "wolf"), ("dog", "cat")], "cosine")
        assert missing == 1
        assert out[0] == ("dog", "wolf", None) and out[1][2] is not None

    def test_no_stray_warnings(self, store):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            score_pairs(store, [("dog", "wolf")], "kl")
