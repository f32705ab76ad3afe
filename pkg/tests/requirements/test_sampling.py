"""Seeded samples of copulas, margins and series"""
import numpy as np
import tails
from pytest import approx, fixture, mark, raises
from scipy.stats import kendalltau
from tails.empirical import empirical_copula_cdf
from tails.exceptions import IncompatibleFamily, InvalidParameter
from tails.margins import MarginSpec
from tails.sampling import apply_margin, moving_max_series, open_uniform
from tails.sampling import sample_copula
from tails.settings import SAMPLE_CHUNK


# Module fixtures ---------------------------------------------------
@fixture(scope="class")
def sample(copula):
    return sample_copula(copula, 2000, 42)


# Requirements ------------------------------------------------------
class SampleRequirements:
    def test_size(self, sample):
        assert sample.n == 2000

    def test_unit_square(self, sample):
        for values in (sample.x, sample.y):
            assert np.all((values >= 0.0) & (values <= 1.0))

    def test_deterministic(self, copula, sample):
        again = sample_copula(copula, 2000, 42)
        assert np.array_equal(again.x, sample.x)
        assert np.array_equal(again.y, sample.y)

    def test_seed_changes_sample(self, copula, sample):
        other = sample_copula(copula, 2000, 43)
        assert not np.array_equal(other.x, sample.x)

    def test_uniform_margins(self, sample):
        for values in (sample.x, sample.y):
            assert np.mean(values) == approx(0.5, abs=0.05)

    @mark.slow
    def test_uniform_histogram(self, copula):
        large = sample_copula(copula, 100_000, 7)
        # 5000 expected per bin, binomial sd about 69
        bound = 5.0 * np.sqrt(100_000 * 0.05 * 0.95)
        for values in (large.x, large.y):
            counts, _ = np.histogram(values, bins=20, range=(0.0, 1.0))
            assert np.all(np.abs(counts - 5000) < bound)


# Parametrization ---------------------------------------------------
class TestFamilies(SampleRequirements):
    pass


@mark.parametrize("family", ["comonotone"], indirect=True)
class TestComonotone(SampleRequirements):
    def test_identical_columns(self, sample):
        assert np.array_equal(sample.x, sample.y)


@mark.parametrize("family", ["countermonotone"], indirect=True)
class TestCountermonotone(SampleRequirements):
    def test_mirrored_columns(self, sample):
        assert np.allclose(sample.x + sample.y, 1.0, rtol=0, atol=1e-15)


@mark.parametrize("family", ["clayton"], indirect=True)
class TestClayton(SampleRequirements):
    def test_concordance(self, copula):
        sample = sample_copula(copula, 20_000, 1)
        # Kendall tau of Clayton is theta / (theta + 2)
        assert kendalltau(sample.x, sample.y)[0] == approx(0.5, abs=0.02)


class TestLargeSamples:
    def test_independence(self):
        sample = sample_copula(tails.copula("independence"), 100_000, 8)
        assert empirical_copula_cdf(sample, "max", 0.5, 0.5) == approx(0.25, abs=0.005)

    def test_chunks(self):
        c = tails.copula("gumbel", theta=2.0)
        sample = sample_copula(c, SAMPLE_CHUNK + 10, 2)
        assert sample.n == SAMPLE_CHUNK + 10
        assert not np.array_equal(sample.x[:10], sample.x[SAMPLE_CHUNK:])

    def test_checkerboard(self, comonotone_board):
        sample = sample_copula(comonotone_board, 1000, 4)
        same_cell = (sample.x < 0.5) == (sample.y < 0.5)
        assert np.all(same_cell)


class TestMargins:
    def test_uniform(self):
        u = np.linspace(0.01, 0.99, 9)
        assert np.allclose(apply_margin(u, MarginSpec.parse("uniform")), u)

    def test_unit_pareto(self):
        assert apply_margin(0.99, MarginSpec.parse("unit-pareto")) == approx(100.0)

    def test_unit_frechet(self):
        value = apply_margin(np.exp(-1.0), MarginSpec.parse("unit-frechet"))
        assert value == approx(1.0)

    def test_bernoulli(self):
        coin = MarginSpec.parse("discrete:0,1:0.5,0.5")
        assert apply_margin([0.3, 0.6], coin).tolist() == [0.0, 1.0]

    def test_string(self):
        assert str(MarginSpec.parse("exponential:2")) == "exponential:2.0"

    @mark.parametrize("text", ["gamma", "exponential", "exponential:-1",
                               "discrete:0,1", "uniform:3", "exponential:x"])
    def test_invalid(self, text):
        with raises(InvalidParameter):
            MarginSpec.parse(text)


class TestMovingMax:
    def test_deterministic(self):
        first, second = moving_max_series(10, 7), moving_max_series(10, 7)
        assert first.n == 10
        assert np.array_equal(first.values, second.values)

    def test_overlapping_maxima(self):
        series = moving_max_series(1000, 7).values
        # Neighbours share one innovation, so equal values abound
        assert np.count_nonzero(series[1:] == series[:-1]) > 0
        assert np.all(series > 0.0)


class TestErrors:
    @mark.parametrize("n", [0, 1, 2.5])
    def test_invalid_size(self, n):
        with raises(InvalidParameter):
            sample_copula(tails.copula("independence"), n, 0)

    @mark.parametrize("seed", [-1, 2 ** 64, 1.5])
    def test_invalid_seed(self, seed):
        with raises(InvalidParameter):
            sample_copula(tails.copula("independence"), 10, seed)
        with raises(InvalidParameter):
            moving_max_series(10, seed)

    def test_open_uniform(self):
        rng = np.random.Generator(np.random.PCG64(0))
        u = open_uniform(rng, 10_000)
        assert np.all((u > 0.0) & (u < 1.0))

    def test_no_sampler(self, monkeypatch):
        c = tails.copula("clayton", theta=2.0)
        monkeypatch.delattr(c.routine, "conditional")
        with raises(IncompatibleFamily):
            sample_copula(c, 10, 0)
