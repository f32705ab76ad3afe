"""Copula handles, C-volumes and grid validation"""
import numpy as np
import tails
from pytest import approx, fixture, mark, raises
from tails.copula import Rect, validate_grid
from tails.estimators import upper_volume
from tails.exceptions import InvalidParameter, InvalidRect, OutOfUnitInterval
from tails.exceptions import UnknownFamily


NODES = np.linspace(0.0, 1.0, 21)


# Module fixtures ---------------------------------------------------
@fixture(scope="class")
def grid_values(copula):
    return copula.cdf(NODES[:, None], NODES[None, :])


@fixture(scope="class")
def report(copula):
    return validate_grid(copula, 50)


class CorruptedCopula:
    """Product copula with a shifted cdf, C(u, v) = u v^2 + 0.1."""

    tolerance = 1e-12

    def cdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return u * v ** 2 + 0.1

    def __str__(self):
        return "corrupted"


# Requirements ------------------------------------------------------
class CopulaRequirements:
    def test_lower_boundary(self, copula):
        assert np.all(copula.cdf(NODES, 0.0) == 0.0)
        assert np.all(copula.cdf(0.0, NODES) == 0.0)

    def test_upper_boundary(self, copula):
        assert np.all(copula.cdf(NODES, 1.0) == NODES)
        assert np.all(copula.cdf(1.0, NODES) == NODES)

    def test_frechet_bounds(self, copula, grid_values):
        u, v = NODES[:, None], NODES[None, :]
        assert np.all(grid_values >= np.maximum(u + v - 1.0, 0.0) - 1e-15)
        assert np.all(grid_values <= np.minimum(u, v))

    def test_two_increasing(self, copula, grid_values):
        cells = np.diff(np.diff(grid_values, axis=0), axis=1)
        assert cells.min() >= -copula.tolerance

    def test_survival_identity(self, copula, grid_values):
        u, v = NODES[:, None], NODES[None, :]
        expected = 1.0 - u - v + grid_values
        survival = copula.survival(u, v)
        assert np.max(np.abs(survival - expected)) < 10 * copula.tolerance

    def test_volume_of_lower_box(self, copula):
        assert tails.volume(copula, Rect(0, 0.3, 0, 0.6)) == approx(
            tails.cdf(copula, 0.3, 0.6), abs=1e-12
        )

    def test_volume_of_square(self, copula):
        assert tails.volume(copula, Rect(0, 1, 0, 1)) == approx(1.0, abs=1e-12)

    @mark.slow
    def test_random_volumes(self, copula):
        rng = np.random.Generator(np.random.PCG64(31))
        u1, u2 = np.sort(rng.random((2, 10_000)), axis=0)
        v1, v2 = np.sort(rng.random((2, 10_000)), axis=0)
        assert copula.box_volume(u1, u2, v1, v2).min() >= -1e-9

    def test_volume_additivity(self, copula):
        rng = np.random.Generator(np.random.PCG64(32))
        u1, cut, u2 = np.sort(rng.random((3, 50)), axis=0)
        v1, middle, v2 = np.sort(rng.random((3, 50)), axis=0)
        volume = copula.box_volume
        whole = volume(u1, u2, v1, v2)
        by_u = volume(u1, cut, v1, v2) + volume(cut, u2, v1, v2)
        by_v = volume(u1, u2, v1, middle) + volume(u1, u2, middle, v2)
        tolerance = 10 * copula.tolerance + 1e-12
        assert np.max(np.abs(whole - by_u)) < tolerance
        assert np.max(np.abs(whole - by_v)) < tolerance

    def test_deep_survival_branch(self, copula):
        t = np.linspace(0.991, 0.999, 9)
        direct = copula.box_volume(t, 1.0, t, 1.0)
        assert np.allclose(upper_volume(copula, t), direct, rtol=0, atol=1e-12)

    def test_validation(self, copula, report):
        assert report.ok
        assert report.max_violation <= copula.tolerance

    def test_report_checks(self, report):
        checks = {x.check for x in report.violations}
        assert checks == {"C(u,0)=0", "C(0,v)=0", "C(u,1)=u", "C(1,v)=v",
                          "2-increasing", "frechet", "symmetry"}


# Parametrization ---------------------------------------------------
class TestFamilies(CopulaRequirements):
    def test_scalar_cdf(self, copula):
        assert np.ndim(copula.cdf(0.4, 0.6)) == 0

    def test_string(self, copula, family):
        assert str(copula).startswith(family)


@mark.parametrize("family", ["independence"], indirect=True)
class TestIndependence(CopulaRequirements):
    def test_cdf(self, copula):
        assert tails.cdf(copula, 0.3, 0.7) == approx(0.21, abs=1e-15)

    def test_volume(self, copula):
        assert tails.volume(copula, Rect(0.2, 0.5, 0.1, 0.4)) == approx(0.09)

    def test_survival(self, copula):
        assert tails.survival(copula, 0.9, 0.9) == approx(0.01, abs=1e-15)

    def test_exact_validation(self, report):
        assert report.max_violation == 0.0


@mark.parametrize("family", ["comonotone"], indirect=True)
class TestComonotone(CopulaRequirements):
    def test_cdf(self, copula):
        assert tails.cdf(copula, 0.3, 0.7) == 0.3

    def test_volume(self, copula):
        assert tails.volume(copula, Rect.upper(0.9)) == approx(0.1, abs=1e-15)

    def test_survival(self, copula):
        assert tails.survival(copula, 0.9, 0.8) == approx(0.1, abs=1e-15)


class TestClayton:
    @fixture(scope="class")
    def clayton(self):
        return tails.copula("clayton", theta=1.0)

    def test_cdf(self, clayton):
        assert tails.cdf(clayton, 0.5, 0.5) == approx(1 / 3, abs=1e-15)

    def test_survival(self, clayton):
        assert tails.survival(clayton, 0.5, 0.5) == approx(1 / 3, abs=1e-15)

    def test_exact_validation(self):
        report = validate_grid(tails.copula("clayton", theta=2.0), 100)
        assert report.max_violation <= 1e-12

    def test_deep_survival(self, clayton):
        u = 1.0 - 1e-9
        # Density 1 + theta at the corner
        assert clayton.survival(u, u) == approx(2.0 * (1.0 - u) ** 2, rel=1e-3)


class TestCorruptedHandle:
    @fixture(scope="class")
    def report(self):
        return validate_grid(CorruptedCopula(), 100)

    def test_not_ok(self, report):
        assert not report.ok

    def test_upper_boundary_violation(self, report):
        violation = report["C(u,1)=u"]
        assert violation.magnitude == approx(0.1, abs=1e-12)
        assert violation.location[1] == 1.0

    def test_to_dict(self, report):
        content = report.to_dict()
        assert content["ok"] is False
        assert len(content["violations"]) == 7


class TestErrors:
    def test_unknown_family(self):
        with raises(UnknownFamily):
            tails.copula("frank", theta=2.0)

    @mark.parametrize("name", ["Clayton", "CLAYTON", " clayton "])
    def test_family_case(self, name):
        assert tails.copula(name, theta=2.0).family == "clayton"

    @mark.parametrize("name", ["t", "student-t", "studentt"])
    def test_family_alias(self, name):
        assert tails.copula(name, rho=0.2, nu=3.0).family == "student_t"

    @mark.parametrize("family, params", [
        ("clayton", {"theta": 0.0}),
        ("clayton", {"theta": -1.0}),
        ("clayton", {}),
        ("gumbel", {"theta": 0.5}),
        ("gaussian", {"rho": 1.0}),
        ("student_t", {"rho": 0.5, "nu": 0.0}),
        ("independence", {"theta": 2.0}),
    ])
    def test_invalid_parameter(self, family, params):
        with raises(InvalidParameter):
            tails.copula(family, **params)

    @mark.parametrize("u, v", [(-0.1, 0.5), (0.5, 1.1), (np.nan, 0.5)])
    def test_out_of_unit_interval(self, u, v):
        with raises(OutOfUnitInterval):
            tails.copula("independence").cdf(u, v)

    def test_invalid_rect(self):
        with raises(InvalidRect):
            Rect(0.6, 0.4, 0.0, 1.0)

    @mark.parametrize("n", [1, 10_001])
    def test_validation_size(self, n):
        with raises(InvalidParameter):
            validate_grid(tails.copula("independence"), n)

    def test_no_special_cases(self):
        # Gumbel with theta = 1 is the product copula, but not renamed
        assert tails.copula("gumbel", theta=1.0).family == "gumbel"
