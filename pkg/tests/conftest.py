"""Fixtures module for pytest"""
import numpy as np
import tails
from pytest import fixture
from tails.discrete import JointPMF, checkerboard_extend, subcopula_from_joint


FAMILIES = {
    "independence": {},
    "comonotone": {},
    "countermonotone": {},
    "clayton": {"theta": 2.0},
    "gumbel": {"theta": 2.0},
    "gaussian": {"rho": 0.5},
    "student_t": {"rho": 0.3, "nu": 4.0},
}


@fixture(scope="class", params=sorted(FAMILIES))
def family(request):
    return request.param


@fixture(scope="class")
def copula(family):
    return tails.copula(family, **FAMILIES[family])


@fixture(scope="class")
def coins_gen():
    def generate(mass):
        joint = JointPMF.from_mass(np.array(mass), [0, 1], [0, 1])
        return subcopula_from_joint(joint)
    return generate


@fixture(scope="class")
def comonotone_coins(coins_gen):
    return coins_gen([[0.5, 0.0], [0.0, 0.5]])


@fixture(scope="class")
def independent_coins(coins_gen):
    return coins_gen([[0.25, 0.25], [0.25, 0.25]])


@fixture(scope="class")
def comonotone_board(comonotone_coins):
    return checkerboard_extend(comonotone_coins)


@fixture(scope="class")
def independent_board(independent_coins):
    return checkerboard_extend(independent_coins)


@fixture(scope="class")
def csv_file(tmp_path_factory):
    """Writes rows to a fresh CSV file and returns its path."""
    folder = tmp_path_factory.mktemp("inputs")

    def write(name, rows, header=None):
        path = folder / name
        lines = [] if header is None else [f"# {header}"]
        lines += [",".join(repr(float(x)) for x in np.atleast_1d(row)) for row in rows]
        path.write_text("\n".join(lines) + "\n")
        return str(path)
    return write
