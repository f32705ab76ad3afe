"""Module in charge of collecting copula family routines."""
from os.path import dirname, basename, isfile, join
import glob
import importlib

from tails.exceptions import UnknownFamily
from tails.settings import FAMILY_ALIASES


__package_pathname = join(dirname(__file__), "*.py")
__pyfiles = [f for f in glob.glob(__package_pathname) if isfile(f)]
__modules = [f for f in __pyfiles if not f.endswith("__init__.py")]
__all__ = sorted(basename(f)[:-3] for f in __modules)


for module in __all__:
    importlib.import_module(f".{module}", __package__)


def normalize(family):
    """Normalizes a user family name to its routine module name.
    :param family: Family name, e.g. 'Clayton', 'student-t' or 't'
    :return: Module name in this package
    """
    name = family.strip().lower().replace("-", "_")
    return FAMILY_ALIASES.get(name, name)


def routine(family):
    """Returns the routine module implementing a copula family.
    :param family: Family name (aliases accepted)
    :return: Module with check_params, cdf and optional routines
    """
    name = normalize(family)
    if name not in __all__:
        raise UnknownFamily(family, __all__)
    return globals()[name]
