"""Exceptions raised by the tails package.

Errors caused by the data are :class:`InputError`, errors caused by the
requested configuration are :class:`ConfigError`. The command line maps
them to exit codes 2 and 3.
"""


class InputError(Exception):
    """Malformed or inconsistent input data."""


class ConfigError(Exception):
    """Invalid or contradictory configuration."""


class UsageError(ConfigError):
    def __init__(self, detail):
        super().__init__(f"Invalid command line: {detail}")


class OutOfUnitInterval(ConfigError, ValueError):
    def __init__(self, name, value):
        msg = f"Value '{name}'={value} is outside the unit interval [0, 1]"
        super().__init__(msg)


class InvalidRect(ConfigError, ValueError):
    def __init__(self, u1, u2, v1, v2):
        msg = f"Invalid box [{u1}, {u2}] x [{v1}, {v2}], expected u1<=u2, v1<=v2"
        super().__init__(msg)


class UnknownFamily(ConfigError):
    def __init__(self, family, available):
        msg = f"Unknown copula family '{family}' from {sorted(available)}"
        super().__init__(msg)


class InvalidParameter(ConfigError, ValueError):
    def __init__(self, family, name, value, expected):
        msg = f"Family '{family}' requires {name} {expected}, got {value!r}"
        super().__init__(msg)


class IncompatibleFamily(ConfigError):
    def __init__(self, family, operation):
        msg = f"Operation '{operation}' is not defined for family '{family}'"
        super().__init__(msg)


class InvalidSchedule(ConfigError, ValueError):
    def __init__(self, detail):
        super().__init__(f"Invalid schedule: {detail}")


class GridTooDeep(ConfigError):
    def __init__(self, t, n, min_points):
        msg = (
            f"Level t={t} leaves fewer than {min_points} expected points "
            f"in the tail box for n={n} observations"
        )
        super().__init__(msg)


class DegenerateBox(ConfigError, ValueError):
    def __init__(self, w, z):
        msg = f"Box scales must be positive and bounded away from 0, got w={w}, z={z}"
        super().__init__(msg)


class InvalidSample(InputError, ValueError):
    def __init__(self, detail):
        super().__init__(f"Invalid sample: {detail}")


class InconsistentMargins(InputError, ValueError):
    def __init__(self, detail):
        super().__init__(f"Inconsistent joint pmf: {detail}")


class MalformedFile(InputError):
    def __init__(self, path, detail):
        super().__init__(f"Malformed input file '{path}': {detail}")


class UnwritableOutput(InputError):
    def __init__(self, path, detail):
        super().__init__(f"Cannot write output file '{path}': {detail}")


class NonIncreasingGrid(ArithmeticError):
    def __init__(self, violation, location):
        msg = f"Grid is not 2-increasing, cell volume {violation} at {location}"
        super().__init__(msg)


class NonMonotone(ArithmeticError):
    def __init__(self, volume, rect):
        msg = f"Negative C-volume {volume} on {rect}, copula is not 2-increasing"
        super().__init__(msg)


class RootFindFailure(ArithmeticError):
    def __init__(self, family, count):
        msg = f"Conditional inversion failed for {count} draws of '{family}'"
        super().__init__(msg)
