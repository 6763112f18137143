"""Error classes shared across the package.

The CLI maps these onto fixed exit codes: input errors exit 1, resource
cap errors exit 2, internal consistency failures exit 3.
"""


class CayleyLabError(Exception):
    exit_code = 1


class InputError(CayleyLabError):
    exit_code = 1


class ResourceError(CayleyLabError):
    exit_code = 2


class InternalError(CayleyLabError):
    exit_code = 3
