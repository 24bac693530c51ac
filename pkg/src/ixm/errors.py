"""Exception hierarchy shared by every module.

The CLI maps these onto process exit codes: parse and usage problems exit
with 2, resource guards with 3, and ordinary suite failures with 1.
"""


class IxmError(Exception):
    """Base class for all workbench errors."""


class ParameterError(IxmError):
    """An argument violates a documented precondition."""


class ParseError(IxmError):
    """A textual representation could not be decoded."""


class InjectivityError(IxmError):
    """A requested chart would not be a partial bijection."""


class ResourceGuardError(IxmError):
    """A size or wall-clock guard refused to run the computation."""


class UnsupportedWitnessError(IxmError):
    """No separating-witness recipe is registered for a class pair."""
