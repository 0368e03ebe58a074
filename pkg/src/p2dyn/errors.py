"""Exception hierarchy shared by the library and the CLI.

Every error carries an ``exit_code`` so the command line front end can map
failures to distinct process statuses without a lookup table of its own.
"""


class P2DynError(Exception):
    exit_code = 10


class ParseError(P2DynError):
    exit_code = 3

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InvalidLift(P2DynError):
    exit_code = 4


class NotAS(P2DynError):
    exit_code = 5


class BudgetExceeded(P2DynError):
    exit_code = 6

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegreeTooSmall(P2DynError):
    exit_code = 7


class NotAPoint(P2DynError):
    exit_code = 8


class PatchNearIndeterminacy(P2DynError):
    exit_code = 9


class ConfigError(P2DynError):
    exit_code = 12


class UsageError(P2DynError):
    exit_code = 2


IO_EXIT_CODE = 11
USAGE_EXIT_CODE = 2
