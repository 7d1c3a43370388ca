"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` which the CLI copies
into its JSON error document.  Precondition failures map to exit status 2,
numerical failures to exit status 4.
"""


class ImplosionError(Exception):
    code = "error"
    exit_status = 1

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class PreconditionError(ImplosionError, ValueError):
    code = "precondition"
    exit_status = 2

    def __init__(self, message, code=None, **details):
        super().__init__(message, **details)
        if code is not None:
            self.code = code


class NumericalError(ImplosionError, ArithmeticError):
    code = "numerical"
    exit_status = 4


class NoConvergence(NumericalError):
    code = "no_convergence"

    def __init__(self, message="no convergence", residual=None, iterations=None):
        super().__init__(message, residual=residual, iterations=iterations)
        self.residual = residual
        self.iterations = iterations


class DegenerateFlow(NumericalError):
    code = "degenerate_flow"


class PoleEncountered(NumericalError):
    code = "pole_encountered"
