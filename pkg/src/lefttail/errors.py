"""Exception types shared across the package.

Two broad failure classes matter to callers: a request that violates a
mathematical precondition (bad moment budget, unsupported family/order
combination, argument outside the admissible range), and a numerical
routine that could not deliver its contract.  The command line maps the
former to exit code 1 and the latter to exit code 2.
"""


class ConstraintError(ValueError):
    """A precondition on budgets, laws, or arguments is violated."""


class UnsupportedFamilyError(ConstraintError):
    """The requested operation is not defined for this reference family."""


class UnsupportedOrderError(ConstraintError):
    """The requested moment order alpha is not available for this law."""


class RegimeError(ConstraintError):
    """The threshold x lies outside the regime a solver can handle."""


class NumericError(RuntimeError):
    """A numerical routine failed to bracket, converge, or stay in range."""
