"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors are argparse's business
(exit 2), DegenerateParameterError exits 3, NumericError exits 4.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole."""


class DegenerateParameterError(DomainError):
    """Monodromy parameters on the excluded 2-torsion boundary set."""


class NumericError(RuntimeError):
    """A numerical procedure failed to converge or lost accuracy."""
