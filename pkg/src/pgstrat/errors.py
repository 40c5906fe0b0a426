"""Exception hierarchy."""


class PgStratError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(PgStratError):
    """Unknown component or malformed graph construction."""


class EvalError(PgStratError):
    """Expression evaluation failed (unresolved reference, type mismatch, division by zero)."""


class ExprSyntaxError(PgStratError):
    """Malformed expression text."""


class DanglingEdgeError(PgStratError):
    """A rewrite step would leave an edge without an endpoint.

    The match conditions make this impossible, so seeing it indicates a bug
    in the engine or a morphism that did not come from ``find_matches``.
    """


class StrategySyntaxError(PgStratError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class LinkError(PgStratError):
    """A strategy refers to an unknown rule, macro, distribution or parameter."""


class DistributionError(PgStratError):
    """A ``ppick`` distribution is not a valid probability vector."""


class ConfigError(PgStratError):
    """Invalid simulation configuration."""
