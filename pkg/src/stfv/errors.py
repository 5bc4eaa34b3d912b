"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A thermodynamic state violates positivity (rho > 0, p > 0).

    Carries the offending values so callers can report which cell or
    quadrature node went bad.
    """

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values


class PathInadmissibleError(InvalidStateError):
    """A straight path in entropy-variable space left the admissible set.

    ``node`` is the index of the first offending quadrature node, ``xi``
    its coordinate in [0, 1].
    """

    def __init__(self, message, node=None, xi=None, values=None):
        super().__init__(message, values=values)
        self.node = node
        self.xi = xi


class DissipationError(ValueError):
    """A dissipation specification produced a non-SPD matrix."""


class SolverError(RuntimeError):
    """Newton iteration failed to converge or could not take a step.

    ``slab_index`` locates the failing slab (first slab of the failing
    block), ``diagnostics`` holds iteration counts and residual norms.
    """

    def __init__(self, message, slab_index=None, diagnostics=None):
        super().__init__(message)
        self.slab_index = slab_index
        self.diagnostics = diagnostics or {}


class VacuumError(ValueError):
    """Riemann data generates vacuum; the exact solver does not cover it."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent.

    ``field`` names the offending entry (dotted path into the config).
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
