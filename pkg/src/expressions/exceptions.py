"""Exception hierarchy shared by every geometry app."""


class GeometryError(Exception):
    """Base class; management commands turn these into exit status 2."""


class FormulaSyntaxError(GeometryError):
    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f'{message} at position {position}: {text!r}')


class UnknownIdentifierError(FormulaSyntaxError):
    def __init__(self, name, text, position):
        self.name = name
        super().__init__(f'unknown identifier {name!r}', text, position)


class UnboundSymbolError(GeometryError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__('unbound symbol(s): ' + ', '.join(self.names))


class DomainViolationError(GeometryError):
    pass


class ResidualAntiderivativeError(GeometryError):
    pass


class BoxUnusableError(GeometryError):
    def __init__(self, attempts, failures, last_error=None):
        self.attempts = attempts
        self.failures = failures
        self.last_error = last_error
        super().__init__(f'{failures} of {attempts} sample points could not be evaluated (last: {last_error})')


class DomainBoxError(GeometryError):
    pass


class ChartMismatchError(GeometryError):
    pass


class DegenerateFormError(GeometryError):
    pass


class SingularMetricError(GeometryError):
    pass


class DimensionError(GeometryError):
    pass


class DegenerateCoframeError(GeometryError):
    pass


class NotADkpSolutionError(GeometryError):
    pass


class VanishingTangentError(GeometryError):
    pass


class VanishingHessianError(GeometryError):
    """F_qq (or F'') vanishes identically where the construction divides by it."""


class ConfigurationError(GeometryError):
    pass


class CatalogError(GeometryError):
    pass
