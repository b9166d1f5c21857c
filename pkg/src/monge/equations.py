from dataclasses import dataclass, field
from functools import cached_property

import sympy

from exterior.charts import MONGE1, MONGE2
from exterior.transport import total_derivative
from expressions.calculus import substitute
from expressions.evaluation import DomainBox, infer_box
from expressions.exceptions import ChartMismatchError
from expressions.parser import parse
from expressions.printer import to_formula


class MongeEquation:
    """z' = F on a jet chart; subclasses fix the chart and the class tag."""
    chart = None
    class_tag = None

    def __post_init__(self):
        F = sympy.sympify(self.F)
        if self.parameters:
            F = substitute(F, self.parameters)
        foreign = {s.name for s in F.free_symbols} - set(self.chart.names)
        if foreign:
            raise ChartMismatchError(
                f'F uses {", ".join(sorted(foreign))} outside {", ".join(self.chart.names)}'
            )
        self.F = F
        if self.box is None:
            self.box = infer_box(F)

    @classmethod
    def from_formula(cls, text, parameters=None, bounds=None):
        parameters = dict(parameters or {})
        F = parse(text, allowed=set(cls.chart.names) | set(parameters))
        F = substitute(F, parameters) if parameters else F
        return cls(F, infer_box(F, bounds=bounds))

    @cached_property
    def D(self):
        return total_derivative(self.class_tag, self.F)

    def along(self, x, y, p, z, q=None):
        """F evaluated on a curve given by its jet."""
        bindings = {'x': x, 'y': y, 'p': p, 'z': z}
        if q is not None:
            bindings['q'] = q
        return substitute(self.F, bindings)

    @property
    def subject(self):
        return f"z' = {to_formula(self.F)}"


@dataclass(eq=False)
class MongeFirst(MongeEquation):
    """z' = F(x, y, y', z)."""
    F: sympy.Expr
    box: DomainBox = None
    parameters: dict = field(default_factory=dict)

    chart = MONGE1
    class_tag = 'monge1'
    order = 1


@dataclass(eq=False)
class MongeSecond(MongeEquation):
    """z' = F(x, y, y', y'', z)."""
    F: sympy.Expr
    box: DomainBox = None
    parameters: dict = field(default_factory=dict)

    chart = MONGE2
    class_tag = 'monge2'
    order = 2
