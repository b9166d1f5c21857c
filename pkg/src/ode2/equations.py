from dataclasses import dataclass, field
from functools import cached_property

import sympy

from exterior.transport import total_derivative
from expressions.calculus import substitute
from expressions.evaluation import DomainBox, infer_box
from expressions.exceptions import ChartMismatchError
from expressions.parser import parse

ALLOWED = ('x', 'y', 'p')


@dataclass(eq=False)
class SecondOrderODE:
    """y'' = Q(x, y, p)."""
    Q: sympy.Expr
    box: DomainBox = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        Q = sympy.sympify(self.Q)
        if self.parameters:
            Q = substitute(Q, self.parameters)
        foreign = {s.name for s in Q.free_symbols} - set(ALLOWED)
        if foreign:
            raise ChartMismatchError(f'Q uses {", ".join(sorted(foreign))} outside x, y, p')
        self.Q = Q
        if self.box is None:
            self.box = infer_box(Q)

    @classmethod
    def from_formula(cls, text, parameters=None, bounds=None):
        parameters = dict(parameters or {})
        Q = parse(text, allowed=set(ALLOWED) | set(parameters))
        Q = substitute(Q, parameters) if parameters else Q
        return cls(Q, infer_box(Q, bounds=bounds))

    @cached_property
    def D(self):
        """d_x + p d_y + Q d_p on J1 x R."""
        return total_derivative('ode2', self.Q)
