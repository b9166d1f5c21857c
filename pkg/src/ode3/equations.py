from dataclasses import dataclass, field
from functools import cached_property

import sympy

from exterior.charts import J2_3RD
from exterior.transport import total_derivative
from expressions.calculus import substitute
from expressions.evaluation import DomainBox, infer_box
from expressions.exceptions import ChartMismatchError
from expressions.parser import parse


@dataclass(eq=False)
class ThirdOrderODE:
    """y''' = F(x, y, p, q) with p = y', q = y''."""
    F: sympy.Expr
    box: DomainBox = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        F = sympy.sympify(self.F)
        if self.parameters:
            F = substitute(F, self.parameters)
        foreign = {s.name for s in F.free_symbols} - set(J2_3RD.names)
        if foreign:
            raise ChartMismatchError(f'F uses {", ".join(sorted(foreign))} outside x, y, p, q')
        self.F = F
        if self.box is None:
            self.box = infer_box(F)

    @classmethod
    def from_formula(cls, text, parameters=None, bounds=None):
        parameters = dict(parameters or {})
        F = parse(text, allowed=set(J2_3RD.names) | set(parameters))
        F = substitute(F, parameters) if parameters else F
        return cls(F, infer_box(F, bounds=bounds), {})

    @cached_property
    def D(self):
        """Total derivative d_x + p d_y + q d_p + F d_q."""
        return total_derivative('ode3', self.F)
