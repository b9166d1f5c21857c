"""The quartic Psi(z) = a1 z^4 + 4 a2 z^3 + 6 a3 z^2 + 4 a4 z + a5 and its invariant I_Psi."""

from dataclasses import dataclass

import sympy

from expressions.printer import to_formula
from expressions.symbols import symbol


@dataclass(frozen=True)
class PsiInvariants:
    a1: sympy.Expr = sympy.S.Zero
    a2: sympy.Expr = sympy.S.Zero
    a3: sympy.Expr = sympy.S.Zero
    a4: sympy.Expr = sympy.S.Zero
    a5: sympy.Expr = sympy.S.Zero

    @classmethod
    def example6(cls, a5):
        return cls(a5=sympy.sympify(a5))

    def polynomial(self, variable=None):
        z = variable if variable is not None else symbol('z')
        return self.a1 * z ** 4 + 4 * self.a2 * z ** 3 + 6 * self.a3 * z ** 2 + 4 * self.a4 * z + self.a5

    @property
    def I_psi(self):
        return psi_invariant(self)

    def as_dict(self):
        data = {name: to_formula(sympy.sympify(getattr(self, name))) for name in ('a1', 'a2', 'a3', 'a4', 'a5')}
        data['I_psi'] = to_formula(self.I_psi)
        return data


def psi_invariant(invariants):
    """I_Psi = 6 a3^2 - 8 a2 a4 + 2 a1 a5; it vanishes when Psi has a root of multiplicity >= 3."""
    a1, a2, a3, a4, a5 = (sympy.sympify(getattr(invariants, name)) for name in ('a1', 'a2', 'a3', 'a4', 'a5'))
    return sympy.expand(6 * a3 ** 2 - 8 * a2 * a4 + 2 * a1 * a5)
