"""Contact invariants of y''' = F: K, the Wuenschmann A, the Cartan G and the Cotton components."""

import logging
from dataclasses import dataclass

import sympy

from expressions.calculus import partial
from expressions.printer import to_formula

logger = logging.getLogger(__name__)

THIRD = sympy.Rational(1, 3)


@dataclass(frozen=True)
class Ode3Invariants:
    K: sympy.Expr
    A: sympy.Expr
    G: sympy.Expr
    L: sympy.Expr
    N: sympy.Expr
    C1: sympy.Expr
    C2: sympy.Expr
    C3: sympy.Expr
    C4: sympy.Expr
    C5: sympy.Expr

    @property
    def cotton(self):
        return {f'C{i}': getattr(self, f'C{i}') for i in range(1, 6)}

    def as_dict(self):
        return {name: to_formula(getattr(self, name))
                for name in ('K', 'A', 'G', 'L', 'N', 'C1', 'C2', 'C3', 'C4', 'C5')}


def ode3_invariants(ode):
    F, D = ode.F, ode.D

    F_q, F_p, F_y = partial(F, 'q'), partial(F, 'p'), partial(F, 'y')
    F_qq = partial(F_q, 'q')

    K = D(F_q) / 6 - F_q ** 2 / 9 - F_p / 2
    A = F_y + D(K) - 2 * THIRD * F_q * K
    G = D(D(F_qq)) - D(partial(F_q, 'p')) + partial(F_q, 'y')

    K_q, K_p = partial(K, 'q'), partial(K, 'p')
    K_qq = partial(K_q, 'q')
    L = -THIRD * partial(F_q, 'y') + THIRD * F_qq * K - K_p - THIRD * F_q * K_q
    L_q = partial(L, 'q')
    L_qq = partial(L_q, 'q')
    N = (THIRD * F_qq * L - 2 * THIRD * F_q * L_q - 2 * partial(L, 'p') + K * K_qq - partial(K_q, 'y')
         - K_q ** 2 / 2)
    N_q = partial(N, 'q')

    C5 = (-3 * K_qq * L + 3 * K_q * L_q - 3 * K * L_qq + 3 * partial(L_q, 'y') + 3 * partial(N, 'p') + F_q * N_q)
    invariants = Ode3Invariants(
        K=K, A=A, G=G, L=L, N=N,
        C1=partial(F_qq, 'q', 'q'),
        C2=partial(K_qq, 'q'),
        C3=L_qq,
        C4=N_q,
        C5=C5,
    )
    logger.debug('invariants of %s computed', to_formula(F))
    return invariants
