"""Symbols, the chained symbol families and the formal antiderivative node."""

import functools
import re

import sympy

#family prefix -> the variable whose derivative steps through the family
FAMILY_DRIVERS = {
    'w': 't',
    'Upsilon': 'q',
}

_FAMILY_NAME = re.compile(r'^(?P<prefix>[A-Za-z]+)_(?P<index>\d+)$')


@functools.lru_cache(maxsize=None)
def symbol(name):
    return sympy.Symbol(name)


def symbols(names):
    """symbols('x y p q') -> (x, y, p, q)"""
    return tuple(symbol(name) for name in names.split())


def as_symbol(value):
    if isinstance(value, sympy.Symbol):
        return value
    return symbol(str(value))


def family_member(prefix, index):
    if prefix not in FAMILY_DRIVERS:
        raise KeyError(f'no symbol family named {prefix!r}')
    return symbol(f'{prefix}_{index}')


def family_of(sym):
    """Return (prefix, index) for family symbols such as w_3, else None."""
    match = _FAMILY_NAME.match(sym.name) if isinstance(sym, sympy.Symbol) else None
    if match is None or match['prefix'] not in FAMILY_DRIVERS:
        return None
    return match['prefix'], int(match['index'])


def family_driver(sym):
    family = family_of(sym)
    if family is None:
        return None
    return symbol(FAMILY_DRIVERS[family[0]])


def next_in_family(sym):
    prefix, index = family_of(sym)
    return family_member(prefix, index + 1)


class Int(sympy.Function):
    """
    Formal antiderivative Int(body, var).

    Its derivative in var is body; in any other variable the Leibniz rule
    applies under the integral sign. It is never evaluated numerically.
    """
    nargs = 2

    @classmethod
    def eval(cls, body, var):
        if body.is_zero:
            return sympy.S.Zero
        return None

    def _eval_derivative(self, s):
        body, var = self.args
        if s == var:
            return body
        return Int(sympy.diff(body, s), var)
