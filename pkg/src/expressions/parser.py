"""
Formula grammar.

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := operand ('^' exponent)?
    exponent := ('-' | '+') exponent | power
    operand  := number | identifier '(' expr (',' expr)* ')' | identifier | '(' expr ')'

Numbers are integers or decimals and are read as exact rationals; a/b of two
integers folds to a rational. '^' is right-associative and binds tighter than
unary minus, so -q^2 is -(q^2), while the exponent may be signed: q^-1.
"""

import pyparsing as pp
import sympy

from .exceptions import FormulaSyntaxError, UnknownIdentifierError
from .symbols import Int, symbol

pp.ParserElement.enable_packrat()

FUNCTIONS = {
    'sqrt': sympy.sqrt,
    'exp': sympy.exp,
    'log': sympy.log,
}

#name -> number of arguments
ARITY = {'sqrt': 1, 'exp': 1, 'log': 1, 'Int': 2}


def _number(text, loc, tokens):
    return ('num', tokens[0], loc)


def _identifier(text, loc, tokens):
    return ('sym', tokens[0], loc)


def _call(text, loc, tokens):
    return ('call', tokens[0], tuple(tokens[1]), loc)


def _power(text, loc, tokens):
    if len(tokens) == 1:
        return tokens[0]
    base, exponent = tokens
    return ('^', base, exponent, loc)


def _signed(text, loc, tokens):
    sign, operand = tokens
    return ('neg', operand, loc) if sign == '-' else operand


def _sign(text, loc, tokens):
    sign, operand = tokens[0]
    return ('neg', operand, loc) if sign == '-' else operand


def _left(text, loc, tokens):
    group = tokens[0]
    node = group[0]
    for operator, operand in zip(group[1::2], group[2::2]):
        node = (operator, node, operand, loc)
    return node


def _build_grammar():
    expr = pp.Forward()
    lpar, rpar = pp.Suppress('('), pp.Suppress(')')

    number = pp.Regex(r'\d+(\.\d+)?|\.\d+').set_name('number')
    number.set_parse_action(_number)

    name = pp.Regex(r'[A-Za-z][A-Za-z0-9_]*').set_name('identifier')
    call = name + lpar + pp.Group(pp.DelimitedList(expr)) + rpar
    call.set_parse_action(_call)
    identifier = name.copy().set_parse_action(_identifier)

    atom = number | call | identifier | (lpar + expr + rpar)

    #right operand of '^' may carry its own sign: q^-1, 2^-q^2 = 2^(-(q^2))
    exponent = pp.Forward()
    power = atom + pp.Optional(pp.Suppress('^') + exponent)
    power.set_parse_action(_power)
    signed = pp.one_of('+ -') + exponent
    signed.set_parse_action(_signed)
    exponent <<= signed | power

    expr <<= pp.infix_notation(
        power,
        [
            (pp.one_of('+ -'), 1, pp.OpAssoc.RIGHT, _sign),
            (pp.one_of('* /'), 2, pp.OpAssoc.LEFT, _left),
            (pp.one_of('+ -'), 2, pp.OpAssoc.LEFT, _left),
        ],
        lpar=lpar,
        rpar=rpar,
    )
    return expr


GRAMMAR = _build_grammar()


def parse(text, allowed=None):
    """
    Parse a formula string into a sympy expression.

    When `allowed` is given, every free identifier must be one of its names;
    function names are always checked against FUNCTIONS and Int.
    """
    try:
        tree = GRAMMAR.parse_string(text, parse_all=True)[0]
    except pp.ParseException as exc:
        raise FormulaSyntaxError(f'syntax error ({exc.msg})', text, exc.loc) from exc
    allowed = None if allowed is None else frozenset(str(name) for name in allowed)
    return _build(tree, text, allowed)


def _build(node, text, allowed):
    kind = node[0]
    if kind == 'num':
        return sympy.Rational(node[1])
    if kind == 'sym':
        if allowed is not None and node[1] not in allowed:
            raise UnknownIdentifierError(node[1], text, node[2])
        return symbol(node[1])
    if kind == 'neg':
        return -_build(node[1], text, allowed)
    if kind == 'call':
        return _build_call(node, text, allowed)

    left = _build(node[1], text, allowed)
    right = _build(node[2], text, allowed)
    if kind == '^':
        return sympy.Pow(left, right)
    if kind == '*':
        return left * right
    if kind == '/':
        return left / right
    if kind == '+':
        return left + right
    return left - right


def _build_call(node, text, allowed):
    _, name, arguments, loc = node
    if name not in ARITY:
        raise UnknownIdentifierError(name, text, loc)
    if len(arguments) != ARITY[name]:
        raise FormulaSyntaxError(f'{name} takes {ARITY[name]} argument(s)', text, loc)
    if name == 'Int':
        body, var = arguments
        if var[0] != 'sym':
            raise FormulaSyntaxError('Int needs a plain variable as second argument', text, loc)
        return Int(_build(body, text, allowed), _build(var, text, allowed))
    return FUNCTIONS[name](_build(arguments[0], text, allowed))
