import sympy

from .symbols import Int, as_symbol, family_driver, next_in_family


def differentiate(expr, var):
    """
    Exact derivative of expr in var.

    Family symbols driven by var step forward (d/dt w_k = w_{k+1},
    d/dq Upsilon_k = Upsilon_{k+1}); Int(body, var) differentiates to body.
    """
    expr = sympy.sympify(expr)
    var = as_symbol(var)
    driven = [s for s in expr.free_symbols if family_driver(s) == var]
    integrals = [node for node in expr.atoms(Int) if node.args[1] == var]
    if not driven and not integrals:
        return sympy.diff(expr, var)

    #each Int in var becomes a placeholder whose derivative is the body
    placeholders = {node: sympy.Dummy('J') for node in integrals}
    restore = {dummy: node for node, dummy in placeholders.items()}
    opened = expr.xreplace(placeholders)

    result = sympy.diff(opened, var)
    for sym in driven:
        result += sympy.diff(opened, sym) * next_in_family(sym)
    for node, dummy in placeholders.items():
        result += sympy.diff(opened, dummy) * node.args[0]
    return result.xreplace(restore)


def partial(expr, *variables):
    """partial(F, 'q', 'q') is F_qq."""
    for var in variables:
        expr = differentiate(expr, var)
    return expr


def substitute(expr, bindings):
    """Simultaneous substitution; keys may be symbols or names."""
    mapping = {as_symbol(key): sympy.sympify(value) for key, value in bindings.items()}
    return sympy.sympify(expr).subs(mapping, simultaneous=True)


def apply_vector_field(components, coordinates, expr):
    """X(f) = sum of X^i d_i f."""
    total = sympy.S.Zero
    for component, coordinate in zip(components, coordinates):
        if component != 0:
            total += component * differentiate(expr, coordinate)
    return total
