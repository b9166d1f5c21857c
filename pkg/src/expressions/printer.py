from sympy.printing.str import StrPrinter


class FormulaPrinter(StrPrinter):
    """Prints expression trees in the same grammar that parse() reads."""

    def _print_Pow(self, expr, rational=False):
        return super()._print_Pow(expr, rational=rational).replace('**', '^')

    def _print_Exp1(self, expr):
        return 'exp(1)'


_printer = FormulaPrinter()


def to_formula(expr):
    return _printer.doprint(expr)
