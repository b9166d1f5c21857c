from dataclasses import dataclass

from expressions.exceptions import ChartMismatchError
from expressions.symbols import as_symbol, symbols


@dataclass(frozen=True)
class Chart:
    name: str
    coordinates: tuple

    def __post_init__(self):
        coordinates = tuple(as_symbol(c) for c in self.coordinates)
        if len(set(coordinates)) != len(coordinates):
            raise ChartMismatchError(f'chart {self.name} repeats a coordinate')
        object.__setattr__(self, 'coordinates', coordinates)

    @property
    def dim(self):
        return len(self.coordinates)

    @property
    def names(self):
        return tuple(c.name for c in self.coordinates)

    def index(self, coordinate):
        coordinate = as_symbol(coordinate)
        try:
            return self.coordinates.index(coordinate)
        except ValueError:
            raise ChartMismatchError(f'{coordinate} is not a coordinate of chart {self.name}') from None

    def check_expression(self, expr):
        """Reject expressions that use coordinates of another standard chart."""
        foreign = {s.name for s in expr.free_symbols} & (STANDARD_COORDINATES - set(self.names))
        if foreign:
            raise ChartMismatchError(
                f'{", ".join(sorted(foreign))} not available on chart {self.name} {self.names}'
            )
        return expr

    def __str__(self):
        return f'{self.name}({", ".join(self.names)})'


J2_3RD = Chart('J2_3rd', symbols('x y p q'))
J1EXT = Chart('J1ext', symbols('x y p phi'))
MONGE1 = Chart('Monge1', symbols('x y p z'))
MONGE2 = Chart('Monge2', symbols('x y p q z'))
DKP = Chart('DKP', symbols('x y t v'))

STANDARD_CHARTS = {chart.name: chart for chart in (J2_3RD, J1EXT, MONGE1, MONGE2, DKP)}

STANDARD_COORDINATES = {c.name for chart in STANDARD_CHARTS.values() for c in chart.coordinates}
