from dataclasses import dataclass, field

IDENTICALLY_ZERO = 'identically-zero'
NONZERO = 'nonzero'


@dataclass(frozen=True)
class ZeroTestVerdict:
    identically_zero: bool
    samples: int
    seed: int
    tolerance: float
    #term-magnitude scale at the worst sample
    scale: float = 0.0
    worst_ratio: float = 0.0
    witness: dict = None
    value: float = None
    component: object = None
    failures: int = 0

    def __post_init__(self):
        if not self.identically_zero and self.witness is None:
            raise ValueError('a nonzero verdict needs a witness point')

    @property
    def verdict(self):
        return IDENTICALLY_ZERO if self.identically_zero else NONZERO

    def as_dict(self):
        data = {
            'verdict': self.verdict,
            'samples': self.samples,
            'seed': self.seed,
            'tolerance': self.tolerance,
            'scale': self.scale,
            'worst_ratio': self.worst_ratio,
            'failures': self.failures,
        }
        if not self.identically_zero:
            data['witness'] = {'point': self.witness, 'value': self.value}
            if self.component is not None:
                data['witness']['component'] = str(self.component)
        return data


@dataclass
class InvariantReport:
    """Classification verdict plus every zero-test it rests on."""
    subject: str
    verdict: str
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def vanishes(self, name):
        return self.checks[name].identically_zero

    def witnesses(self):
        return {name: check.as_dict()['witness'] for name, check in self.checks.items()
                if isinstance(check, ZeroTestVerdict) and not check.identically_zero}

    def as_dict(self):
        return {
            'subject': self.subject,
            'verdict': self.verdict,
            'checks': {name: check.as_dict() for name, check in self.checks.items()},
            'details': self.details,
            'notes': list(self.notes),
        }
