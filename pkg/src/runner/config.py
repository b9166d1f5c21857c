"""Run configuration: settings defaults < JSON file named in the environment < command-line flags."""

import json
import logging
import os
from dataclasses import asdict, dataclass, field

from django.conf import settings

from expressions.evaluation import DomainBox
from expressions.exceptions import ConfigurationError

from .forms import RunConfigForm

logger = logging.getLogger(__name__)

FILE_KEYS = ('tolerance', 'samples', 'seed', 'precision', 'box', 'output')


@dataclass(frozen=True)
class RunConfig:
    tolerance: float
    samples: int
    seed: int
    precision: int
    box: dict = field(default_factory=dict)
    output: str = 'human'

    @property
    def options(self):
        """Keyword arguments of every zero-testing operation."""
        return {'samples': self.samples, 'seed': self.seed, 'tol': self.tolerance, 'precision': self.precision}

    def with_box(self, items):
        """Entry-specific box items underneath the run-wide ones."""
        bounds = DomainBox.parse_items(items)
        bounds.update(self.box)
        return bounds

    def as_dict(self):
        data = asdict(self)
        data['box'] = {name: list(bounds) for name, bounds in self.box.items()}
        return data


def defaults():
    geometry = settings.GEOMETRY
    return {
        'tolerance': geometry['TOLERANCE'],
        'samples': geometry['SAMPLES'],
        'seed': geometry['SEED'],
        'precision': geometry['PRECISION'],
        'box': {},
        'output': 'human',
    }


def read_config_file(path):
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigurationError(f'cannot read configuration file {path}: {exc}') from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f'configuration file {path} is not valid JSON: {exc}') from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f'configuration file {path} must hold a JSON object')
    unknown = set(data) - set(FILE_KEYS)
    if unknown:
        raise ConfigurationError(f'unknown configuration keys: {", ".join(sorted(unknown))}')
    return data


def load_run_config(flags=None, path=None, environ=None):
    """
    Merge the three layers and validate the result with RunConfigForm.

    flags holds command-line values; None means not given.
    """
    environ = os.environ if environ is None else environ
    data = defaults()
    path = path or environ.get(settings.GEOMETRY_CONFIG_ENV)
    if path:
        data.update(read_config_file(path))
        logger.debug('configuration file %s loaded', path)
    data.update({key: value for key, value in (flags or {}).items() if value is not None})

    form = RunConfigForm(data)
    if not form.is_valid():
        problems = '; '.join(f'{name}: {" ".join(errors)}' for name, errors in form.errors.items())
        raise ConfigurationError(f'invalid run configuration ({problems})')
    return RunConfig(**form.cleaned_data)
