"""
The catalog run end to end.

Every entry runs through run_operation and its expectations are compared
with the observed verdicts. A failed zero claim whose relative residual stays
below NUMERICAL_HEADROOM is reported as numerical rather than logical.
"""

import logging
import time
from dataclasses import dataclass

from django.conf import settings
from pandas import DataFrame

from expressions.exceptions import GeometryError
from expressions.verdicts import IDENTICALLY_ZERO

from .catalog import load_catalog
from .operations import run_operation
from .reports import compare

logger = logging.getLogger(__name__)

PASS = 'pass'
NUMERICAL = 'numerical'
LOGICAL = 'logical'
ERROR = 'error'

COLUMNS = ['id', 'family', 'action', 'status', 'mismatches', 'anchor', 'provenance', 'seconds']


def classify_mismatch(name, expected, outcome):
    check = outcome.checks.get(name)
    headroom = settings.GEOMETRY['NUMERICAL_HEADROOM']
    if expected == IDENTICALLY_ZERO and check is not None and check.worst_ratio < headroom:
        return NUMERICAL
    return LOGICAL


def run_entry(entry, config):
    """One summary row plus the verdicts the entry produced."""
    started = time.perf_counter()
    row = {'id': entry.id, 'family': entry.family, 'action': entry.action,
           'anchor': entry.anchor, 'provenance': entry.provenance, 'mismatches': ''}
    verdicts, witnesses = {}, {}
    try:
        inputs = dict(entry.inputs, bounds=config.with_box(entry.box))
        outcome = run_operation(entry.family, entry.action, inputs, config)
    except GeometryError as exc:
        row['status'] = ERROR
        row['mismatches'] = f'{type(exc).__name__}: {exc}'
        logger.warning('%s raised %s', entry.id, row['mismatches'])
    else:
        verdicts, witnesses = outcome.verdicts, outcome.witnesses()
        mismatches = compare(verdicts, entry.expect)
        kinds = {classify_mismatch(name, entry.expect[name], outcome) for name in mismatches}
        row['status'] = LOGICAL if LOGICAL in kinds else NUMERICAL if kinds else PASS
        row['mismatches'] = ', '.join(f'{name}={verdicts.get(name)}' for name in mismatches)
    row['seconds'] = round(time.perf_counter() - started, 3)
    logger.info('%s: %s', entry.id, row['status'])
    return row, verdicts, witnesses


@dataclass
class SuiteSummary:
    frame: DataFrame
    verdicts: dict
    witnesses: dict

    @property
    def passed(self):
        return bool((self.frame['status'] == PASS).all())

    def counts(self):
        return {status: int(count) for status, count in self.frame['status'].value_counts().items()}

    def as_dict(self):
        return {
            'passed': self.passed,
            'counts': self.counts(),
            'entries': self.frame.to_dict(orient='records'),
        }


def verify_paper(config, only=None, catalog=None):
    """
    Run the catalog sequentially, sorted by id; only keeps entries whose id
    starts with one of the given prefixes.
    """
    entries = load_catalog(catalog)
    if only:
        entries = [entry for entry in entries if any(entry.id.startswith(prefix) for prefix in only)]
    rows, verdicts, witnesses = [], {}, {}
    for entry in entries:
        row, verdicts[entry.id], entry_witnesses = run_entry(entry, config)
        rows.append(row)
        if entry_witnesses:
            witnesses[entry.id] = entry_witnesses
    frame = DataFrame(rows, columns=COLUMNS)
    summary = SuiteSummary(frame, verdicts, witnesses)
    logger.info('catalog run: %s', summary.counts())
    return summary
