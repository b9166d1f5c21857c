import json
import logging
from dataclasses import dataclass, field

from django.conf import settings

from expressions.evaluation import DomainBox
from expressions.exceptions import CatalogError, DomainBoxError

from .operations import ACTIONS

logger = logging.getLogger(__name__)

#where an expectation comes from: stated with the example, derived by hand, or immediate
PROVENANCE_CHOICES = ('quoted', 'derived', 'trivial')

REQUIRED = ('id', 'family', 'action', 'expect', 'anchor', 'provenance')


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    family: str
    action: str
    expect: dict
    anchor: str
    provenance: str
    inputs: dict = field(default_factory=dict)
    box: tuple = ()

    @classmethod
    def from_dict(cls, data):
        missing = [name for name in REQUIRED if name not in data]
        if missing:
            raise CatalogError(f'catalog entry {data.get("id", "?")} lacks {", ".join(missing)}')
        entry_id = data['id']
        if data['family'] not in ACTIONS or data['action'] not in ACTIONS[data['family']]:
            raise CatalogError(f'catalog entry {entry_id}: unknown subject {data["family"]} {data["action"]}')
        if data['provenance'] not in PROVENANCE_CHOICES:
            raise CatalogError(f'catalog entry {entry_id}: provenance must be one of {", ".join(PROVENANCE_CHOICES)}')
        if not data['expect']:
            raise CatalogError(f'catalog entry {entry_id} expects nothing')
        box = tuple(data.get('box', ()))
        try:
            DomainBox.parse_items(box)
        except DomainBoxError as exc:
            raise CatalogError(f'catalog entry {entry_id}: {exc}') from exc
        return cls(
            id=entry_id,
            family=data['family'],
            action=data['action'],
            expect=dict(data['expect']),
            anchor=data['anchor'],
            provenance=data['provenance'],
            inputs=dict(data.get('inputs', {})),
            box=box,
        )

    def as_dict(self):
        return {
            'id': self.id,
            'family': self.family,
            'action': self.action,
            'inputs': self.inputs,
            'box': list(self.box),
            'expect': self.expect,
            'anchor': self.anchor,
            'provenance': self.provenance,
        }


def load_catalog(path=None):
    """Entries sorted by id."""
    path = path or settings.GEOMETRY['CATALOG']
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as exc:
        raise CatalogError(f'cannot read catalog {path}: {exc}') from exc
    except json.JSONDecodeError as exc:
        raise CatalogError(f'catalog {path} is not valid JSON: {exc}') from exc

    entries = [CatalogEntry.from_dict(data) for data in document.get('entries', [])]
    ids = [entry.id for entry in entries]
    duplicates = sorted({entry_id for entry_id in ids if ids.count(entry_id) > 1})
    if duplicates:
        raise CatalogError(f'duplicate catalog ids: {", ".join(duplicates)}')
    logger.debug('%d catalog entries loaded from %s', len(entries), path)
    return sorted(entries, key=lambda entry: entry.id)
