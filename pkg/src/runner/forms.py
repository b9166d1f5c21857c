from django import forms

from expressions.evaluation import DomainBox
from expressions.exceptions import DomainBoxError

OUTPUT_CHOICES = (
    ('human', 'Human-readable'),
    ('json', 'JSON report'),
)


class BoxField(forms.Field):
    """Repeated 'sym:lo:hi' items, as a list or one whitespace-separated string."""

    def to_python(self, value):
        if value in self.empty_values:
            return {}
        if isinstance(value, dict):
            return {str(k): tuple(v) for k, v in value.items()}
        items = value.split() if isinstance(value, str) else list(value)
        try:
            return DomainBox.parse_items(items)
        except DomainBoxError as exc:
            raise forms.ValidationError(str(exc), code='box') from exc


class RunConfigForm(forms.Form):
    tolerance = forms.FloatField()
    samples = forms.IntegerField(min_value=5)
    seed = forms.IntegerField(min_value=0)
    precision = forms.IntegerField(min_value=15, max_value=200)
    box = BoxField(required=False)
    output = forms.ChoiceField(choices=OUTPUT_CHOICES)

    def clean_tolerance(self):
        tolerance = self.cleaned_data['tolerance']
        if tolerance <= 0:
            raise forms.ValidationError('tolerance must be strictly positive', code='tolerance')
        return tolerance
