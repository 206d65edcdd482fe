import math
import re
from collections.abc import Mapping

from rest_framework import serializers

from adf.conf import simulator_setting
from adf.utils.channel import Normalization, Variant
from adf.utils.experiment import (
    SCHEME_NAMES, ChannelConfig, ExperimentConfig, RunConfig, ScattererArc, ScenarioConfig,
    SchemeConfig, SweepConfig,
)
from adf.utils.variational import STEP_UNITS, OptimizerConfig

WAVELENGTH_TOLERANCE = 1e-9
_PI_MULTIPLE = re.compile(
    r'^\s*(?P<sign>[-+])?\s*(?:(?P<coef>\d+(?:\.\d*)?)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$'
)
_LAMBDA_MULTIPLE = re.compile(
    r'^\s*(?:(?P<coef>\d+(?:\.\d*)?)\s*\*?\s*)?lambda\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$'
)


def flatten_errors(detail, prefix=''):
    """DRF error detail as a flat list of ``"section.field: message"`` strings."""
    if isinstance(detail, Mapping):
        messages = []
        for key, value in detail.items():
            name = prefix if key == 'non_field_errors' else (f'{prefix}.{key}' if prefix else str(key))
            messages.extend(flatten_errors(value, name))
        return messages
    if isinstance(detail, list):
        messages = []
        for index, value in enumerate(detail):
            if isinstance(value, (Mapping, list)):
                messages.extend(flatten_errors(value, f'{prefix}[{index}]'))
            else:
                messages.append(f'{prefix}: {value}' if prefix else str(value))
        return messages
    return [f'{prefix}: {detail}' if prefix else str(detail)]


class AngleField(serializers.Field):
    """Radians, given as a number or as a ``"k*pi/n"`` string."""

    default_error_messages = {
        'invalid': 'Expected radians as a number or a "k*pi/n" string.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        if isinstance(data, (int, float)):
            value = float(data)
        elif isinstance(data, str):
            match = _PI_MULTIPLE.match(data)
            if not match:
                try:
                    value = float(data)
                except ValueError:
                    self.fail('invalid')
            else:
                coef = float(match['coef']) if match['coef'] else 1.0
                den = float(match['den']) if match['den'] else 1.0
                if den == 0.0:
                    self.fail('invalid')
                value = coef * math.pi / den
                if match['sign'] == '-':
                    value = -value
        else:
            self.fail('invalid')
        if not math.isfinite(value):
            self.fail('invalid')
        return value

    def to_representation(self, value):
        return value


class SpacingField(serializers.Field):
    """Meters, or a multiple of the wavelength such as ``"lambda/2"``.

    Wavelength multiples come back as ``('lambda', factor)`` and are resolved
    once the scenario's wavelength is known.
    """

    default_error_messages = {
        'invalid': 'Expected meters or a "k*lambda/n" string.',
        'positive': 'Spacing must be positive.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        if isinstance(data, (int, float)):
            if not data > 0:
                self.fail('positive')
            return float(data)
        if isinstance(data, str):
            match = _LAMBDA_MULTIPLE.match(data)
            if match:
                coef = float(match['coef']) if match['coef'] else 1.0
                den = float(match['den']) if match['den'] else 1.0
                if coef <= 0.0 or den <= 0.0:
                    self.fail('positive')
                return ('lambda', coef / den)
        self.fail('invalid')

    def to_representation(self, value):
        return value


class StrictSerializer(serializers.Serializer):
    """Serializer that reports unknown keys alongside every field error."""

    def to_internal_value(self, data):
        if not isinstance(data, Mapping):
            raise serializers.ValidationError({'non_field_errors': ['Expected a table.']})
        errors = {key: ['Unknown field.'] for key in data if key not in self.fields}
        try:
            value = super().to_internal_value(data)
        except serializers.ValidationError as exc:
            errors.update(exc.detail)
            raise serializers.ValidationError(errors)
        if errors:
            raise serializers.ValidationError(errors)
        return value


class ScenarioSerializer(StrictSerializer):
    f_c = serializers.FloatField(required=False, min_value=1.0)
    wavelength = serializers.FloatField(required=False)
    N = serializers.IntegerField(min_value=1)
    d_r = SpacingField(required=False, default=('lambda', 0.5))
    d_t = SpacingField(required=False, default=('lambda', 0.5))
    theta_t = AngleField(required=False, default=math.pi / 2)
    phi_t = AngleField(required=False, default=0.0)
    theta_r = AngleField(required=False, default=math.pi / 2)
    phi_r = AngleField(required=False, default=0.0)
    rho_db = serializers.FloatField(required=False, default=10.0)

    def validate(self, attrs):
        c = simulator_setting('SPEED_OF_LIGHT')
        errors = {}
        wavelength = attrs.get('wavelength')
        f_c = attrs.get('f_c')
        if wavelength is not None and not wavelength > 0:
            errors['wavelength'] = ['Wavelength must be positive.']
        elif f_c is None and wavelength is None:
            errors['f_c'] = ['Give the carrier frequency f_c (Hz) or the wavelength (m).']
        elif f_c is not None:
            derived = c / f_c
            if wavelength is not None and abs(wavelength - derived) > WAVELENGTH_TOLERANCE * derived:
                errors['wavelength'] = [
                    f'Wavelength {wavelength} m does not match c/f_c = {derived:.12g} m.'
                ]
            wavelength = derived
        else:
            f_c = c / wavelength
        for name in ('theta_t', 'theta_r'):
            if not 0.0 <= attrs[name] <= math.pi:
                errors[name] = ['Polar angle must lie in [0, pi].']
        for name in ('phi_t', 'phi_r'):
            if not -math.pi <= attrs[name] < math.pi:
                errors[name] = ['Azimuth must lie in [-pi, pi).']
        if errors:
            raise serializers.ValidationError(errors)

        attrs['f_c'] = f_c
        attrs['wavelength'] = wavelength
        for name in ('d_r', 'd_t'):
            spacing = attrs[name]
            if isinstance(spacing, tuple):
                attrs[name] = spacing[1] * wavelength
        return attrs


class ScatterersSerializer(StrictSerializer):
    count = serializers.IntegerField(min_value=1)
    radius = serializers.FloatField()
    angle_min = AngleField()
    angle_max = AngleField()
    seed = serializers.IntegerField(required=False, min_value=0)

    def validate(self, attrs):
        errors = {}
        if not attrs['radius'] > 0:
            errors['radius'] = ['Radius must be positive.']
        if not attrs['angle_min'] < attrs['angle_max']:
            errors['angle_max'] = ['angle_max must exceed angle_min.']
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class ChannelSerializer(StrictSerializer):
    variant = serializers.ChoiceField(choices=[v.value for v in Variant], default=Variant.LOS.value)
    k_db = serializers.FloatField(required=False)
    normalization = serializers.ChoiceField(choices=[n.value for n in Normalization],
                                            default=Normalization.RAW.value)
    scatterers = ScatterersSerializer(required=False)

    def validate(self, attrs):
        errors = {}
        if attrs['variant'] != Variant.LOS.value and 'scatterers' not in attrs:
            errors['scatterers'] = [f'A {attrs["variant"]} channel needs a [channel.scatterers] table.']
        if attrs['variant'] == Variant.RICIAN.value and 'k_db' not in attrs:
            errors['k_db'] = ['A rician channel needs the Rician factor k_db.']
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class SchemeSerializer(StrictSerializer):
    name = serializers.ChoiceField(choices=SCHEME_NAMES)
    label = serializers.CharField(required=False, default='')
    alpha = serializers.FloatField(required=False, max_value=0.0)
    form = serializers.ChoiceField(choices=['simplified', 'nearfield'], default='simplified')
    p_as = serializers.IntegerField(required=False, min_value=1)
    iterations = serializers.IntegerField(required=False, min_value=1)
    step_size = serializers.FloatField(required=False, min_value=0.0)
    threshold = serializers.FloatField(required=False, min_value=0.0)
    grid_multiplier = serializers.IntegerField(required=False, min_value=1)
    density_cap = serializers.BooleanField(required=False, default=False)
    step_units = serializers.ChoiceField(choices=STEP_UNITS, default='unit-mass')

    def validate_alpha(self, value):
        if not value > -0.5:
            raise serializers.ValidationError('alpha must lie in (-0.5, 0].')
        return value


class SweepSerializer(StrictSerializer):
    M = serializers.ListField(child=serializers.IntegerField(min_value=2), allow_empty=False)
    z0 = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    alpha = serializers.ListField(child=serializers.FloatField(max_value=0.0), required=False, default=list)

    def validate_z0(self, value):
        if any(not z > 0 for z in value):
            raise serializers.ValidationError('Every z0 must be positive (meters).')
        return value

    def validate_alpha(self, value):
        if any(not a > -0.5 for a in value):
            raise serializers.ValidationError('Every alpha must lie in (-0.5, 0].')
        return value


class RunSerializer(StrictSerializer):
    trials = serializers.IntegerField(required=False, default=0, min_value=0)
    seed = serializers.IntegerField(required=False, default=0, min_value=0, max_value=2 ** 64 - 1)
    output = serializers.CharField(required=False, default='', allow_blank=True)
    threads = serializers.IntegerField(required=False, default=1, min_value=1)
    timing = serializers.BooleanField(required=False, default=False)


class ExperimentSerializer(StrictSerializer):
    """Whole experiment document; ``save()`` returns an ``ExperimentConfig``."""
    scenario = ScenarioSerializer()
    channel = ChannelSerializer(required=False)
    schemes = SchemeSerializer(many=True, required=False, default=list)
    sweep = SweepSerializer(required=False)
    run = RunSerializer(required=False)

    def validate(self, attrs):
        sweep_alpha = (attrs.get('sweep') or {}).get('alpha') or []
        errors = {}
        for index, scheme in enumerate(attrs.get('schemes', [])):
            if scheme['name'] == 'closed_form' and 'alpha' not in scheme and not sweep_alpha:
                errors[f'schemes[{index}].alpha'] = ['closed_form needs alpha here or in [sweep].']
        if errors:
            raise serializers.ValidationError(errors)
        return attrs

    def create(self, validated_data):
        scenario = ScenarioConfig(
            carrier_frequency=validated_data['scenario']['f_c'],
            wavelength=validated_data['scenario']['wavelength'],
            N=validated_data['scenario']['N'],
            d_r=validated_data['scenario']['d_r'],
            d_t=validated_data['scenario']['d_t'],
            theta_t=validated_data['scenario']['theta_t'],
            phi_t=validated_data['scenario']['phi_t'],
            theta_r=validated_data['scenario']['theta_r'],
            phi_r=validated_data['scenario']['phi_r'],
            rho_db=validated_data['scenario']['rho_db'],
        )
        channel_data = validated_data.get('channel') or {}
        arc_data = channel_data.get('scatterers')
        channel = ChannelConfig(
            variant=Variant(channel_data.get('variant', Variant.LOS.value)),
            k_db=channel_data.get('k_db'),
            normalization=Normalization(channel_data.get('normalization', Normalization.RAW.value)),
            arc=ScattererArc(**arc_data) if arc_data else None,
        )
        sweep_data = validated_data.get('sweep') or {}
        sweep = SweepConfig(
            M=tuple(sweep_data.get('M', SweepConfig.M)),
            z0=tuple(sweep_data.get('z0', SweepConfig.z0)),
            alpha=tuple(sweep_data.get('alpha', ())),
        )
        run = RunConfig(**(validated_data.get('run') or {}))
        schemes = tuple(self._scheme(data, scenario.rho) for data in validated_data.get('schemes', []))
        return ExperimentConfig(scenario=scenario, channel=channel, schemes=schemes,
                                sweep=sweep, run=run, source=dict(self.initial_data))

    @staticmethod
    def _scheme(data, rho):
        optimizer = None
        if data['name'] == 'variational':
            options = {'snr': rho, 'density_cap': data['density_cap'], 'step_units': data['step_units']}
            for source, target in (('iterations', 'max_iterations'), ('step_size', 'step_size'),
                                   ('threshold', 'threshold'), ('grid_multiplier', 'grid_multiplier')):
                if source in data:
                    options[target] = data[source]
            optimizer = OptimizerConfig(**options)
        return SchemeConfig(
            name=data['name'], label=data['label'], alpha=data.get('alpha'),
            form=data['form'], p_as=data.get('p_as'), optimizer=optimizer,
        )
