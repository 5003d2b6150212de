from rest_framework import serializers

import numpy as np

from .exceptions import MVOPError
from .special_family import build_dg1
from .weight import WeightSpec


def _pair(value):
    """Bilangan kompleks dari [re, im] atau dari bilangan real biasa."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise serializers.ValidationError("Bilangan kompleks harus [re, im].")
        re, im = value
    else:
        re, im = value, 0.0
    try:
        return complex(float(re), float(im))
    except (TypeError, ValueError):
        raise serializers.ValidationError(f"Bukan bilangan: {value!r}.") from None


class ComplexNumberField(serializers.Field):
    def to_internal_value(self, data):
        return _pair(data)

    def to_representation(self, value):
        value = complex(value)
        return [value.real, value.imag]


class ComplexMatrixField(serializers.Field):
    default_error_messages = {
        'not_square': "Matrix harus berupa list baris dengan panjang sama (persegi).",
    }

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or not data:
            self.fail('not_square')
        rows = []
        for row in data:
            if not isinstance(row, (list, tuple)) or len(row) != len(data):
                self.fail('not_square')
            rows.append([_pair(entry) for entry in row])
        return np.array(rows, dtype=complex)

    def to_representation(self, value):
        return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(value, dtype=complex)]


class DG1Serializer(serializers.Serializer):
    N = serializers.IntegerField(min_value=1)
    alpha = serializers.FloatField()
    nu = serializers.ListField(child=ComplexNumberField(), allow_empty=True)

    def validate(self, attrs):
        try:
            attrs['family'] = build_dg1(attrs['nu'], attrs['alpha'], attrs['N'])
        except MVOPError as exc:
            raise serializers.ValidationError({'dg1': str(exc)})
        return attrs

    def create(self, validated_data):
        return validated_data['family']


class WeightSpecSerializer(serializers.Serializer):
    """JSON spec <-> WeightSpec. Blok ``dg1`` didahulukan daripada ``B``."""

    N = serializers.IntegerField(min_value=1, required=False)
    alpha = serializers.FloatField(required=False)
    s = serializers.FloatField(min_value=0.0, default=0.0)
    B = ComplexMatrixField(required=False)
    tt_poly = serializers.ListField(child=ComplexMatrixField(), required=False, allow_null=True)
    normalize_gamma0 = serializers.BooleanField(default=False)
    dg1 = DG1Serializer(required=False)

    def validate(self, attrs):
        dg1 = attrs.get('dg1')
        if dg1 is not None:
            for key in ('N', 'alpha'):
                if key in attrs and attrs[key] != dg1[key]:
                    raise serializers.ValidationError({key: f"Tidak cocok dengan blok dg1 ({dg1[key]})."})
            return attrs
        missing = [key for key in ('N', 'alpha', 'B') if key not in attrs]
        if missing:
            raise serializers.ValidationError({key: "Wajib diisi tanpa blok dg1." for key in missing})
        if attrs['B'].shape[0] != attrs['N']:
            raise serializers.ValidationError({'B': f"B harus {attrs['N']}x{attrs['N']}."})
        return attrs

    def create(self, validated_data):
        try:
            dg1 = validated_data.get('dg1')
            if dg1 is not None:
                return dg1['family'].weight_spec(validated_data['s'], validated_data['normalize_gamma0'])
            return WeightSpec(
                N=validated_data['N'],
                alpha=validated_data['alpha'],
                s=validated_data['s'],
                B=validated_data['B'],
                tt_poly=validated_data.get('tt_poly'),
                normalize_gamma0=validated_data['normalize_gamma0'],
            )
        except MVOPError as exc:
            raise serializers.ValidationError({'spec': str(exc)})

    def to_representation(self, instance):
        data = instance.canonical()
        data['digest'] = instance.digest
        if instance.dg1_nu is not None:
            data['dg1'] = {
                'N': instance.N,
                'alpha': instance.alpha,
                'nu': [[v.real, v.imag] for v in instance.dg1_nu],
            }
        return data


class PolynomialSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    coefficients = serializers.ListField(child=ComplexMatrixField())
    gamma = ComplexMatrixField()
    gamma_inv = ComplexMatrixField()
    alpha_rec = ComplexMatrixField()
    beta_rec = ComplexMatrixField(allow_null=True)
    hankel_cond = serializers.FloatField()


class MVOPFamilySerializer(serializers.Serializer):
    spec = serializers.SerializerMethodField()
    n_max = serializers.IntegerField()
    polynomials = serializers.SerializerMethodField()

    def get_spec(self, obj):
        return WeightSpecSerializer(obj.spec).data

    def get_polynomials(self, obj):
        rows = [
            {
                'n': n,
                'coefficients': [obj.coeff(n, j) for j in range(n + 1)],
                'gamma': obj.gamma[n],
                'gamma_inv': obj.gamma_inv[n],
                'alpha_rec': obj.alpha_rec[n],
                'beta_rec': obj.beta_rec[n],
                'hankel_cond': obj.hankel_cond[n],
            }
            for n in range(obj.n_max + 1)
        ]
        return PolynomialSerializer(rows, many=True).data


class LaxQuantitiesSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    s = serializers.FloatField()
    p = ComplexMatrixField()
    q = ComplexMatrixField()
    a = ComplexMatrixField()
    b = ComplexMatrixField()
    Bn = ComplexMatrixField()
    Bhat = ComplexMatrixField()
    alpha_rec = ComplexMatrixField()
    beta_rec = ComplexMatrixField(allow_null=True)


class LaxStateSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    s = serializers.FloatField()
    a = ComplexMatrixField()
    b = ComplexMatrixField()
    Bn = ComplexMatrixField()
    Bhat = ComplexMatrixField()


class BootstrapStepSerializer(LaxStateSerializer):
    alpha_rec = ComplexMatrixField()
    beta_rec = ComplexMatrixField(allow_null=True)


class ResidualEntrySerializer(serializers.Serializer):
    suite = serializers.CharField()
    n = serializers.IntegerField()
    s = serializers.FloatField()
    identity = serializers.CharField()
    abs_residual = serializers.FloatField()
    rel_residual = serializers.FloatField()
    tolerance = serializers.FloatField()
    passed = serializers.BooleanField()
    skipped = serializers.BooleanField()
    note = serializers.CharField(allow_blank=True)


class ResidualReportSerializer(serializers.Serializer):
    suite = serializers.CharField()
    context = serializers.DictField()
    passed = serializers.BooleanField()
    entries = serializers.SerializerMethodField()

    def get_entries(self, obj):
        return ResidualEntrySerializer(obj.sorted_entries(), many=True).data
