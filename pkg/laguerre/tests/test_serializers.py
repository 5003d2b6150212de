import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from laguerre.lax import lax_chain
from laguerre.mvop import build_family
from laguerre.serializers import (
    ComplexMatrixField,
    LaxQuantitiesSerializer,
    MVOPFamilySerializer,
    WeightSpecSerializer,
)
from laguerre.special_family import build_dg1

from .utils import scalar_spec


class ComplexMatrixFieldTests(SimpleTestCase):
    def test_pairs_and_bare_reals(self):
        field = ComplexMatrixField()
        M = field.to_internal_value([[1, [0, 2]], [[3, -1], 4.5]])
        assert_allclose(M, [[1, 2j], [3 - 1j, 4.5]])
        self.assertEqual(field.to_representation(np.array([[1 + 2j]])), [[[1.0, 2.0]]])

    def test_rejects_ragged_rows(self):
        serializer = WeightSpecSerializer(data={'N': 2, 'alpha': 1.0, 'B': [[1, 2], [3]]})
        self.assertFalse(serializer.is_valid())
        self.assertIn('B', serializer.errors)


class WeightSpecSerializerTests(SimpleTestCase):
    def test_explicit_matrix(self):
        serializer = WeightSpecSerializer(data={'N': 1, 'alpha': 1.5, 's': 0.5, 'B': [[0]]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        spec = serializer.save()
        self.assertEqual(spec.digest, scalar_spec(alpha=1.5, s=0.5).digest)

    def test_dg1_block_takes_precedence(self):
        data = {'s': 1.0, 'B': [[5, 5], [5, 5]], 'dg1': {'N': 2, 'alpha': 1.0, 'nu': [1.0]}}
        serializer = WeightSpecSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        spec = serializer.save()
        assert_allclose(spec.B, build_dg1([1.0], 1.0, 2).B)
        self.assertIsNotNone(spec.tt_poly)
        self.assertEqual(WeightSpecSerializer(spec).data['dg1']['nu'], [[1.0, 0.0]])

    def test_missing_fields_without_dg1(self):
        serializer = WeightSpecSerializer(data={'alpha': 1.0})
        self.assertFalse(serializer.is_valid())
        self.assertIn('N', serializer.errors)

    def test_degenerate_dg1_is_a_validation_error(self):
        serializer = WeightSpecSerializer(data={'dg1': {'N': 2, 'alpha': -1.0, 'nu': [1.0]}})
        self.assertFalse(serializer.is_valid())
        self.assertIn('dg1', serializer.errors)

    def test_dg1_dimension_conflict(self):
        serializer = WeightSpecSerializer(data={'N': 3, 'dg1': {'N': 2, 'alpha': 1.0, 'nu': [1.0]}})
        self.assertFalse(serializer.is_valid())
        self.assertIn('N', serializer.errors)


class DumpTests(SimpleTestCase):
    def test_family_dump(self):
        fam = build_family(scalar_spec(alpha=1.0, s=0.0), 0)
        data = MVOPFamilySerializer(fam).data
        first = data['polynomials'][0]
        self.assertEqual(first['coefficients'], [[[[1.0, 0.0]]]])
        self.assertAlmostEqual(first['gamma'][0][0][0], 1.0 / fam.moment(0)[0, 0].real)
        self.assertIsNone(first['beta_rec'])
        self.assertEqual(data['spec']['digest'], fam.spec.digest)

    def test_lax_dump(self):
        chain = lax_chain(build_family(scalar_spec(), 1))
        data = LaxQuantitiesSerializer(chain, many=True).data
        self.assertEqual([row['n'] for row in data], [0, 1])
        self.assertEqual(data[0]['b'], [[[0.0, 0.0]]])
