#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Tests for the integral estimators and oracles.'''

from __future__ import unicode_literals

import math
import unittest

import numpy as np

from QuasiChord import errors
from QuasiChord import estimators
from QuasiChord import geometry
from QuasiChord import kernels
from QuasiChord import quasidist
from QuasiChord import sampling

from tests import test_lib


class DistanceHistogramTest(test_lib.BaseTestCase):
    '''Tests for the distance histogram.'''

    def testRecordDistances(self):
        '''Tests the RecordDistances function.'''
        histogram = estimators.DistanceHistogram(4, 2.0, n_slots=2)
        histogram.RecordDistances([0.1, 0.6, 0.7, 1.9], slot=1)
        self.assertEqual(histogram.counts.tolist(), [1, 2, 0, 1])
        self.assertEqual(histogram.number_of_pairs, 4)
        self.assertEqual(histogram.slot_lines.tolist(), [0, 4])

        qd = histogram.NormalizeDistances()
        self.assertAlmostEqual(qd.GetIntegral(), 1.0)

        empty = histogram.CreateEmpty()
        self.assertIsInstance(empty, estimators.DistanceHistogram)
        with self.assertRaises(errors.NoDataError):
            empty.NormalizeDistances()

    def testRecoverAutocorrelation(self):
        '''Tests the RecoverAutocorrelation function.'''
        histogram = estimators.DistanceHistogram(2, 2.0)
        histogram.RecordDistances([0.5])
        with self.assertRaises(errors.EstimationError):
            estimators.RecoverAutocorrelation(histogram)

        histogram.source_volume = 2.0
        histogram.target_volume = 3.0
        values, stderr = estimators.RecoverAutocorrelation(histogram)
        self.assertAlmostEqual(values[0], 6.0 / (4.0 * math.pi / 3.0))
        self.assertEqual(values[1], 0.0)
        self.assertEqual(stderr.shape, (2,))


class SampleMomentsTest(test_lib.BaseTestCase):
    '''Tests for the sample moments.'''

    def testMoments(self):
        '''Tests the GetMean and GetStandardError functions.'''
        moments = estimators.SampleMoments()
        with self.assertRaises(errors.NoDataError):
            moments.GetMean()

        moments.Add([1.0, 2.0])
        other = estimators.SampleMoments()
        other.Add([3.0])
        moments.Merge(other)
        self.assertEqual(moments.count, 3)
        self.assertAlmostEqual(moments.GetMean(), 2.0)
        self.assertAlmostEqual(moments.GetStandardError(), 1.0 / math.sqrt(3.0))


class ChordEstimateTest(test_lib.BaseTestCase):
    '''Tests for the chord estimate.'''

    def testChordEstimate(self):
        '''Tests the ChordEstimate function on a single line.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        histogram = quasidist.SignedHistogram(4, 2.0)
        histogram.RecordLineChords([-1.0, 1.0])
        qd = histogram.NormalizeChord()

        report = estimators.ChordEstimate(qd, kernels.ConstantKernel(1.0), sphere)
        volume = sphere.GetVolume()
        self.assertEqual(report.method, 'chord')
        self.assertEqual(report.normalizer_used, 'V-over-meanl')
        self.assertAlmostEqual(report.metadata['mean_chord'], 1.75)
        self.assertEqual(report.metadata['m_hat'], 1.0)
        self.assertAlmostEqual(report.value, volume * 1.75 / 2.0)
        self.assertAlmostEqual(report.metadata['absorbed_fraction'], 1.75 / 2.0)
        self.assertAlmostEqual(
            report.alternatives['S-over-4']['value'], math.pi * 1.75 ** 2 / 2.0)

        with self.assertRaises(ValueError):
            estimators.ChordEstimate(
                qd, kernels.ConstantKernel(1.0), sphere, error_model='bootstrap')

        rays = quasidist.SignedHistogram(4, 2.0, mode='ray')
        rays.RecordRay([1.0])
        with self.assertRaises(ValueError):
            estimators.ChordEstimate(rays.NormalizeRay(), kernels.ConstantKernel(1.0), sphere)

    def testZeroKernel(self):
        '''Tests that the zero kernel gives exactly 0.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        histogram = quasidist.SignedHistogram(8, 2.0, n_slots=4)
        for slot, line in enumerate([[-1.0, 1.0], [-0.5, 0.5], [0.0, 1.5], [0.2, 0.4]]):
            histogram.RecordLineChords(line, slot=slot)

        report = estimators.ChordEstimate(
            histogram.NormalizeChord(), kernels.ConstantKernel(0.0), sphere)
        self.assertEqual(report.value, 0.0)
        self.assertEqual(report.stderr, 0.0)

    def testMonotoneInSigma(self):
        '''Tests that the estimate grows with the attenuation coefficient.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        rng = sampling.RngStream(0, module='test')
        anchors, directions = sampling.SampleKinematicLines(np.zeros(3), 1.0, rng, 20000)
        histogram = quasidist.SignedHistogram(64, 2.0002, n_slots=8)
        for slot in range(8):
            histogram.RecordLinesBatch(
                sphere.IntersectLines(anchors[slot::8], directions[slot::8]), slot=slot)
        qd = histogram.NormalizeChord()

        values = [
            estimators.ChordEstimate(qd, kernels.ExponentialKernel(sigma), sphere).value
            for sigma in (0.1, 0.5, 1.0, 5.0)]
        self.assertEqual(values, sorted(values))
        self.assertLess(values[-1], sphere.GetVolume())


class RayEstimateTest(test_lib.BaseTestCase):
    '''Tests for the ray estimates.'''

    def _GetRayDensity(self):
        histogram = quasidist.SignedHistogram(8, 2.0, mode='ray', n_slots=4)
        for slot, ray in enumerate([[0.3], [1.1], [0.2, 0.9, 1.7], [0.6]]):
            histogram.RecordRay(ray, slot=slot)
        return histogram.NormalizeRay()

    def testRayEstimate(self):
        '''Tests the RayEstimate function with a constant kernel.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        qd = self._GetRayDensity()
        report = estimators.RayEstimate(qd, kernels.ConstantKernel(1.0), sphere)
        self.assertEqual(report.method, 'ray')
        self.assertAlmostEqual(report.value, sphere.GetVolume() * qd.mean_length)
        self.assertGreater(report.stderr, 0.0)

        report = estimators.RayEstimate(qd, kernels.ConstantKernel(0.0), sphere)
        self.assertEqual(report.value, 0.0)

    def testRayDerivativeEstimate(self):
        '''Tests the RayDerivativeEstimate function.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        qd = self._GetRayDensity()
        report = estimators.RayDerivativeEstimate(qd, kernels.ExponentialKernel(1.0), sphere)
        self.assertEqual(report.method, 'ray-derivative')
        self.assertTrue(math.isfinite(report.value))

        report = estimators.RayDerivativeEstimate(qd, kernels.ConstantKernel(0.0), sphere)
        self.assertEqual(report.value, 0.0)


class DdEstimateTest(test_lib.BaseTestCase):
    '''Tests for the distance-distribution estimate.'''

    def testDdEstimate(self):
        '''Tests the DdEstimate function.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        histogram = estimators.DistanceHistogram(2, 2.0)
        histogram.RecordDistances([0.5])

        with self.assertRaises(errors.EstimationError):
            estimators.DdEstimate(histogram, kernels.ConstantKernel(1.0))

        report = estimators.DdEstimate(histogram, kernels.ConstantKernel(1.0), sphere)
        volume = sphere.GetVolume()
        self.assertEqual(report.method, 'dd')
        self.assertAlmostEqual(report.value, 3.0 * volume * volume / (4.0 * math.pi))

        report = estimators.DdEstimate(histogram, kernels.ConstantKernel(0.0), sphere)
        self.assertEqual(report.value, 0.0)


class OracleTest(test_lib.BaseTestCase):
    '''Tests for the oracles.'''

    def testOracleRadial(self):
        '''Tests the OracleRadial function.'''
        sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0)
        rng = sampling.RngStream(0, module='oracle-radial')

        report = estimators.OracleRadial(sphere, sphere, kernels.ConstantKernel(0.0), 1000, rng)
        self.assertEqual(report.value, 0.0)
        self.assertEqual(report.method, 'oracle-radial')
        self.assertAlmostEqual(report.metadata['l_max'], estimators.GetPairLength(sphere, sphere))

        samples = estimators.SampleOracleRadial(
            sphere, sphere, kernels.ConstantKernel(1.0), 1000, rng, 2.0)
        self.assertEqual(samples.shape, (1000,))
        self.assertTrue(np.all((samples == 0.0) | np.isclose(samples, sphere.GetVolume() * 2.0)))

    def testOraclePairwise(self):
        '''Tests the OraclePairwise function.'''
        first = geometry.Sphere((-2.0, 0.0, 0.0), 1.0)
        second = geometry.Sphere((2.0, 0.0, 0.0), 1.0)
        rng = sampling.RngStream(0, module='oracle-pairwise')
        kernel = kernels.ConstantKernel(1.0)

        report = estimators.OraclePairwise(first, second, kernel, 20000, rng)
        volume = first.GetVolume()
        # 1 / (4 pi R**2) at the center distance, with spread from the sizes.
        self.assertAlmostEqual(
            report.value, volume * volume / (4.0 * math.pi * 16.0), delta=0.02)

        with self.assertRaises(errors.UnsupportedConfigurationError):
            estimators.OraclePairwise(first, first, kernel, 10, rng)

        overlapping = geometry.Sphere((-1.5, 0.0, 0.0), 1.0)
        with self.assertRaises(errors.UnsupportedConfigurationError):
            estimators.OraclePairwise(first, overlapping, kernel, 10, rng)

    def testCheckSeparated(self):
        '''Tests the CheckSeparated function on touching spheres.'''
        first = geometry.Sphere((-1.0, 0.0, 0.0), 1.0)
        second = geometry.Sphere((1.0, 0.0, 0.0), 1.0)
        with self.assertLogs('QUASI_CHORD_LIB', level='WARNING'):
            estimators.CheckSeparated(first, second, probe_points=1000)


class HelperFunctionsTest(test_lib.BaseTestCase):
    '''Tests for the helper functions.'''

    def testAddRelativeError(self):
        '''Tests the AddRelativeError function.'''
        self.assertAlmostEqual(estimators.AddRelativeError(10.0, 3.0, 0.4), 5.0)

    def testGetPairLength(self):
        '''Tests the GetPairLength function.'''
        first = geometry.Sphere((-2.0, 0.0, 0.0), 1.0)
        second = geometry.Sphere((2.0, 0.0, 0.0), 1.0)
        self.assertAlmostEqual(
            estimators.GetPairLength(first, second), 6.0 * 1.0001, places=4)


if __name__ == '__main__':
    unittest.main()
