#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Tests for the chunked samplers, the oracles and the pair integrals.

The statistical tests use fixed seeds and compare with exact values or with
independent estimators within 4 standard errors.
'''

from __future__ import unicode_literals

import math
import unittest

import numpy as np

from QuasiChord import errors
from QuasiChord import estimators
from QuasiChord import geometry
from QuasiChord import kernels
from QuasiChord import Lib as QuasiChordLib
from QuasiChord import multibody
from QuasiChord import sampling
from QuasiChord import scene_file

from tests import test_lib


def _GetSphereIntegral(sigma, radius):
    '''Returns the exact absorbed integral of an exponential kernel in a sphere.'''
    a = sigma * radius
    escape = 3.0 / (8.0 * a ** 3) * (
        2.0 * a * a - 1.0 + (1.0 + 2.0 * a) * math.exp(-2.0 * a))
    return 4.0 / 3.0 * math.pi * radius ** 3 * (1.0 - escape)


class ChunkPlanTest(test_lib.BaseTestCase):
    '''Tests for the chunk plan.'''

    def testPlanChunks(self):
        '''Tests the _PlanChunks function.'''
        chunks = QuasiChordLib._PlanChunks(100, 32)
        self.assertEqual(len(chunks), 32)
        self.assertEqual(sum(chunks), 100)
        self.assertEqual(max(chunks) - min(chunks), 1)

        self.assertEqual(QuasiChordLib._PlanChunks(10, 32), [1] * 10)
        self.assertEqual(len(QuasiChordLib._PlanChunks(200000, 2)), 4)

        with self.assertRaises(errors.ConfigurationError):
            QuasiChordLib._PlanChunks(0, 32)

    def testGetDefaultLength(self):
        '''Tests the GetDefaultLength function.'''
        self.assertAlmostEqual(
            QuasiChordLib.GetDefaultLength((np.zeros(3), 1.5)), 3.0003)


class SphereTest(test_lib.BaseTestCase):
    '''Tests the single-body estimators on a unit sphere.'''

    _SIGMA = 1.0

    def setUp(self):
        '''Sets up the needed objects used throughout the test.'''
        self._sphere = geometry.Sphere((0.0, 0.0, 0.0), 1.0, label='ball')
        self._kernel = kernels.ExponentialKernel(self._SIGMA)
        self._expected = _GetSphereIntegral(self._SIGMA, 1.0)

    def testChordHistogram(self):
        '''Tests the BuildChordHistogram function and the chord estimate.'''
        histogram = QuasiChordLib.BuildChordHistogram(
            self._sphere, 200000, 512, seed=1, verify=True)
        self.assertEqual(histogram.number_of_chords, histogram.number_of_lines)
        self.assertEqual(histogram.seed, 1)

        qd = histogram.NormalizeChord()
        self.assertEqual(qd.m_hat, 1.0)
        self.assertAlmostEqual(qd.GetMeanChord(), 4.0 / 3.0, delta=0.01)
        self.assertAlmostEqual(qd.GetIntegral(), 1.0)
        self.assertEqual(qd.GetNegativeBins().size, 0)

        report = estimators.ChordEstimate(qd, self._kernel, self._sphere)
        self.assertWithinStandardErrors(report, self._expected)
        self.assertLessEqual(report.alternatives['S-over-4']['z'], 4.0)

        oracle_report = QuasiChordLib.RunOracleRadial(
            self._sphere, self._sphere, self._kernel, 200000, seed=1)
        self.assertReportsAgree(report, oracle_report)

    def testRayHistogram(self):
        '''Tests the BuildRayHistogram function and the ray estimates.'''
        histogram = QuasiChordLib.BuildRayHistogram(
            self._sphere, 200000, 160, l_max=2.5, seed=2)
        self.assertEqual(histogram.number_of_lines, 200000)

        qd = histogram.NormalizeRay()
        self.assertAlmostEqual(qd.mean_length, 0.75, delta=0.01)
        self.assertFalse(histogram.counts[128:].any())

        report = estimators.RayEstimate(qd, self._kernel, self._sphere)
        self.assertWithinStandardErrors(report, self._expected)

        report = estimators.RayDerivativeEstimate(qd, self._kernel, self._sphere)
        self.assertWithinStandardErrors(report, self._expected)

    def testDerivativeChain(self):
        '''Tests that the ray density slope reproduces the chord density.'''
        chord_qd = QuasiChordLib.BuildChordHistogram(
            self._sphere, 200000, 40, l_max=2.5, seed=11).NormalizeChord()
        ray_qd = QuasiChordLib.BuildRayHistogram(
            self._sphere, 200000, 40, l_max=2.5, seed=12).NormalizeRay()

        mean_chord = chord_qd.GetMeanChord()
        derived = -mean_chord * ray_qd.FiniteDifferenceDerivative(zero_beyond=True)
        stderr = np.hypot(
            mean_chord * ray_qd.FiniteDifferenceStandardError(), chord_qd.stderr)

        # Bin 31 ends on the diameter, where the chord density jumps to 0.
        difference = np.abs(derived - chord_qd.values)[:31]
        self.assertTrue(np.all(difference <= 5.0 * stderr[:31]))

    def testDistanceHistogram(self):
        '''Tests the BuildDistanceHistogram function within one body.'''
        histogram = QuasiChordLib.BuildDistanceHistogram(
            self._sphere, 200000, 64, seed=13)
        self.assertEqual(histogram.number_of_pairs, 200000)

        report = estimators.DdEstimate(histogram, self._kernel, self._sphere)
        self.assertWithinStandardErrors(report, self._expected)

    def testWorkers(self):
        '''Tests that the histogram does not depend on the number of workers.'''
        first = QuasiChordLib.BuildChordHistogram(
            self._sphere, 5000, 64, seed=3, workers=1, n_slots=4)
        second = QuasiChordLib.BuildChordHistogram(
            self._sphere, 5000, 64, seed=3, workers=2, n_slots=4)
        self.assertEqual(first.counts.tolist(), second.counts.tolist())
        self.assertEqual(first.slot_counts.tolist(), second.slot_counts.tolist())

        third = QuasiChordLib.BuildChordHistogram(
            self._sphere, 5000, 64, seed=4, workers=1, n_slots=4)
        self.assertNotEqual(first.counts.tolist(), third.counts.tolist())


class TwoBodyTest(test_lib.BaseTestCase):
    '''Tests the pair integrals of two separated spheres.'''

    def setUp(self):
        '''Sets up the needed objects used throughout the test.'''
        self._first = geometry.Sphere((-2.0, 0.0, 0.0), 1.0, label='lobe1')
        self._second = geometry.Sphere((2.0, 0.0, 0.0), 1.0, label='lobe2')
        self._zone_set = multibody.ZoneSet([self._first, self._second])
        self._kernel = kernels.ExponentialKernel(0.5)

    def _GetPairwiseOracle(self):
        return QuasiChordLib.RunOraclePairwise(
            self._first, self._second, self._kernel, 200000, seed=7)

    def testRunOraclePairwise(self):
        '''Tests that one chunk of the pairwise oracle equals the single-stream oracle.'''
        report = QuasiChordLib.RunOraclePairwise(
            self._first, self._second, self._kernel, 20000, seed=3, n_slots=1)
        single_report = estimators.OraclePairwise(
            self._first, self._second, self._kernel, 20000,
            sampling.RngStream(3, 0, 'oracle-pairwise'))
        self.assertEqual(report.n_samples, single_report.n_samples)
        self.assertAlmostEqual(
            report.value, single_report.value, delta=1e-12 * single_report.value)

    def testChordMatrix(self):
        '''Tests the BuildChordMatrix function against the oracles.'''
        l_max = QuasiChordLib.GetDefaultLength(self._zone_set.GetBoundingSphere())
        matrix = QuasiChordLib.BuildChordMatrix(
            self._zone_set, 400000, 256, l_max=l_max, seed=5)
        np.testing.assert_array_equal(matrix.GetUnionCounts(), matrix.union.counts)

        pair_report = multibody.PairIntegralChord(matrix, self._kernel, 0, 1)
        self.assertEqual(pair_report.label, 'A[lobe1,lobe2]')
        self.assertReportsAgree(pair_report, self._GetPairwiseOracle())

        radial_report = QuasiChordLib.RunOracleRadial(
            self._first, self._second, self._kernel, 400000, seed=7)
        self.assertReportsAgree(pair_report, radial_report)

        union_report = estimators.ChordEstimate(
            QuasiChordLib.BuildChordHistogram(
                self._zone_set.GetUnion(), 400000, 256, l_max=l_max, seed=5,
                bounding_sphere=self._zone_set.GetBoundingSphere()).NormalizeChord(),
            self._kernel, self._zone_set.GetUnion())
        total = (
            multibody.PairIntegralChord(matrix, self._kernel, 0, 0).value +
            multibody.PairIntegralChord(matrix, self._kernel, 1, 1).value +
            2.0 * pair_report.value)
        self.assertAlmostEqual(total, union_report.value, delta=1e-10 * union_report.value)

    def testRayMatrix(self):
        '''Tests the BuildRayMatrix function against the pairwise oracle.'''
        matrix = QuasiChordLib.BuildRayMatrix(self._zone_set, 200000, 256, seed=6)
        self.assertEqual(matrix.union.number_of_lines, 200000)

        report = multibody.PairIntegralRay(
            matrix, self._kernel, 'lobe1', 'lobe2', symmetrize=True)
        self.assertReportsAgree(report, self._GetPairwiseOracle())

    def testDistanceHistogram(self):
        '''Tests the BuildDistanceHistogram function between two bodies.'''
        histogram = QuasiChordLib.BuildDistanceHistogram(
            self._first, 200000, 256, seed=8, target=self._second)
        self.assertEqual(histogram.number_of_pairs, 200000)
        self.assertAlmostEqual(histogram.target_volume, self._second.GetVolume())

        report = estimators.DdEstimate(histogram, self._kernel)
        self.assertReportsAgree(report, self._GetPairwiseOracle())

    def testSubtractionIdentity(self):
        '''Tests the RunSubtractionIdentityCheck function.'''
        pair_report, identity_report = QuasiChordLib.RunSubtractionIdentityCheck(
            self._first, self._second, self._kernel, 200000, 256, seed=9)
        self.assertEqual(identity_report.method, 'identity')
        self.assertEqual(identity_report.metadata['pair_value'], pair_report.value)
        self.assertLessEqual(identity_report.metadata['z'], 4.0)


class OverlapTest(test_lib.BaseTestCase):
    '''Tests the pair integral of overlapping spheres.'''

    def testRunOverlapPlan(self):
        '''Tests the RunOverlapPlan function against the radial oracle.'''
        first = geometry.Sphere((-0.5, 0.0, 0.0), 1.0, label='first')
        second = geometry.Sphere((0.5, 0.0, 0.0), 1.0, label='second')
        kernel = kernels.ExponentialKernel(1.0)

        report = QuasiChordLib.RunOverlapPlan(first, second, kernel, 100000, 256, seed=10)
        self.assertEqual(report.method, 'overlap-decomposition')
        self.assertEqual(report.label, 'A[first,second]')
        self.assertTrue(report.metadata['overlapping'])

        oracle_report = QuasiChordLib.RunOracleRadial(first, second, kernel, 400000, seed=10)
        self.assertReportsAgree(report, oracle_report)

        with self.assertRaises(errors.UnsupportedConfigurationError):
            QuasiChordLib.RunOraclePairwise(first, second, kernel, 1000)


class NonconvexTest(test_lib.BaseTestCase):
    '''Tests the signed histograms on the union of two separated spheres.'''

    def setUp(self):
        '''Sets up the needed objects used throughout the test.'''
        path = self._GetTestFilePath(['two_lobe.json'])
        self._SkipIfPathNotExists(path)
        scene = scene_file.SceneFile(path)
        self.assertTrue(scene.Parse())
        self._union = scene.zone_set.GetUnion()
        self._bounding_sphere = scene.zone_set.GetBoundingSphere()
        self._l_max = QuasiChordLib.GetDefaultLength(self._bounding_sphere)

    def _GetChordDensity(self, n_bins, seed):
        return QuasiChordLib.BuildChordHistogram(
            self._union, 1000000, n_bins, l_max=self._l_max, seed=seed,
            bounding_sphere=self._bounding_sphere).NormalizeChord()

    def _GetRayDensity(self, n_bins, seed):
        return QuasiChordLib.BuildRayHistogram(
            self._union, 1000000, n_bins, l_max=self._l_max, seed=seed).NormalizeRay()

    def testNegativeBins(self):
        '''Tests the mean chord, m_hat and the negative bins.'''
        chord_qd = self._GetChordDensity(128, 21)
        self.assertLess(abs(chord_qd.GetMeanChord() / (4.0 / 3.0) - 1.0), 0.005)
        self.assertGreater(chord_qd.m_hat, 1.0)
        self.assertLess(chord_qd.m_hat, 2.0)
        self.assertGreater(chord_qd.GetNegativeBins(3.0).size, 0)

        ray_qd = self._GetRayDensity(128, 22)
        self.assertGreater(ray_qd.GetNegativeBins(3.0).size, 0)

    def testDerivativeChain(self):
        '''Tests that the ray density slope reproduces the chord density.'''
        chord_qd = self._GetChordDensity(256, 23)
        ray_qd = self._GetRayDensity(256, 24)

        mean_chord = chord_qd.GetMeanChord()
        derived = -mean_chord * ray_qd.FiniteDifferenceDerivative(zero_beyond=True)
        stderr = np.hypot(
            mean_chord * ray_qd.FiniteDifferenceStandardError(), chord_qd.stderr)

        # Bins next to the jumps of the densities fall outside.
        occupied = (chord_qd.histogram.counts != 0) | (ray_qd.histogram.counts != 0)
        agree = np.abs(derived - chord_qd.values) <= 5.0 * stderr
        self.assertGreaterEqual(float(agree[occupied].mean()), 0.95)


class ConcordanceTest(test_lib.BaseTestCase):
    '''Tests that the chord, ray, dd and oracle estimates agree.'''

    _N_SAMPLES = 200000

    def _CheckConcordance(self, body, bounding_sphere=None, seed=0):
        kernel = kernels.ExponentialKernel(1.0)
        chord_report = estimators.ChordEstimate(
            QuasiChordLib.BuildChordHistogram(
                body, self._N_SAMPLES, 256, seed=seed,
                bounding_sphere=bounding_sphere).NormalizeChord(),
            kernel, body)
        ray_report = estimators.RayEstimate(
            QuasiChordLib.BuildRayHistogram(
                body, self._N_SAMPLES, 256, seed=seed + 1).NormalizeRay(),
            kernel, body)
        dd_report = estimators.DdEstimate(
            QuasiChordLib.BuildDistanceHistogram(
                body, self._N_SAMPLES, 64, seed=seed + 2),
            kernel, body)
        oracle_report = QuasiChordLib.RunOracleRadial(
            body, body, kernel, self._N_SAMPLES, seed=seed + 3)

        reports = [chord_report, ray_report, dd_report, oracle_report]
        for index, first in enumerate(reports):
            for second in reports[index + 1:]:
                self.assertReportsAgree(first, second)

        if 'S-over-4' in chord_report.alternatives:
            self.assertLessEqual(chord_report.alternatives['S-over-4']['z'], 4.0)
        return chord_report

    def testCube(self):
        '''Tests the estimates on the unit cube.'''
        cube = geometry.Box((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
        report = self._CheckConcordance(cube, seed=30)
        self.assertIn('S-over-4', report.alternatives)

        qd = QuasiChordLib.BuildChordHistogram(cube, 1000000, 256, seed=34).NormalizeChord()
        self.assertLess(abs(qd.GetMeanChord() / (2.0 / 3.0) - 1.0), 0.005)

    def testTwoLobeUnion(self):
        '''Tests the estimates on the union of two separated spheres.'''
        path = self._GetTestFilePath(['two_lobe.json'])
        self._SkipIfPathNotExists(path)
        scene = scene_file.SceneFile(path)
        self.assertTrue(scene.Parse())

        report = self._CheckConcordance(
            scene.zone_set.GetUnion(),
            bounding_sphere=scene.zone_set.GetBoundingSphere(), seed=40)
        self.assertIn('S-over-4', report.alternatives)

    def testBoxNotch(self):
        '''Tests the estimates on a box with a notch cut out.'''
        path = self._GetTestFilePath(['box_notch.json'])
        self._SkipIfPathNotExists(path)
        scene = scene_file.SceneFile(path)
        self.assertTrue(scene.Parse())

        self._CheckConcordance(scene.zone_set.GetUnion(), seed=50)


if __name__ == '__main__':
    unittest.main()
