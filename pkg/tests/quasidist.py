#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Tests for the signed histograms and quasi-densities.'''

from __future__ import unicode_literals

import math
import unittest

import numpy as np

from QuasiChord import errors
from QuasiChord import geometry
from QuasiChord import quasidist
from QuasiChord import resources
from QuasiChord import sampling

from tests import test_lib


class SignedPairsTest(test_lib.BaseTestCase):
    '''Tests for the signed pair enumeration.'''

    def testEnumerateSignedPairs(self):
        '''Tests the EnumerateSignedPairs function.'''
        crossings = np.array([[-3.0, -1.0, 1.0, 3.0]])
        rows, firsts, seconds, lengths, signs = quasidist.EnumerateSignedPairs(crossings)

        self.assertEqual(len(lengths), 6)
        self.assertEqual(rows.tolist(), [0] * 6)
        for first, second, length, sign in zip(firsts, seconds, lengths, signs):
            self.assertEqual(length, crossings[0, second] - crossings[0, first])
            self.assertEqual(sign, (-1) ** (second - first + 1))

        net = {}
        for length, sign in zip(lengths, signs):
            net[length] = net.get(length, 0) + sign
        self.assertEqual(net, {2.0: 3.0, 4.0: -2.0, 6.0: 1.0})

    def testEnumerateSignedPairsTouching(self):
        '''Tests that zero-length pairs are skipped.'''
        crossings = np.array([[0.0, 1.0, 1.0, 2.0]])
        _, _, _, lengths, signs = quasidist.EnumerateSignedPairs(crossings)
        self.assertNotIn(0.0, lengths.tolist())
        self.assertEqual(float(signs[lengths == 1.0].sum()), 0.0)
        self.assertEqual(float(signs[lengths == 2.0].sum()), 1.0)

    def testEnumerateSignedPairsEmpty(self):
        '''Tests the EnumerateSignedPairs function on lines that miss.'''
        crossings = np.full((3, 2), np.inf)
        rows, _, _, lengths, _ = quasidist.EnumerateSignedPairs(crossings)
        self.assertEqual(len(rows), 0)
        self.assertEqual(len(lengths), 0)

    def testChordLengths(self):
        '''Tests the ChordLengths function.'''
        crossings = np.array([[-3.0, -1.0, 1.0, 3.0], [0.0, 0.5, np.inf, np.inf]])
        np.testing.assert_array_equal(
            quasidist.ChordLengths(crossings), [[2.0, 2.0], [0.5, 0.0]])

    def testJackknifeStandardError(self):
        '''Tests the JackknifeStandardError function.'''
        values = np.array([1.0, 2.0, 3.0, 4.0])
        weights = np.ones(4)

        stderr = quasidist.JackknifeStandardError(
            lambda total, lines: total / lines, weights, values, weights)
        self.assertAlmostEqual(stderr, math.sqrt(5.0 / 3.0) / 2.0)

        stderr = quasidist.JackknifeStandardError(
            lambda total, lines: total / lines, np.array([0, 0, 0, 1]), values, weights)
        self.assertIsNone(stderr)


class SignedHistogramTest(test_lib.BaseTestCase):
    '''Tests for the signed histogram.'''

    def testInitialize(self):
        '''Tests the __init__ function.'''
        histogram = quasidist.SignedHistogram(8, 8.0)
        self.assertEqual(histogram.bin_width, 1.0)
        self.assertEqual(histogram.counts.dtype, np.int64)

        with self.assertRaises(ValueError):
            quasidist.SignedHistogram(8, 8.0, mode='cld')

        with self.assertRaises(ValueError):
            quasidist.SignedHistogram(1, 8.0)

        with self.assertRaises(ValueError):
            quasidist.SignedHistogram(8, 0.0)

    def testRecordLineChords(self):
        '''Tests the RecordLineChords function.'''
        histogram = quasidist.SignedHistogram(8, 8.0)
        histogram.verify = True
        histogram.RecordLineChords(resources.CrossingList([-3.0, -1.0, 1.0, 3.0]))

        expected_counts = [0, 0, 3, 0, -2, 0, 1, 0]
        self.assertEqual(histogram.counts.tolist(), expected_counts)
        self.assertEqual(histogram.sum_squares.tolist(), [0, 0, 9, 0, 4, 0, 1, 0])
        self.assertEqual(histogram.number_of_lines, 1)
        self.assertEqual(histogram.number_of_chords, 2)
        self.assertAlmostEqual(histogram.signed_length_sum, 4.0)
        self.assertEqual(histogram.slot_counts[0].tolist(), expected_counts)

        with self.assertRaises(ValueError):
            histogram.RecordLineChords([1.0, 2.0, 3.0])

        with self.assertRaises(ValueError):
            histogram.RecordLineChords([2.0, 1.0])

    def testRecordLineChordsTangent(self):
        '''Tests that a tangent line contributes nothing.'''
        histogram = quasidist.SignedHistogram(8, 8.0)
        histogram.RecordLineChords([0.5, 0.5])
        self.assertEqual(int(np.abs(histogram.counts).sum()), 0)
        self.assertEqual(histogram.number_of_lines, 0)
        self.assertEqual(histogram.number_of_chords, 0)

    def testRecordLinesBatchModes(self):
        '''Tests the RecordLinesBatch function in the mcd and ocd modes.'''
        crossings = np.array([[-3.0, -1.0, 1.0, 3.0]])

        histogram = quasidist.SignedHistogram(8, 8.0, mode='mcd')
        histogram.RecordLinesBatch(crossings)
        self.assertEqual(histogram.counts.tolist(), [0, 0, 2, 0, 0, 0, 0, 0])
        self.assertEqual(histogram.number_of_chords, 2)

        histogram = quasidist.SignedHistogram(8, 8.0, mode='ocd')
        histogram.RecordLinesBatch(crossings)
        self.assertEqual(histogram.counts.tolist(), [0, 0, 0, 0, 1, 0, 0, 0])
        self.assertEqual(histogram.number_of_chords, 1)

        histogram = quasidist.SignedHistogram(8, 8.0, mode='ray')
        with self.assertRaises(ValueError):
            histogram.RecordLinesBatch(crossings)

    def testChordAndMultiChordCounters(self):
        '''Tests that chord and mcd histograms of the same lines share counters.'''
        union = geometry.Union(
            geometry.Sphere((-2.0, 0.0, 0.0), 1.0), geometry.Sphere((2.0, 0.0, 0.0), 1.0))
        rng = sampling.RngStream(3, module='test')
        anchors, directions = sampling.SampleKinematicLines(np.zeros(3), 3.0, rng, 5000)
        crossings = union.IntersectLines(anchors, directions)

        chord = quasidist.SignedHistogram(64, 6.0006, mode='chord')
        chord.verify = True
        chord.RecordLinesBatch(crossings)
        multi_chord = quasidist.SignedHistogram(64, 6.0006, mode='mcd')
        multi_chord.RecordLinesBatch(crossings)

        self.assertGreater(chord.number_of_lines, 0)
        self.assertEqual(chord.number_of_lines, multi_chord.number_of_lines)
        self.assertEqual(chord.number_of_chords, multi_chord.number_of_chords)
        self.assertAlmostEqual(
            chord.signed_length_sum, multi_chord.signed_length_sum, delta=1e-9 * 5000)

    def testVerifyLengthIdentity(self):
        '''Tests the _VerifyLengthIdentity function.'''
        histogram = quasidist.SignedHistogram(8, 8.0)
        crossings = np.array([[0.0, 2.0]])
        histogram._VerifyLengthIdentity(
            crossings, np.array([0]), np.array([2.0]), np.array([1.0]))

        with self.assertRaises(errors.InternalError):
            histogram._VerifyLengthIdentity(
                crossings, np.array([0]), np.array([3.0]), np.array([1.0]))

    def testRecordRay(self):
        '''Tests the RecordRay function.'''
        histogram = quasidist.SignedHistogram(8, 8.0, mode='ray')
        histogram.RecordRay([1.5, 3.5, 5.5])
        self.assertEqual(histogram.counts.tolist(), [0, 1, 0, -1, 0, 1, 0, 0])
        self.assertEqual(histogram.number_of_lines, 1)
        self.assertEqual(histogram.number_of_chords, 1)

        with self.assertRaises(ValueError):
            histogram.RecordRay([1.0, 2.0])

        with self.assertRaises(errors.InternalError):
            histogram.RecordRaysBatch(np.array([[0.0, np.inf]]))

        with self.assertRaises(errors.InternalError):
            histogram.RecordRaysBatch(np.array([[-1.0, 1.0, 2.0]]))

        chord = quasidist.SignedHistogram(8, 8.0)
        with self.assertRaises(ValueError):
            chord.RecordRay([1.0])

    def testBinIndices(self):
        '''Tests the BinIndices function.'''
        histogram = quasidist.SignedHistogram(4, 2.0)
        indices = histogram.BinIndices([0.0, 0.49, 0.5, 2.0])
        self.assertEqual(indices.tolist(), [0, 0, 1, 3])

        with self.assertRaises(errors.HistogramOverflowError):
            histogram.BinIndices([2.5])

    def testMerge(self):
        '''Tests the Merge function.'''
        whole = quasidist.SignedHistogram(8, 8.0, n_slots=4)
        first = whole.CreateEmpty()
        second = whole.CreateEmpty()
        lines = [[-3.0, -1.0, 1.0, 3.0], [0.0, 2.5], [1.0, 2.0, 4.0, 7.0]]
        for index, line in enumerate(lines):
            whole.RecordLineChords(line, slot=index)
            if index < 2:
                first.RecordLineChords(line, slot=index)
            else:
                second.RecordLineChords(line, slot=index)

        merged = quasidist.MergeHistograms([first, second])
        self.assertEqual(merged.counts.tolist(), whole.counts.tolist())
        self.assertEqual(merged.sum_squares.tolist(), whole.sum_squares.tolist())
        self.assertEqual(merged.number_of_lines, whole.number_of_lines)
        self.assertEqual(merged.number_of_chords, whole.number_of_chords)
        self.assertEqual(merged.slot_counts.tolist(), whole.slot_counts.tolist())

        with self.assertRaises(ValueError):
            whole.Merge(quasidist.SignedHistogram(16, 8.0, n_slots=4))

        with self.assertRaises(ValueError):
            quasidist.MergeHistograms([])

    def testNormalize(self):
        '''Tests the NormalizeChord and NormalizeRay functions.'''
        histogram = quasidist.SignedHistogram(8, 8.0)
        with self.assertRaises(errors.NoDataError):
            histogram.NormalizeChord()

        histogram.RecordLineChords([-3.0, -1.0, 1.0, 3.0])
        histogram.RecordLineChords([0.0, 2.5])
        qd = histogram.Normalize()
        self.assertAlmostEqual(qd.GetIntegral(), 1.0)
        self.assertEqual(qd.normalization, 3)
        self.assertAlmostEqual(qd.m_hat, 1.5)
        # Midpoints 2.5, 4.5 and 6.5 weighted 3 + 1, -2 and 1.
        self.assertAlmostEqual(qd.GetMeanChord(), (4 * 2.5 - 2 * 4.5 + 6.5) / 3.0)
        self.assertEqual(qd.GetNegativeBins(threshold=0.0).tolist(), [4])

        with self.assertRaises(ValueError):
            histogram.NormalizeRay()

        rays = quasidist.SignedHistogram(8, 8.0, mode='ray')
        rays.RecordRay([1.5])
        rays.RecordRay([0.5, 1.5, 2.5])
        qd = rays.Normalize()
        self.assertEqual(qd.normalization, 2)
        self.assertAlmostEqual(qd.GetIntegral(), 1.0)
        self.assertEqual(qd.m_hat, 1.0)

        with self.assertRaises(ValueError):
            rays.NormalizeChord()


class QuasiDensityTest(test_lib.BaseTestCase):
    '''Tests for the quasi-density.'''

    def testFiniteDifferenceDerivative(self):
        '''Tests the FiniteDifferenceDerivative function.'''
        histogram = quasidist.SignedHistogram(4, 4.0)
        values = np.array([0.0, 1.0, 4.0, 9.0])
        stderr = np.full(4, 0.5)
        qd = quasidist.QuasiDensity(histogram, values, stderr, 1.0, 0.0, 1)

        np.testing.assert_allclose(qd.FiniteDifferenceDerivative(), [1.0, 2.0, 4.0, 5.0])
        np.testing.assert_allclose(
            qd.FiniteDifferenceDerivative(zero_beyond=True), [1.0, 2.0, 4.0, -2.0])
        expected = [math.sqrt(0.5), 0.5 * math.sqrt(0.5), 0.5 * math.sqrt(0.5), math.sqrt(0.5)]
        np.testing.assert_allclose(qd.FiniteDifferenceStandardError(), expected)


if __name__ == '__main__':
    unittest.main()
