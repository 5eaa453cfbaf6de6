# -*- coding: utf-8 -*-
'''Signed length histograms and the quasi-probability densities built on them.

Ray mode: the k-th crossing of a ray from an interior point (1-based) adds +1
to its bin for odd k and -1 for even k.

Chord mode: for the crossings x_0 < ... < x_2n-1 of a line, every pair j < k
adds (-1)**(k - j + 1) to the bin of x_k - x_j, so a line nets n counts.

Counts are signed 64-bit integers; densities appear only at normalization.
'''

import math

import numpy as np

from QuasiChord import errors
from QuasiChord import logger


def EnumerateSignedPairs(crossings):
    '''Enumerates the signed pair lengths of batches of crossing rows.

    Zero-length pairs, from tangencies or touching zones, are skipped.

    Args:
      crossings (numpy.ndarray): (N, K) sorted crossings padded with +inf.

    Returns:
      tuple[numpy.ndarray, ...]: rows, first column j, second column k,
          lengths and signs of all pairs with positive length.
    '''
    counts = np.isfinite(crossings).sum(axis=1)
    rows, firsts, seconds, lengths, signs = [], [], [], [], []
    for second in range(1, crossings.shape[1]):
        active = np.nonzero(counts > second)[0]
        if not active.size:
            break
        sign = 1.0 if (second - 1) % 2 == 0 else -1.0
        for first in range(second):
            pair_lengths = crossings[active, second] - crossings[active, first]
            positive = pair_lengths > 0
            rows.append(active[positive])
            firsts.append(np.full(np.count_nonzero(positive), first, dtype=np.int64))
            seconds.append(np.full(np.count_nonzero(positive), second, dtype=np.int64))
            lengths.append(pair_lengths[positive])
            signs.append(np.full(np.count_nonzero(positive), sign))
            sign = -sign

    if not rows:
        empty = np.zeros(0)
        return (empty.astype(np.int64), empty.astype(np.int64),
                empty.astype(np.int64), empty, empty)
    return (np.concatenate(rows), np.concatenate(firsts), np.concatenate(seconds),
            np.concatenate(lengths), np.concatenate(signs))


def ChordLengths(crossings):
    '''Returns (N, K/2) in-body interval lengths, 0 for padding.'''
    with np.errstate(invalid='ignore'):
        lengths = crossings[:, 1::2] - crossings[:, 0::2]
    return np.where(np.isfinite(lengths), lengths, 0.0)


def JackknifeStandardError(statistic, slot_weights, *slot_arrays):
    '''Delete-one-slot jackknife standard error of a statistic of slot totals.

    Args:
      statistic (callable): function taking the totals of each slot array.
      slot_weights (numpy.ndarray): per-slot sample counts, empty slots are
          left out.
      slot_arrays (numpy.ndarray): arrays whose first axis indexes slots.

    Returns:
      float: standard error or None with fewer than two non-empty slots.
    '''
    used = np.nonzero(np.asarray(slot_weights) > 0)[0]
    if used.size < 2:
        return None
    totals = [array.sum(axis=0) for array in slot_arrays]
    replicates = np.array([
        statistic(*[total - array[slot] for total, array in zip(totals, slot_arrays)])
        for slot in used], dtype=np.float64)
    deviations = replicates - replicates.mean()
    return math.sqrt((used.size - 1) / used.size * float(np.dot(deviations, deviations)))


class SignedHistogram(object):
    '''Signed bin counts with line and chord counters.

    Modes: chord (signed pairs), ray (signed crossings), mcd (every interval
    one chord), ocd (per-line total in-body length) and dd (unsigned point
    pair distances).

    Attributes:
      counts (numpy.ndarray): signed count per bin.
      sum_squares (numpy.ndarray): per bin, sum over lines of the squared
          net contribution of the line.
      number_of_lines (int): contributing lines or rays.
      number_of_chords (int): sum of net per-line contributions.
      signed_length_sum (float): sum of sign times exact length.
      slot_counts (numpy.ndarray): counts per replicate slot.
    '''

    MODES = ('chord', 'ray', 'mcd', 'ocd', 'dd')

    def __init__(self, n_bins, l_max, mode='chord', n_slots=32):
        if mode not in self.MODES:
            raise ValueError('Unsupported mode {0!s}'.format(mode))
        if n_bins < 2:
            raise ValueError('n_bins must be >= 2')
        if not l_max > 0:
            raise ValueError('l_max must be positive')
        super(SignedHistogram, self).__init__()
        self.mode = mode
        self.n_bins = int(n_bins)
        self.l_max = float(l_max)
        self.n_slots = int(n_slots)
        self.bin_width = self.l_max / self.n_bins
        self.edges = np.linspace(0.0, self.l_max, self.n_bins + 1)
        self.counts = np.zeros(self.n_bins, dtype=np.int64)
        self.sum_squares = np.zeros(self.n_bins, dtype=np.int64)
        self.number_of_lines = 0
        self.number_of_chords = 0
        self.signed_length_sum = 0.0
        self.slot_counts = np.zeros((self.n_slots, self.n_bins), dtype=np.int64)
        self.slot_lines = np.zeros(self.n_slots, dtype=np.int64)
        self.slot_chords = np.zeros(self.n_slots, dtype=np.int64)
        self.seed = None
        self.verify = False

    def _Accumulate(self, rows, lengths, signs, slot):
        '''Adds signed length contributions.

        Args:
          rows (numpy.ndarray): line index of each contribution.
          lengths (numpy.ndarray): lengths.
          signs (numpy.ndarray): +1.0 or -1.0 per contribution.
          slot (int): replicate slot.

        Returns:
          int: net count added.
        '''
        if not lengths.size:
            return 0
        bins = self.BinIndices(lengths)
        delta = np.rint(np.bincount(
            bins, weights=signs, minlength=self.n_bins)).astype(np.int64)
        self.counts += delta
        self.slot_counts[slot % self.n_slots] += delta

        keys = rows.astype(np.int64) * self.n_bins + bins
        unique_keys, inverse = np.unique(keys, return_inverse=True)
        per_line = np.bincount(inverse.ravel(), weights=signs)
        self.sum_squares += np.rint(np.bincount(
            unique_keys % self.n_bins, weights=per_line * per_line,
            minlength=self.n_bins)).astype(np.int64)
        self.signed_length_sum += float(np.dot(signs, lengths))
        return int(delta.sum())

    def _AddCounters(self, lines, chords, slot):
        self.number_of_lines += int(lines)
        self.number_of_chords += int(chords)
        self.slot_lines[slot % self.n_slots] += int(lines)
        self.slot_chords[slot % self.n_slots] += int(chords)

    def _VerifyLengthIdentity(self, crossings, rows, lengths, signs):
        '''Checks that each line's signed pair lengths sum to its chord lengths.

        Raises:
          InternalError: if the identity is violated.
        '''
        signed = np.bincount(rows, weights=signs * lengths, minlength=len(crossings))
        expected = ChordLengths(crossings).sum(axis=1)
        scale = max(1.0, self.l_max) * crossings.shape[1] ** 2
        bad = np.nonzero(np.abs(signed - expected) > 1e-9 * scale)[0]
        if bad.size:
            raise errors.InternalError(
                'Signed length sum {0:.17g} differs from chord length sum '
                '{1:.17g} on line {2:d}'.format(
                    signed[bad[0]], expected[bad[0]], int(bad[0])))

    def BinIndices(self, lengths):
        '''Returns floor(l / bin width), lengths equal to l_max in the last bin.

        Raises:
          HistogramOverflowError: if a length exceeds l_max.
        '''
        lengths = np.asarray(lengths, dtype=np.float64)
        if lengths.size and float(lengths.max()) > self.l_max:
            raise errors.HistogramOverflowError(
                'Length {0:.17g} exceeds l_max {1:.17g}'.format(
                    float(lengths.max()), self.l_max))
        indices = np.floor(lengths / self.bin_width).astype(np.int64)
        return np.minimum(indices, self.n_bins - 1)

    def CreateEmpty(self):
        '''Returns an empty histogram with the same binning.'''
        empty = SignedHistogram(self.n_bins, self.l_max, self.mode, self.n_slots)
        empty.seed = self.seed
        return empty

    def GetMidpoints(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def IsCompatible(self, other):
        return (self.mode == other.mode and self.n_bins == other.n_bins and
                self.l_max == other.l_max and self.n_slots == other.n_slots)

    def Merge(self, other):
        '''Adds the counts and counters of another histogram.

        Raises:
          ValueError: if the histograms differ in mode or binning.
        '''
        if not self.IsCompatible(other):
            raise ValueError('Incompatible histograms')
        self.counts += other.counts
        self.sum_squares += other.sum_squares
        self.number_of_lines += other.number_of_lines
        self.number_of_chords += other.number_of_chords
        self.signed_length_sum += other.signed_length_sum
        self.slot_counts += other.slot_counts
        self.slot_lines += other.slot_lines
        self.slot_chords += other.slot_chords

    def RecordLinesBatch(self, crossings, slot=0):
        '''Records the crossings of a batch of lines.

        Args:
          crossings (numpy.ndarray): (N, K) sorted crossings padded with +inf.
          slot (int): replicate slot.
        '''
        if self.mode == 'ray':
            raise ValueError('Ray histograms record rays')
        chord_lengths = ChordLengths(crossings)
        hit = (chord_lengths > 0).any(axis=1)

        if self.mode == 'chord':
            rows, _, _, lengths, signs = EnumerateSignedPairs(crossings)
            if self.verify:
                self._VerifyLengthIdentity(crossings, rows, lengths, signs)
        elif self.mode == 'mcd':
            rows, columns = np.nonzero(chord_lengths > 0)
            lengths = chord_lengths[rows, columns]
            signs = np.ones(lengths.size)
        else:
            rows = np.nonzero(hit)[0]
            lengths = chord_lengths[rows].sum(axis=1)
            signs = np.ones(lengths.size)

        net = self._Accumulate(rows, lengths, signs, slot)
        self._AddCounters(np.count_nonzero(hit), net, slot)

    def RecordRaysBatch(self, crossings, slot=0):
        '''Records the positive crossings of a batch of rays.

        Args:
          crossings (numpy.ndarray): (N, K) sorted positive crossings padded
              with +inf, an odd number per row.
          slot (int): replicate slot.

        Raises:
          InternalError: if a row has an even number of crossings or a
              non-positive one.
        '''
        if self.mode != 'ray':
            raise ValueError('Only ray histograms record rays')
        finite = np.isfinite(crossings)
        if np.any(finite.sum(axis=1) % 2 == 0):
            raise errors.InternalError('Ray with an even number of crossings')
        rows, columns = np.nonzero(finite)
        lengths = crossings[rows, columns]
        if lengths.size and float(lengths.min()) <= 0:
            raise errors.InternalError('Ray crossing at a non-positive distance')
        signs = np.where(columns % 2 == 0, 1.0, -1.0)
        net = self._Accumulate(rows, lengths, signs, slot)
        self._AddCounters(len(crossings), net, slot)

    def RecordLineChords(self, crossings, slot=0):
        '''Records the crossings of one line.

        Args:
          crossings (CrossingList|list[float]): even number of sorted crossings.
        '''
        params = np.asarray(getattr(crossings, 'params', crossings), dtype=np.float64)
        if params.size < 2 or params.size % 2:
            raise ValueError('A line needs an even, non-zero number of crossings')
        if np.any(np.diff(params) < 0):
            raise ValueError('Crossings are not sorted')
        self.RecordLinesBatch(params[np.newaxis, :], slot=slot)

    def RecordRay(self, crossings, slot=0):
        '''Records the positive crossings of one ray.

        Args:
          crossings (list[float]): odd number of sorted positive distances.
        '''
        params = np.asarray(crossings, dtype=np.float64)
        if params.size % 2 == 0:
            raise ValueError('A ray from inside has an odd number of crossings')
        if np.any(np.diff(params) < 0):
            raise ValueError('Crossings are not sorted')
        self.RecordRaysBatch(params[np.newaxis, :], slot=slot)

    def _Normalize(self, total):
        if total <= 0:
            raise errors.NoDataError(
                'Empty {0:s} histogram cannot be normalized'.format(self.mode))
        scale = 1.0 / (total * self.bin_width)
        values = self.counts * scale
        lines = max(self.number_of_lines, 1)
        spread = np.maximum(
            self.sum_squares - self.counts.astype(np.float64) ** 2 / lines, 0.0)
        stderr = np.sqrt(spread) * scale
        mean_length = float(np.dot(self.counts, self.GetMidpoints())) / total
        return values, stderr, mean_length

    def NormalizeChord(self):
        '''Returns the chord quasi-density, counts / (N_chords bin width).

        Raises:
          NoDataError: if no chords were recorded.
        '''
        if self.mode not in ('chord', 'mcd', 'ocd'):
            raise ValueError('Not a chord histogram')
        total = self.number_of_chords
        values, stderr, mean_length = self._Normalize(total)
        m_hat = total / self.number_of_lines
        return QuasiDensity(self, values, stderr, m_hat, mean_length, total)

    def NormalizeRay(self):
        '''Returns the ray quasi-density, counts / (N_lines bin width).

        Raises:
          NoDataError: if no rays were recorded.
        '''
        if self.mode != 'ray':
            raise ValueError('Not a ray histogram')
        total = self.number_of_lines
        values, stderr, mean_length = self._Normalize(total)
        return QuasiDensity(self, values, stderr, 1.0, mean_length, total)

    def Normalize(self):
        if self.mode == 'ray':
            return self.NormalizeRay()
        return self.NormalizeChord()


class QuasiDensity(object):
    '''Normalized signed density over the bins of a histogram.'''

    def __init__(self, histogram, values, stderr, m_hat, mean_length, normalization):
        super(QuasiDensity, self).__init__()
        self.histogram = histogram
        self.mode = histogram.mode
        self.edges = histogram.edges
        self.bin_width = histogram.bin_width
        self.midpoints = histogram.GetMidpoints()
        self.values = values
        self.stderr = stderr
        self.m_hat = m_hat
        self.mean_length = mean_length
        self.normalization = normalization

    def GetIntegral(self):
        return float(np.sum(self.values) * self.bin_width)

    def GetMeanChord(self):
        '''Mean chord length, the multi-chord mean of the same lines.'''
        return self.mean_length

    def GetNegativeBins(self, threshold=3.0):
        '''Returns indices of bins below -threshold standard errors.'''
        return np.nonzero(self.values < -threshold * self.stderr)[0]

    def FiniteDifferenceDerivative(self, zero_beyond=False):
        '''Central differences on the bin midpoints, one-sided at the ends.

        Args:
          zero_beyond (Optional[bool]): True to take the density as 0 past
              l_max, so the last bin uses a central difference too.
        '''
        if zero_beyond:
            return np.gradient(np.append(self.values, 0.0), self.bin_width)[:-1]
        return np.gradient(self.values, self.bin_width)

    def FiniteDifferenceStandardError(self):
        '''Standard error of FiniteDifferenceDerivative, bins independent.'''
        variance = self.stderr ** 2
        result = np.empty_like(self.stderr)
        result[1:-1] = np.sqrt(variance[2:] + variance[:-2]) / (2.0 * self.bin_width)
        result[0] = math.sqrt(variance[1] + variance[0]) / self.bin_width
        result[-1] = math.sqrt(variance[-1] + variance[-2]) / self.bin_width
        return result


def MergeHistograms(histograms):
    '''Merges histograms in order into a new histogram.'''
    histograms = list(histograms)
    if not histograms:
        raise ValueError('Nothing to merge')
    merged = histograms[0].CreateEmpty()
    for histogram in histograms:
        merged.Merge(histogram)
    logger.debug('Merged {0:d} {1:s} histograms: {2:d} lines, {3:d} chords'.format(
        len(histograms), merged.mode, merged.number_of_lines, merged.number_of_chords))
    return merged
