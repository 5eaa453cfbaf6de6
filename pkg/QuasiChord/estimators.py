# -*- coding: utf-8 -*-
'''Estimates of the point-kernel integral D(phi) and their standard errors.

Chord method:    D = s * sum(q_mu * I2 * dl),   s = V / <l> or S / 4
Ray method:      D = V * sum(q_rho * I1 * dl)
Distance method: D = V_src V_tgt * sum(dd * phi / (4 pi l**2) * dl)
Radial oracle:   mean of V_src l_max phi(R) [r1 + R w in target]
Pairwise oracle: mean of V_src V_tgt phi(R) / (4 pi R**2)

Histogram estimates get a delete-one-slot jackknife standard error by
default; error_model='diagonal' propagates the per-bin standard errors in
quadrature instead, ignoring bin covariance.
'''

import math

import numpy as np

from QuasiChord import errors
from QuasiChord import geometry
from QuasiChord import logger
from QuasiChord import quasidist
from QuasiChord import resources
from QuasiChord import sampling


ERROR_MODELS = ('jackknife', 'diagonal')

_ORACLE_BATCH = 1 << 17


class DistanceHistogram(quasidist.SignedHistogram):
    '''Non-negative counts of distances between pairs of uniform points.

    Attributes:
      source_volume (float): volume of the body of the first points.
      target_volume (float): volume of the body of the second points.
      volume_relative_error (float): relative standard error of the volume
          product.
    '''

    def __init__(self, n_bins, l_max, n_slots=32):
        super(DistanceHistogram, self).__init__(n_bins, l_max, mode='dd', n_slots=n_slots)
        self.source_volume = None
        self.target_volume = None
        self.volume_relative_error = 0.0

    @property
    def number_of_pairs(self):
        return self.number_of_lines

    def CreateEmpty(self):
        empty = DistanceHistogram(self.n_bins, self.l_max, self.n_slots)
        empty.seed = self.seed
        empty.source_volume = self.source_volume
        empty.target_volume = self.target_volume
        empty.volume_relative_error = self.volume_relative_error
        return empty

    def RecordDistances(self, distances, slot=0):
        '''Records the distances of a batch of point pairs.'''
        distances = np.asarray(distances, dtype=np.float64)
        net = self._Accumulate(
            np.arange(distances.size), distances, np.ones(distances.size), slot)
        self._AddCounters(distances.size, net, slot)

    def NormalizeDistances(self):
        '''Returns the distance density, counts / (N_pairs bin width).

        Raises:
          NoDataError: if no pairs were recorded.
        '''
        values, stderr, mean_length = self._Normalize(self.number_of_pairs)
        return quasidist.QuasiDensity(
            self, values, stderr, 1.0, mean_length, self.number_of_pairs)


class SampleMoments(object):
    '''Running count, sum and sum of squares of oracle samples.'''

    def __init__(self):
        super(SampleMoments, self).__init__()
        self.count = 0
        self.total = 0.0
        self.total_squares = 0.0

    def Add(self, values):
        values = np.asarray(values, dtype=np.float64)
        self.count += values.size
        self.total += float(values.sum())
        self.total_squares += float(np.dot(values, values))

    def Merge(self, other):
        self.count += other.count
        self.total += other.total
        self.total_squares += other.total_squares

    def GetMean(self):
        if not self.count:
            raise errors.NoDataError('No oracle samples')
        return self.total / self.count

    def GetStandardError(self):
        if self.count < 2:
            return 0.0
        mean = self.GetMean()
        spread = max(self.total_squares - self.count * mean * mean, 0.0)
        return math.sqrt(spread / (self.count * (self.count - 1)))


def AddRelativeError(value, stderr, relative_error):
    return math.hypot(stderr, value * relative_error)


def GetVolumeRelativeError(body):
    return body.GetVolumeStandardError() / body.GetVolume()


def HistogramStandardError(qd, bin_weights, statistic, slot_arrays, error_model):
    '''Standard error of a histogram-weighted sum.

    Args:
      qd (QuasiDensity): density the estimate is built from.
      bin_weights (numpy.ndarray): d(estimate) / d(density) per bin.
      statistic (callable): estimate as a function of slot totals.
      slot_arrays (list[numpy.ndarray]): slot arrays passed to the statistic.
      error_model (str): jackknife or diagonal.
    '''
    if error_model not in ERROR_MODELS:
        raise ValueError('Unsupported error model {0!s}'.format(error_model))
    if error_model == 'jackknife':
        with np.errstate(divide='ignore', invalid='ignore'):
            stderr = quasidist.JackknifeStandardError(
                statistic, qd.histogram.slot_lines, *slot_arrays)
        if stderr is not None and math.isfinite(stderr):
            return stderr
        logger.debug('Jackknife unavailable, using per-bin quadrature')
    return float(np.sqrt(np.sum((bin_weights * qd.stderr) ** 2)))


def _CheckMode(qd, modes):
    if qd.mode not in modes:
        raise ValueError('Expected a {0:s} density, got {1:s}'.format(
            ' or '.join(modes), qd.mode))


def _Metadata(report, histogram, body, error_model):
    report.metadata.update({
        'n_bins': histogram.n_bins, 'l_max': histogram.l_max,
        'n_slots': histogram.n_slots, 'n_lines': histogram.number_of_lines,
        'n_chords': histogram.number_of_chords, 'error_model': error_model})
    if body is not None:
        report.metadata['volume'] = body.GetVolume()
        report.metadata['absorbed_fraction'] = report.value / body.GetVolume()


def ChordEstimate(qd, kernel, body, error_model='jackknife'):
    '''Estimates D(phi) from a chord quasi-density.

    The primary value uses s = V / <l>; when the body has an analytic surface
    area the S / 4 variant and its discrepancy are reported as alternatives.

    Args:
      qd (QuasiDensity): normalized chord density.
      kernel (Kernel): point kernel.
      body (Body): body the lines were recorded on.
      error_model (Optional[str]): jackknife or diagonal.

    Returns:
      EstimateReport: chord estimate.

    Raises:
      EstimationError: if the mean chord is not positive.
    '''
    _CheckMode(qd, ('chord',))
    mean_chord = qd.GetMeanChord()
    if not mean_chord > 0:
        raise errors.EstimationError(
            'Mean chord {0!s} is not positive'.format(mean_chord))
    histogram = qd.histogram
    volume = body.GetVolume()
    _, _, second = kernel.EvaluateOnBins(qd.edges)
    midpoints = qd.midpoints

    integral = float(np.dot(qd.values, second)) * qd.bin_width
    normalizer = volume / mean_chord
    value = normalizer * integral

    def _Statistic(counts):
        return volume * np.dot(counts, second) / np.dot(counts, midpoints)

    stderr = HistogramStandardError(
        qd, normalizer * second * qd.bin_width, _Statistic,
        [histogram.slot_counts], error_model)
    stderr = AddRelativeError(value, stderr, GetVolumeRelativeError(body))
    report = resources.EstimateReport(
        value, stderr, 'chord', histogram.number_of_lines,
        normalizer_used='V-over-meanl', seed=histogram.seed)
    report.metadata['mean_chord'] = mean_chord
    report.metadata['m_hat'] = qd.m_hat

    area = body.GetSurfaceArea()
    if area is not None:
        quarter_area = 0.25 * area

        def _AreaStatistic(counts, chords):
            return quarter_area * np.dot(counts, second) / chords

        area_value = quarter_area * integral
        area_stderr = HistogramStandardError(
            qd, quarter_area * second * qd.bin_width, _AreaStatistic,
            [histogram.slot_counts, histogram.slot_chords], error_model)
        area_report = resources.EstimateReport(
            area_value, area_stderr, 'chord', histogram.number_of_lines,
            normalizer_used='S-over-4', seed=histogram.seed)
        report.alternatives['S-over-4'] = {
            'value': area_value, 'stderr': area_stderr,
            'z': report.GetZScore(area_report)}

    _Metadata(report, histogram, body, error_model)
    return report


def RayEstimate(qd, kernel, body, error_model='jackknife'):
    '''Estimates D(phi) = V sum(q_rho I1 dl) from a ray quasi-density.'''
    _CheckMode(qd, ('ray',))
    histogram = qd.histogram
    volume = body.GetVolume()
    _, first, _ = kernel.EvaluateOnBins(qd.edges)
    value = volume * float(np.dot(qd.values, first)) * qd.bin_width

    def _Statistic(counts, lines):
        return volume * np.dot(counts, first) / lines

    stderr = HistogramStandardError(
        qd, volume * first * qd.bin_width, _Statistic,
        [histogram.slot_counts, histogram.slot_lines], error_model)
    stderr = AddRelativeError(value, stderr, GetVolumeRelativeError(body))
    report = resources.EstimateReport(
        value, stderr, 'ray', histogram.number_of_lines, normalizer_used='none',
        seed=histogram.seed)
    report.metadata['mean_ray'] = qd.mean_length
    _Metadata(report, histogram, body, error_model)
    return report


def RayDerivativeEstimate(qd, kernel, body, error_model='jackknife'):
    '''Estimates D(phi) = V sum(-q_rho' I2 dl), the integrated-by-parts ray form.

    The density is 0 past l_max, which l_max >= the diameter guarantees.
    '''
    _CheckMode(qd, ('ray',))
    histogram = qd.histogram
    volume = body.GetVolume()
    width = qd.bin_width
    _, _, second = kernel.EvaluateOnBins(qd.edges)
    derivative = qd.FiniteDifferenceDerivative(zero_beyond=True)
    value = -volume * float(np.dot(derivative, second)) * width

    def _Statistic(counts, lines):
        density = counts / (lines * width)
        slope = np.gradient(np.append(density, 0.0), width)[:-1]
        return -volume * np.dot(slope, second) * width

    weights = volume * np.gradient(second)
    stderr = HistogramStandardError(
        qd, weights, _Statistic, [histogram.slot_counts, histogram.slot_lines],
        error_model)
    stderr = AddRelativeError(value, stderr, GetVolumeRelativeError(body))
    report = resources.EstimateReport(
        value, stderr, 'ray-derivative', histogram.number_of_lines,
        normalizer_used='none', seed=histogram.seed)
    _Metadata(report, histogram, body, error_model)
    return report


def _DistanceVolumes(ddh, body):
    if body is not None:
        volume = body.GetVolume()
        return volume, volume, 2.0 * GetVolumeRelativeError(body)
    if ddh.source_volume is None or ddh.target_volume is None:
        raise errors.EstimationError('Distance histogram without body volumes')
    return ddh.source_volume, ddh.target_volume, ddh.volume_relative_error


def _MeanSquaredDistance(qd):
    return qd.midpoints ** 2 + qd.bin_width ** 2 / 12.0


def DdEstimate(ddh, kernel, body=None, error_model='jackknife'):
    '''Estimates D(phi) from a distance histogram.

    Each bin divides by the mean of l**2 over the bin, which is exact for
    dd proportional to l**2 near 0.

    Args:
      ddh (DistanceHistogram): distances of uniform point pairs.
      kernel (Kernel): point kernel.
      body (Optional[Body]): body of both points; the volumes stored in the
          histogram are used when omitted.
      error_model (Optional[str]): jackknife or diagonal.
    '''
    qd = ddh.NormalizeDistances()
    source_volume, target_volume, relative_error = _DistanceVolumes(ddh, body)
    phi = kernel.EvaluateOnBins(qd.edges)[0]
    weights = source_volume * target_volume * phi / (
        4.0 * math.pi * _MeanSquaredDistance(qd))
    value = float(np.dot(qd.values, weights)) * qd.bin_width

    def _Statistic(counts, pairs):
        return np.dot(counts, weights) / pairs

    stderr = HistogramStandardError(
        qd, weights * qd.bin_width, _Statistic,
        [ddh.slot_counts, ddh.slot_lines], error_model)
    stderr = AddRelativeError(value, stderr, relative_error)
    report = resources.EstimateReport(
        value, stderr, 'dd', ddh.number_of_pairs, normalizer_used='none',
        seed=ddh.seed)
    _Metadata(report, ddh, None, error_model)
    report.metadata['absorbed_fraction'] = value / source_volume
    return report


def RecoverAutocorrelation(ddh):
    '''Recovers G(l) = dd(l) V_src V_tgt / (4 pi l**2) per bin.

    Returns:
      tuple[numpy.ndarray, numpy.ndarray]: G and its standard error.
    '''
    qd = ddh.NormalizeDistances()
    source_volume, target_volume, _ = _DistanceVolumes(ddh, None)
    scale = source_volume * target_volume / (4.0 * math.pi * _MeanSquaredDistance(qd))
    return qd.values * scale, qd.stderr * scale


def GetPairLength(source, target):
    '''Returns the diameter of a sphere containing both bodies, times 1.0001.'''
    _, radius = geometry.GetSceneBoundingSphere([source, target])
    return 2.0 * radius * 1.0001


def SampleOracleRadial(source, target, kernel, n, rng, l_max):
    '''Returns n samples of V_src l_max phi(R) [r1 + R w in target].'''
    points = sampling.SamplePointsInBody(source, rng, n)
    directions = sampling.SampleIsotropicDirections(rng, n)
    radii = rng.generator.uniform(0.0, l_max, n)
    inside = target.Contains(points + radii[:, np.newaxis] * directions)
    return source.GetVolume() * l_max * kernel.Phi(radii) * inside


def CheckSeparated(source, target, probe_points=100000, seed=0):
    '''Checks that two bodies are disjoint for the pairwise oracle.

    Raises:
      UnsupportedConfigurationError: if the bodies coincide or overlap.
    '''
    if source is target or source.GetDigest() == target.GetDigest():
        raise errors.UnsupportedConfigurationError(
            'Pairwise oracle refuses self pairs, use the radial oracle')
    if geometry.ProbeOverlap(source, target, probe_points, seed) > 0:
        raise errors.UnsupportedConfigurationError(
            'Bodies overlap, use the radial oracle')
    if not geometry.SpheresApart(source.GetBoundingSphere(), target.GetBoundingSphere()):
        logger.warning(
            'Bounding spheres of the pairwise oracle bodies intersect; the '
            'estimator variance grows without bound as the gap closes')


def SampleOraclePairwise(source, target, kernel, n, rng):
    '''Returns n samples of V_src V_tgt phi(R) / (4 pi R**2).'''
    first = sampling.SamplePointsInBody(source, rng, n)
    second = sampling.SamplePointsInBody(target, rng, n)
    distances = np.linalg.norm(second - first, axis=1)
    return (source.GetVolume() * target.GetVolume() * kernel.Phi(distances) /
            (4.0 * math.pi * distances ** 2))


def OracleReport(moments, method, source, target=None, seed=None, runtime=0.0):
    '''Builds the report of oracle samples, adding volume uncertainty.'''
    value = moments.GetMean()
    relative_error = GetVolumeRelativeError(source)
    if target is not None:
        relative_error = math.hypot(relative_error, GetVolumeRelativeError(target))
    stderr = AddRelativeError(value, moments.GetStandardError(), relative_error)
    report = resources.EstimateReport(
        value, stderr, method, moments.count, normalizer_used='none', seed=seed,
        runtime=runtime)
    report.metadata['absorbed_fraction'] = value / source.GetVolume()
    return report


def OracleMoments(kind, source, target, kernel, n, rng, l_max=None):
    '''Accumulates n radial or pairwise oracle samples from one stream.

    Args:
      kind (str): radial or pairwise.
      l_max (Optional[float]): upper radius of the radial oracle.

    Returns:
      SampleMoments: moments of the samples.
    '''
    moments = SampleMoments()
    remaining = n
    while remaining > 0:
        batch = min(remaining, _ORACLE_BATCH)
        if kind == 'radial':
            moments.Add(SampleOracleRadial(source, target, kernel, batch, rng, l_max))
        else:
            moments.Add(SampleOraclePairwise(source, target, kernel, batch, rng))
        remaining -= batch
    return moments


def RadialOracleReport(moments, source, l_max, seed=None, runtime=0.0):
    '''Builds the oracle-radial report, recording the upper radius.'''
    report = OracleReport(moments, 'oracle-radial', source, seed=seed, runtime=runtime)
    report.metadata['l_max'] = l_max
    return report


def OracleRadial(source, target, kernel, n, rng, l_max=None):
    '''Direct radial-projection estimate of the integral over source and target.

    Args:
      source (Body): body of the first point.
      target (Body): body of the second point, may equal source.
      kernel (Kernel): point kernel.
      n (int): number of samples.
      rng (RngStream): random stream.
      l_max (Optional[float]): upper radius, at least the diameter of both
          bodies together.
    '''
    if l_max is None:
        l_max = GetPairLength(source, target)
    moments = OracleMoments('radial', source, target, kernel, n, rng, l_max)
    return RadialOracleReport(moments, source, l_max, seed=rng.seed)


def OraclePairwise(source, target, kernel, n, rng):
    '''Direct estimate over independent uniform point pairs of disjoint bodies.

    Raises:
      UnsupportedConfigurationError: if the bodies coincide or overlap.
    '''
    CheckSeparated(source, target)
    moments = OracleMoments('pairwise', source, target, kernel, n, rng)
    return OracleReport(moments, 'oracle-pairwise', source, target, seed=rng.seed)
