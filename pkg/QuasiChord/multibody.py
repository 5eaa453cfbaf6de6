# -*- coding: utf-8 -*-
'''Histogram matrices over labeled zones and the two-body integrals A_st.

The crossings of all zones along a line are merged into one sorted sequence,
each crossing tagged with its zone. Every signed pair of the merged sequence
goes to the cell of its two zones, so the cells partition the histogram of
the union count for count. Chord matrices keep the upper triangle; ray
matrices keep the full (source, target) matrix.
'''

import collections
import math

import numpy as np

from QuasiChord import errors
from QuasiChord import estimators
from QuasiChord import geometry
from QuasiChord import logger
from QuasiChord import quasidist
from QuasiChord import resources


class ZoneSet(object):
    '''Labeled bodies of a scene with their pairwise overlap flags.

    Attributes:
      bodies (list[Body]): zones in scene order.
      labels (list[str]): unique zone labels.
      overlaps (numpy.ndarray): (m, m) flags of zone pairs sharing volume.
    '''

    def __init__(self, bodies, probe=True, probe_points=100000, seed=0):
        '''Initializes a zone set.

        Args:
          bodies (list[Body]): labeled bodies.
          probe (Optional[bool]): True to probe zone pairs for overlap.
          probe_points (Optional[int]): points per overlap probe.
          seed (Optional[int]): seed of the overlap probes.

        Raises:
          SceneFormatError: if a label is missing or repeated.
        '''
        super(ZoneSet, self).__init__()
        bodies = list(bodies)
        if not bodies:
            raise errors.SceneFormatError('Scene has no bodies', field='bodies')
        labels = [body.label for body in bodies]
        for index, label in enumerate(labels):
            if not label:
                raise errors.SceneFormatError(
                    'Body has no label', field='bodies[{0:d}].label'.format(index))
            if label in labels[:index]:
                raise errors.SceneFormatError(
                    'Duplicate label {0:s}'.format(label),
                    field='bodies[{0:d}].label'.format(index))
        self.bodies = bodies
        self.labels = labels
        self.overlaps = np.zeros((len(bodies), len(bodies)), dtype=bool)
        self._union = None
        if probe:
            for first in range(len(bodies)):
                for second in range(first + 1, len(bodies)):
                    shared = geometry.ProbeOverlap(
                        bodies[first], bodies[second], probe_points, seed)
                    if shared > 0:
                        logger.info('Zones {0:s} and {1:s} overlap, shared volume '
                                    '{2:.4g}'.format(labels[first], labels[second], shared))
                    self.overlaps[first, second] = self.overlaps[second, first] = shared > 0

    def __len__(self):
        return len(self.bodies)

    def GetIndex(self, zone):
        '''Returns the index of a zone given by index or label.

        Raises:
          KeyError: if no zone has the label.
        '''
        if isinstance(zone, (int, np.integer)):
            if not 0 <= zone < len(self.bodies):
                raise KeyError('No zone {0:d}'.format(zone))
            return int(zone)
        if zone not in self.labels:
            raise KeyError('No zone labeled {0!s}'.format(zone))
        return self.labels.index(zone)

    def GetBoundingSphere(self):
        return geometry.GetSceneBoundingSphere(self.bodies)

    def GetTangencyTolerance(self):
        return geometry.TANGENCY_TOLERANCE * self.GetBoundingSphere()[1]

    def GetUnion(self):
        '''Returns the union body of all zones, the zone itself for one zone.'''
        if self._union is None:
            self._union = geometry.UnionOfBodies(self.bodies)
        return self._union

    def GetUnionVolume(self):
        '''Returns the union volume and its standard error.

        Without overlaps the volume is the sum of the zone volumes.
        '''
        if self.HasOverlaps():
            union = self.GetUnion()
            return union.GetVolume(), union.GetVolumeStandardError()
        volume = sum(body.GetVolume() for body in self.bodies)
        stderr = math.sqrt(sum(
            body.GetVolumeStandardError() ** 2 for body in self.bodies))
        return volume, stderr

    def GetUnionSurfaceArea(self):
        '''Returns the sum of zone surface areas, None if one is unknown.'''
        areas = [body.GetSurfaceArea() for body in self.bodies]
        if any(area is None for area in areas):
            return None
        return float(sum(areas))

    def HasOverlaps(self):
        return bool(self.overlaps.any())

    def IsOverlapping(self, first, second):
        return bool(self.overlaps[self.GetIndex(first), self.GetIndex(second)])


def IntersectZones(zone_set, anchors, directions):
    '''Returns the crossing arrays of a batch of lines with every zone.'''
    return [body.IntersectLines(anchors, directions) for body in zone_set.bodies]


def _SortTagged(values, tags, ties):
    order = np.lexsort((ties, values), axis=-1)
    return (np.take_along_axis(values, order, axis=1),
            np.take_along_axis(tags, order, axis=1),
            np.take_along_axis(ties, order, axis=1))


def MergeZoneCrossings(zone_crossings, tolerance):
    '''Merges per-zone crossings into one tagged sequence per line.

    Coincident crossings order exits before entries, so touching zones leave
    zero-length gaps rather than nested intervals.

    Args:
      zone_crossings (list[numpy.ndarray]): (N, K_s) sorted crossings of each
          zone, padded with +inf.
      tolerance (float): crossings closer than this are snapped together.

    Returns:
      tuple[numpy.ndarray, numpy.ndarray]: (N, K) sorted crossings padded with
          +inf and (N, K) zone indices, -1 for padding.
    '''
    values, tags, ties = [], [], []
    for zone, crossings in enumerate(zone_crossings):
        crossings = np.asarray(crossings, dtype=np.float64)
        columns = np.broadcast_to(np.arange(crossings.shape[1]), crossings.shape)
        values.append(crossings)
        tags.append(np.where(np.isfinite(crossings), zone, -1))
        ties.append((columns % 2 == 0).astype(np.int64))
    values, tags, ties = _SortTagged(
        np.concatenate(values, axis=1), np.concatenate(tags, axis=1),
        np.concatenate(ties, axis=1))
    values = geometry.SnapCrossings(values, tolerance)
    values, tags, _ = _SortTagged(values, tags, ties)

    counts = np.isfinite(values).sum(axis=1)
    width = max(2, int(counts.max()) if counts.size else 2)
    return values[:, :width], tags[:, :width]


class HistogramMatrix(object):
    '''Per zone-pair signed histograms sharing the union counters.

    Every cell histogram carries the line and chord counters of the union, so
    a cell normalizes with the union normalization.

    Attributes:
      zone_set (ZoneSet): zones.
      mode (str): chord or ray.
      cells (dict[tuple[int, int], SignedHistogram]): chord mode keys s <= t,
          ray mode keys (source, target).
      union (SignedHistogram): histogram of the merged sequences.
      rejected (int): rays rejected for a boundary or ambiguous origin.
    '''

    MODES = ('chord', 'ray')

    def __init__(self, zone_set, mode, n_bins, l_max, n_slots=32):
        if mode not in self.MODES:
            raise ValueError('Unsupported matrix mode {0!s}'.format(mode))
        super(HistogramMatrix, self).__init__()
        self.zone_set = zone_set
        self.mode = mode
        self.n_bins = n_bins
        self.l_max = l_max
        self.n_slots = n_slots
        self.union = quasidist.SignedHistogram(n_bins, l_max, mode, n_slots)
        self.rejected = 0
        self.cells = collections.OrderedDict()
        size = len(zone_set)
        for source in range(size):
            for target in range(size):
                if mode == 'chord' and target < source:
                    continue
                self.cells[(source, target)] = quasidist.SignedHistogram(
                    n_bins, l_max, mode, n_slots)
        if zone_set.HasOverlaps():
            logger.warning('Zones overlap; matrix cells do not partition a union')

    @property
    def seed(self):
        return self.union.seed

    @seed.setter
    def seed(self, value):
        self.union.seed = value
        for cell in self.cells.values():
            cell.seed = value

    def _GetKey(self, source, target):
        source = self.zone_set.GetIndex(source)
        target = self.zone_set.GetIndex(target)
        if self.mode == 'chord':
            return min(source, target), max(source, target)
        return source, target

    def _AddCounters(self, lines, chords, slot):
        self.union._AddCounters(lines, chords, slot)
        for cell in self.cells.values():
            cell._AddCounters(lines, chords, slot)

    def _AccumulateCells(self, rows, lengths, signs, keys, slot):
        for (source, target), cell in self.cells.items():
            selected = (keys[0] == source) & (keys[1] == target)
            cell._Accumulate(rows[selected], lengths[selected], signs[selected], slot)

    def _CheckLabels(self, zone_crossings):
        if isinstance(zone_crossings, dict):
            unknown = [label for label in zone_crossings if label not in self.zone_set.labels]
            if unknown:
                raise errors.InternalError(
                    'Crossings tagged with unknown zones: {0!s}'.format(unknown))
            missing = [label for label in self.zone_set.labels if label not in zone_crossings]
            if missing:
                raise errors.InternalError(
                    'No crossings given for zones: {0!s}'.format(missing))
            return [zone_crossings[label] for label in self.zone_set.labels]
        zone_crossings = list(zone_crossings)
        if len(zone_crossings) != len(self.zone_set):
            raise errors.InternalError('Crossings given for {0:d} of {1:d} zones'.format(
                len(zone_crossings), len(self.zone_set)))
        return zone_crossings

    def RecordLinesMultibody(self, zone_crossings, slot=0):
        '''Records the crossings of a batch of lines with every zone.

        Args:
          zone_crossings (list[numpy.ndarray]|dict[str, numpy.ndarray]):
              (N, K_s) sorted crossings per zone, in zone order or by label.
          slot (int): replicate slot.

        Raises:
          InternalError: if crossings are tagged with an unknown zone.
        '''
        if self.mode != 'chord':
            raise ValueError('Only chord matrices record lines')
        values, tags = MergeZoneCrossings(
            self._CheckLabels(zone_crossings), self.zone_set.GetTangencyTolerance())
        if np.any(np.isfinite(values) & (tags < 0)):
            raise errors.InternalError('Unlabeled crossing in merged sequence')

        rows, firsts, seconds, lengths, signs = quasidist.EnumerateSignedPairs(values)
        if self.union.verify:
            self.union._VerifyLengthIdentity(values, rows, lengths, signs)
        net = self.union._Accumulate(rows, lengths, signs, slot)
        first_zones = tags[rows, firsts]
        second_zones = tags[rows, seconds]
        self._AccumulateCells(
            rows, lengths, signs,
            (np.minimum(first_zones, second_zones), np.maximum(first_zones, second_zones)),
            slot)
        hit = (quasidist.ChordLengths(values) > 0).any(axis=1)
        self._AddCounters(np.count_nonzero(hit), net, slot)

    def RecordLineMultibody(self, crossings_by_zone, slot=0):
        '''Records one line given a crossing list per zone label.'''
        arrays = {}
        for label, params in crossings_by_zone.items():
            params = np.asarray(getattr(params, 'params', params), dtype=np.float64)
            row = np.full(max(2, params.size), np.inf)
            row[:params.size] = params
            arrays[label] = row[np.newaxis, :]
        self.RecordLinesMultibody(arrays, slot=slot)

    def RecordRaysMultibody(self, zone_crossings, slot=0):
        '''Records rays from points of the union given their zone crossings.

        Args:
          zone_crossings (list[numpy.ndarray]|dict[str, numpy.ndarray]):
              (N, K_s) sorted line crossings per zone, parametrized from the
              ray origins.
          slot (int): replicate slot.

        Returns:
          numpy.ndarray: mask of rejected rays, whose origin lies on a
              boundary or not in exactly one zone.
        '''
        if self.mode != 'ray':
            raise ValueError('Only ray matrices record rays')
        tolerance = self.zone_set.GetTangencyTolerance()
        values, tags = MergeZoneCrossings(self._CheckLabels(zone_crossings), tolerance)

        rejected = np.any(np.abs(values) <= tolerance, axis=1)
        keep = values > tolerance
        parities = np.stack([
            np.count_nonzero(keep & (tags == zone), axis=1) % 2
            for zone in range(len(self.zone_set))], axis=1)
        rejected |= parities.sum(axis=1) != 1
        sources = np.argmax(parities, axis=1)

        order = np.argsort(~keep, axis=1, kind='stable')
        positive = np.take_along_axis(np.where(keep, values, np.inf), order, axis=1)
        positive_tags = np.take_along_axis(np.where(keep, tags, -1), order, axis=1)
        positive = positive[~rejected]
        positive_tags = positive_tags[~rejected]
        sources = sources[~rejected]

        rows, columns = np.nonzero(np.isfinite(positive))
        lengths = positive[rows, columns]
        signs = np.where(columns % 2 == 0, 1.0, -1.0)
        net = self.union._Accumulate(rows, lengths, signs, slot)
        self._AccumulateCells(
            rows, lengths, signs, (sources[rows], positive_tags[rows, columns]), slot)
        self._AddCounters(len(positive), net, slot)
        self.rejected += int(np.count_nonzero(rejected))
        return rejected

    def GetCell(self, source, target):
        return self.cells[self._GetKey(source, target)]

    def GetUnionCounts(self):
        '''Returns the elementwise sum of all cell counts.'''
        return np.sum([cell.counts for cell in self.cells.values()], axis=0)

    def CreateEmpty(self):
        empty = HistogramMatrix(
            self.zone_set, self.mode, self.n_bins, self.l_max, self.n_slots)
        empty.seed = self.seed
        return empty

    def Merge(self, other):
        '''Adds the cells and counters of another matrix.'''
        if self.mode != other.mode or set(self.cells) != set(other.cells):
            raise ValueError('Incompatible histogram matrices')
        self.union.Merge(other.union)
        for key, cell in self.cells.items():
            cell.Merge(other.cells[key])
        self.rejected += other.rejected

    def GetManifest(self):
        '''Returns labels, counters and union normalizers for export.'''
        manifest = {
            'mode': self.mode, 'labels': list(self.zone_set.labels),
            'n_bins': self.n_bins, 'l_max': self.l_max, 'n_slots': self.n_slots,
            'seed': self.seed, 'n_lines': self.union.number_of_lines,
            'n_chords': self.union.number_of_chords, 'rejected': self.rejected,
            'cells': [
                {'source': self.zone_set.labels[source],
                 'target': self.zone_set.labels[target],
                 'net_count': int(cell.counts.sum())}
                for (source, target), cell in self.cells.items()]}
        volume, _ = self.zone_set.GetUnionVolume()
        manifest['union_volume'] = volume
        area = self.zone_set.GetUnionSurfaceArea()
        if area is not None:
            manifest['union_surface_area'] = area
        if self.mode == 'chord' and self.union.number_of_chords > 0:
            mean_chord = self.union.NormalizeChord().GetMeanChord()
            manifest['union_mean_chord'] = mean_chord
            manifest['union_normalizer'] = volume / mean_chord
        return manifest


def _CheckDisjoint(matrix):
    if matrix.zone_set.HasOverlaps():
        raise errors.UnsupportedConfigurationError(
            'Zones overlap; use DecomposeOverlap for overlapping pairs')


def _PairLabel(matrix, source, target):
    return 'A[{0:s},{1:s}]'.format(
        matrix.zone_set.labels[source], matrix.zone_set.labels[target])


def PairIntegralChord(matrix, kernel, source, target, error_model='jackknife'):
    '''Estimates A_st from a chord matrix with the union normalization.

    A_st = f s_union sum(q_st I2 dl), s_union = V_union / <l>_union, where
    f is 1/2 off the diagonal since the cell holds both orders of the pair.
    The (S_1 + ... + S_m) / 4 normalizer is reported as an alternative when
    all areas are known.

    Raises:
      UnsupportedConfigurationError: if zones overlap.
    '''
    if matrix.mode != 'chord':
        raise ValueError('Not a chord matrix')
    _CheckDisjoint(matrix)
    source = matrix.zone_set.GetIndex(source)
    target = matrix.zone_set.GetIndex(target)
    factor = 1.0 if source == target else 0.5

    union_qd = matrix.union.NormalizeChord()
    mean_chord = union_qd.GetMeanChord()
    if not mean_chord > 0:
        raise errors.EstimationError(
            'Union mean chord {0!s} is not positive'.format(mean_chord))
    cell = matrix.GetCell(source, target)
    qd = cell.NormalizeChord()
    volume, volume_stderr = matrix.zone_set.GetUnionVolume()
    _, _, second = kernel.EvaluateOnBins(qd.edges)
    midpoints = qd.midpoints

    integral = factor * float(np.dot(qd.values, second)) * qd.bin_width
    normalizer = volume / mean_chord
    value = normalizer * integral

    def _Statistic(cell_counts, union_counts):
        return factor * volume * np.dot(cell_counts, second) / np.dot(
            union_counts, midpoints)

    stderr = estimators.HistogramStandardError(
        qd, factor * normalizer * second * qd.bin_width, _Statistic,
        [cell.slot_counts, matrix.union.slot_counts], error_model)
    stderr = estimators.AddRelativeError(value, stderr, volume_stderr / volume)
    report = resources.EstimateReport(
        value, stderr, 'chord', matrix.union.number_of_lines,
        normalizer_used='V-over-meanl', seed=matrix.seed)
    report.label = _PairLabel(matrix, source, target)

    area = matrix.zone_set.GetUnionSurfaceArea()
    if area is not None:
        quarter_area = 0.25 * area

        def _AreaStatistic(cell_counts, chords):
            return factor * quarter_area * np.dot(cell_counts, second) / chords

        area_value = quarter_area * integral
        area_stderr = estimators.HistogramStandardError(
            qd, factor * quarter_area * second * qd.bin_width, _AreaStatistic,
            [cell.slot_counts, matrix.union.slot_chords], error_model)
        area_report = resources.EstimateReport(
            area_value, area_stderr, 'chord', matrix.union.number_of_lines,
            normalizer_used='S-over-4')
        report.alternatives['S-over-4'] = {
            'value': area_value, 'stderr': area_stderr,
            'z': report.GetZScore(area_report)}

    report.metadata.update({
        'source': matrix.zone_set.labels[source],
        'target': matrix.zone_set.labels[target],
        'union_mean_chord': mean_chord, 'union_volume': volume,
        'n_bins': matrix.n_bins, 'l_max': matrix.l_max, 'error_model': error_model})
    return report


def PairIntegralRay(matrix, kernel, source, target, symmetrize=False,
                    error_model='jackknife'):
    '''Estimates A_st = V_union sum(q_(st) I1 dl) from a ray matrix.

    Only the union is normalized; off-diagonal cells of disjoint zones
    integrate to 0.

    Args:
      symmetrize (Optional[bool]): True to average the (s, t) and (t, s) cells.

    Raises:
      UnsupportedConfigurationError: if zones overlap.
    '''
    if matrix.mode != 'ray':
        raise ValueError('Not a ray matrix')
    _CheckDisjoint(matrix)
    source = matrix.zone_set.GetIndex(source)
    target = matrix.zone_set.GetIndex(target)
    forward = matrix.GetCell(source, target)
    backward = matrix.GetCell(target, source)
    factor = 0.5 if symmetrize else 1.0

    forward_qd = forward.NormalizeRay()
    values = forward_qd.values
    stderr_values = forward_qd.stderr
    if symmetrize:
        backward_qd = backward.NormalizeRay()
        values = 0.5 * (values + backward_qd.values)
        stderr_values = 0.5 * np.hypot(stderr_values, backward_qd.stderr)
    qd = quasidist.QuasiDensity(
        forward, values, stderr_values, 1.0, forward_qd.mean_length,
        forward.number_of_lines)

    volume, volume_stderr = matrix.zone_set.GetUnionVolume()
    _, first, _ = kernel.EvaluateOnBins(qd.edges)
    value = volume * float(np.dot(values, first)) * qd.bin_width

    def _Statistic(forward_counts, backward_counts, lines):
        counts = forward_counts
        if symmetrize:
            counts = factor * (forward_counts + backward_counts)
        return volume * np.dot(counts, first) / lines

    stderr = estimators.HistogramStandardError(
        qd, volume * first * qd.bin_width, _Statistic,
        [forward.slot_counts, backward.slot_counts, matrix.union.slot_lines],
        error_model)
    stderr = estimators.AddRelativeError(value, stderr, volume_stderr / volume)
    report = resources.EstimateReport(
        value, stderr, 'ray', matrix.union.number_of_lines, normalizer_used='none',
        seed=matrix.seed)
    report.label = _PairLabel(matrix, source, target)
    report.metadata.update({
        'source': matrix.zone_set.labels[source],
        'target': matrix.zone_set.labels[target], 'symmetrized': bool(symmetrize),
        'cell_integral': forward_qd.GetIntegral(), 'union_volume': volume,
        'n_bins': matrix.n_bins, 'l_max': matrix.l_max, 'error_model': error_model})
    return report


def CompareSubtractionIdentity(pair_report, union_report, first_report, second_report):
    '''Compares A_12 with (D_union - D_1 - D_2) / 2 from independent runs.

    Returns:
      EstimateReport: identity estimate; metadata holds the pair value and
          the z-score of the difference.
    '''
    value = 0.5 * (union_report.value - first_report.value - second_report.value)
    stderr = 0.5 * math.sqrt(
        union_report.stderr ** 2 + first_report.stderr ** 2 + second_report.stderr ** 2)
    report = resources.EstimateReport(
        value, stderr, 'identity',
        union_report.n_samples + first_report.n_samples + second_report.n_samples)
    report.label = pair_report.label
    report.metadata['pair_value'] = pair_report.value
    report.metadata['pair_stderr'] = pair_report.stderr
    report.metadata['z'] = report.GetZScore(pair_report)
    return report


class OverlapPlan(object):
    '''Single-body estimation tasks whose combination gives A_12.

    With P_1 = B_1 \\ B_2, P_2 = B_2 \\ B_1 and C their intersection,

      2 A_12 = D_union + D_C - D_P1 - D_P2

    and for disjoint bodies 2 A_12 = D_union - D_1 - D_2. An empty exclusive
    part has no task and contributes 0, so identical bodies give A_12 = D_B.

    Attributes:
      tasks (OrderedDict[str, Body]): bodies to estimate D for, by task name.
      coefficients (dict[str, float]): weight of each task in A_12.
      overlapping (bool): True if the bodies share volume.
    '''

    def __init__(self, union, intersection=None, first_only=None, second_only=None,
                 first=None, second=None):
        '''Initializes a plan.

        Args:
          union (Body): union of both bodies.
          intersection (Optional[Body]): shared part, None for disjoint bodies.
          first_only (Optional[Body]): first body without the second, None
              when empty or the bodies are disjoint.
          second_only (Optional[Body]): second body without the first.
          first (Optional[Body]): first body, for disjoint bodies.
          second (Optional[Body]): second body, for disjoint bodies.
        '''
        super(OverlapPlan, self).__init__()
        self.overlapping = intersection is not None
        self.tasks = collections.OrderedDict([('union', union)])
        self.coefficients = {'union': 0.5}
        if self.overlapping:
            terms = (('intersection', intersection, 0.5),
                     ('first-only', first_only, -0.5),
                     ('second-only', second_only, -0.5))
        else:
            terms = (('first', first, -0.5), ('second', second, -0.5))
        for name, body, coefficient in terms:
            if body is not None:
                self.tasks[name] = body
                self.coefficients[name] = coefficient

    def Combine(self, reports):
        '''Combines the reports of every task into an A_12 report.

        Args:
          reports (dict[str, EstimateReport]): report per task name.

        Raises:
          KeyError: if a task has no report.
        '''
        value = 0.0
        variance = 0.0
        n_samples = 0
        for name in self.tasks:
            report = reports[name]
            coefficient = self.coefficients[name]
            value += coefficient * report.value
            variance += (coefficient * report.stderr) ** 2
            n_samples += report.n_samples
        combined = resources.EstimateReport(
            value, math.sqrt(variance), 'overlap-decomposition', n_samples)
        combined.metadata['overlapping'] = self.overlapping
        combined.metadata['terms'] = {
            name: reports[name].value for name in self.tasks}
        return combined


def DecomposeOverlap(first, second, probe_points=100000, seed=0):
    '''Plans the single-body estimates whose combination gives A_12.

    A zero-volume intersection falls back to the disjoint plan. A body lying
    inside the other has no exclusive part.

    Returns:
      OverlapPlan: estimation tasks.
    '''
    if first is second or first.GetDigest() == second.GetDigest():
        return OverlapPlan(first, intersection=first)

    shared = geometry.ProbeOverlap(first, second, probe_points, seed)
    if shared <= 0:
        logger.debug('Bodies do not overlap, planning the disjoint identity')
        return OverlapPlan(geometry.Union(first, second), first=first, second=second)
    try:
        intersection = geometry.Intersection(first, second)
    except errors.GeometryError:
        return OverlapPlan(geometry.Union(first, second), first=first, second=second)

    first_only = None
    if shared < first.GetVolume():
        first_only = geometry.Difference(first, second)
    second_only = None
    if geometry.ProbeOverlap(second, first, probe_points, seed) < second.GetVolume():
        second_only = geometry.Difference(second, first)
    return OverlapPlan(
        geometry.Union(first, second), intersection=intersection,
        first_only=first_only, second_only=second_only)
