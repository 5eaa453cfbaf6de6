# -*- coding: utf-8 -*-
'''Run orchestration: scene reading, estimates per method and comparison.'''

import abc
import itertools
import os
import time

from QuasiChord import errors
from QuasiChord import estimators
from QuasiChord import Lib as QuasiChordLib
from QuasiChord import logger
from QuasiChord import multibody
from QuasiChord import scene_file


# Comparison z-scores above this fail the run.
MAXIMUM_Z_SCORE = 5.0


class OutputWriter(object):
    '''Output writer interface.'''

    @abc.abstractmethod
    def Close(self):
        '''Closes the output writer.'''

    @abc.abstractmethod
    def Open(self):
        '''Opens the output writer.

        Returns:
          bool: True if successful or False on error.
        '''

    @abc.abstractmethod
    def WriteComparison(self, rows):
        '''Writes the comparison table.

        Args:
          rows (list[dict[str, object]]): comparison rows.
        '''

    @abc.abstractmethod
    def WriteHistogram(self, name, histogram):
        '''Writes the per-bin density of a histogram.

        Args:
          name (str): histogram name, e.g. scene.chord.
          histogram (SignedHistogram): histogram.
        '''

    @abc.abstractmethod
    def WriteMatrix(self, name, matrix):
        '''Writes every cell of a histogram matrix and its manifest entry.

        Args:
          name (str): matrix name, e.g. matrix.chord.
          matrix (HistogramMatrix): histogram matrix.
        '''

    @abc.abstractmethod
    def WriteReports(self, reports):
        '''Writes estimate reports.

        Args:
          reports (list[EstimateReport]): reports.
        '''


def CompareReports(reports):
    '''Compares every pair of reports sharing a label.

    Returns:
      list[dict[str, object]]: one row per pair of methods with both values,
          the combined standard error and the z-score.
    '''
    rows = []
    labels = []
    for report in reports:
        if report.label not in labels:
            labels.append(report.label)
    for label in labels:
        group = [report for report in reports if report.label == label]
        for first, second in itertools.combinations(group, 2):
            rows.append({
                'label': label,
                'method_a': first.method, 'method_b': second.method,
                'value_a': first.value, 'value_b': second.value,
                'stderr': (first.stderr ** 2 + second.stderr ** 2) ** 0.5,
                'z': first.GetZScore(second)})
    return rows


class QuasiChordRunnerHelper(object):
    '''Runs every configured method on a scene.'''

    def __init__(self, config):
        '''Initializes a runner.

        Args:
          config (RunConfig): run settings.
        '''
        super(QuasiChordRunnerHelper, self).__init__()
        self._config = config
        self.comparison = []
        self.l_max = None
        self.reports = []
        self.scene = None

    def _AddReport(self, report, label, start_time):
        report.label = label
        report.runtime = time.time() - start_time
        if self.scene is not None:
            report.metadata['scene_hash'] = self.scene.digest
        logger.info('{0:s} {1:s}: {2:.8g} +- {3:.3g} ({4:d} samples, {5:.2f}s)'.format(
            label, report.method, report.value, report.stderr, report.n_samples,
            report.runtime))
        self.reports.append(report)

    def _RunSceneMethods(self, output_writer):
        config = self._config
        kernel = self.scene.kernel
        zone_set = self.scene.zone_set
        body = zone_set.GetUnion()
        bounding_sphere = zone_set.GetBoundingSphere()
        common = dict(
            n_bins=config.n_bins, l_max=self.l_max, seed=config.seed,
            workers=config.workers, n_slots=config.n_slots)

        if 'chord' in config.methods:
            start_time = time.time()
            histogram = QuasiChordLib.BuildChordHistogram(
                body, config.n_lines, bounding_sphere=bounding_sphere, **common)
            output_writer.WriteHistogram('scene.chord', histogram)
            self._AddReport(estimators.ChordEstimate(
                histogram.NormalizeChord(), kernel, body), 'D', start_time)

        if 'ray' in config.methods:
            start_time = time.time()
            histogram = QuasiChordLib.BuildRayHistogram(body, config.n_rays, **common)
            output_writer.WriteHistogram('scene.ray', histogram)
            qd = histogram.NormalizeRay()
            self._AddReport(estimators.RayEstimate(qd, kernel, body), 'D', start_time)
            self._AddReport(
                estimators.RayDerivativeEstimate(qd, kernel, body), 'D', start_time)

        if 'dd' in config.methods:
            start_time = time.time()
            histogram = QuasiChordLib.BuildDistanceHistogram(body, config.n_pairs, **common)
            output_writer.WriteHistogram('scene.dd', histogram)
            self._AddReport(estimators.DdEstimate(histogram, kernel, body), 'D', start_time)

        if 'oracle' in config.methods:
            start_time = time.time()
            self._AddReport(QuasiChordLib.RunOracleRadial(
                body, body, kernel, config.n_pairs, l_max=self.l_max, seed=config.seed,
                workers=config.workers, n_slots=config.n_slots), 'D', start_time)

    def _RunPairMethods(self, output_writer):
        config = self._config
        kernel = self.scene.kernel
        zone_set = self.scene.zone_set
        labels = zone_set.labels
        common = dict(
            n_bins=config.n_bins, l_max=self.l_max, seed=config.seed,
            workers=config.workers, n_slots=config.n_slots)
        pairs = list(itertools.combinations(range(len(zone_set)), 2))

        def _Label(source, target):
            return 'A[{0:s},{1:s}]'.format(labels[source], labels[target])

        if 'chord' in config.methods:
            if zone_set.HasOverlaps():
                for source, target in pairs:
                    start_time = time.time()
                    self._AddReport(QuasiChordLib.RunOverlapPlan(
                        zone_set.bodies[source], zone_set.bodies[target], kernel,
                        config.n_lines, **common), _Label(source, target), start_time)
            else:
                start_time = time.time()
                matrix = QuasiChordLib.BuildChordMatrix(zone_set, config.n_lines, **common)
                output_writer.WriteMatrix('matrix.chord', matrix)
                for source, target in pairs:
                    self._AddReport(multibody.PairIntegralChord(
                        matrix, kernel, source, target), _Label(source, target), start_time)

        if 'ray' in config.methods and not zone_set.HasOverlaps():
            start_time = time.time()
            matrix = QuasiChordLib.BuildRayMatrix(zone_set, config.n_rays, **common)
            output_writer.WriteMatrix('matrix.ray', matrix)
            for source, target in pairs:
                self._AddReport(multibody.PairIntegralRay(
                    matrix, kernel, source, target, symmetrize=True),
                    _Label(source, target), start_time)

        for source, target in pairs:
            first = zone_set.bodies[source]
            second = zone_set.bodies[target]
            if 'dd' in config.methods:
                start_time = time.time()
                histogram = QuasiChordLib.BuildDistanceHistogram(
                    first, config.n_pairs, target=second, **common)
                self._AddReport(
                    estimators.DdEstimate(histogram, kernel),
                    _Label(source, target), start_time)
            if 'oracle' in config.methods:
                start_time = time.time()
                self._AddReport(QuasiChordLib.RunOracleRadial(
                    first, second, kernel, config.n_pairs, l_max=self.l_max,
                    seed=config.seed, workers=config.workers, n_slots=config.n_slots),
                    _Label(source, target), start_time)
                if not zone_set.IsOverlapping(source, target):
                    start_time = time.time()
                    self._AddReport(QuasiChordLib.RunOraclePairwise(
                        first, second, kernel, config.n_pairs, seed=config.seed,
                        workers=config.workers, n_slots=config.n_slots),
                        _Label(source, target), start_time)

    def ReadScene(self):
        '''Reads the scene file of the configuration.

        Returns:
          bool: True if successful or False otherwise.
        '''
        scene_path = self._config.scene_path
        if not os.path.isfile(scene_path):
            logger.error('Scene file not found: {0:s}'.format(scene_path))
            return False
        scene = scene_file.SceneFile(scene_path)
        try:
            if not scene.Parse():
                return False
        except errors.SceneFormatError as exception:
            logger.error('Invalid scene {0:s}: {1!s}'.format(scene_path, exception))
            return False
        self.scene = scene
        return True

    def Run(self, output_writer):
        '''Runs every configured method and writes the results.

        Args:
          output_writer (OutputWriter): opened output writer.

        Returns:
          bool: True if every comparison z-score is at most 5, False on
              failure or discordant estimates.
        '''
        if self.scene is None and not self.ReadScene():
            return False
        try:
            center, radius = self.scene.zone_set.GetBoundingSphere()
            self._config.Validate(scene_diameter=2.0 * radius)
            self.l_max = self._config.l_max
            if self.l_max is None:
                self.l_max = QuasiChordLib.GetDefaultLength((center, radius))

            self._RunSceneMethods(output_writer)
            if len(self.scene.zone_set) > 1:
                self._RunPairMethods(output_writer)

        except errors.Error as exception:
            logger.exception('Run failed: {0!s}'.format(exception))
            return False

        self.comparison = CompareReports(self.reports)
        output_writer.WriteReports(self.reports)
        output_writer.WriteComparison(self.comparison)

        discordant = [row for row in self.comparison if row['z'] > MAXIMUM_Z_SCORE]
        for row in discordant:
            logger.error('{0:s}: {1:s} and {2:s} differ by z = {3:.2f}'.format(
                row['label'], row['method_a'], row['method_b'], row['z']))
        return not discordant
