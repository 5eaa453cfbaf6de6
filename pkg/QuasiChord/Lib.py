# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Quasi chord execution library
# Script Name   : Lib.py
# Purpose/Usage : Chunked, seeded and optionally parallel drivers for the
#                 line, ray and point-pair samplers and the oracles.
# Notes         : Work is split into chunks of at most 65536 samples, never
#                 fewer chunks than replicate slots. Chunk c draws from the
#                 stream (seed, module, c) and records into slot c mod slots,
#                 so results do not depend on the number of workers.
#
# MIT License, see LICENSE.md
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

import math
import time

from concurrent import futures

import numpy as np

from QuasiChord import errors
from QuasiChord import estimators
from QuasiChord import geometry
from QuasiChord import logger
from QuasiChord import multibody
from QuasiChord import quasidist
from QuasiChord import sampling


CHUNK_SIZE = 65536

_BATCH = 16384


def _PlanChunks(n, n_slots, chunk_size=CHUNK_SIZE):
    '''Splits n samples into near-equal chunks.

    Returns:
      list[int]: chunk sizes, all positive.
    '''
    if n < 1:
        raise errors.ConfigurationError('Number of samples must be >= 1')
    number_of_chunks = max(min(n_slots, n), int(math.ceil(n / chunk_size)))
    base, extra = divmod(n, number_of_chunks)
    return [base + 1 if chunk < extra else base for chunk in range(number_of_chunks)]


def _MapChunks(function, tasks, workers):
    '''Runs the chunk tasks, in a process pool for more than one worker.

    Returns:
      list[object]: results in task order.
    '''
    if workers <= 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]
    with futures.ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, tasks))


def _Batches(size):
    while size > 0:
        batch = min(size, _BATCH)
        yield batch
        size -= batch


def _Merge(results):
    merged = results[0].CreateEmpty()
    for result in results:
        merged.Merge(result)
    return merged


def GetDefaultLength(bounding_sphere):
    '''Returns the default l_max, the bounding-sphere diameter times 1.0001.'''
    return 2.0 * bounding_sphere[1] * 1.0001


def _ChordChunk(task):
    body, bounding_sphere, n_bins, l_max, n_slots, mode, seed, chunk, size, verify = task
    center, radius = bounding_sphere
    rng = sampling.RngStream(seed, chunk, 'lines')
    histogram = quasidist.SignedHistogram(n_bins, l_max, mode, n_slots)
    histogram.seed = seed
    histogram.verify = verify
    for batch in _Batches(size):
        anchors, directions = sampling.SampleKinematicLines(center, radius, rng, batch)
        histogram.RecordLinesBatch(body.IntersectLines(anchors, directions), slot=chunk)
    return histogram


def _RayChunk(task):
    body, n_bins, l_max, n_slots, seed, chunk, size = task
    rng = sampling.RngStream(seed, chunk, 'rays')
    histogram = quasidist.SignedHistogram(n_bins, l_max, 'ray', n_slots)
    histogram.seed = seed
    remaining = size
    rejected = 0
    while remaining > 0:
        batch = min(remaining, _BATCH)
        origins = sampling.SamplePointsInBody(body, rng, batch)
        directions = sampling.SampleIsotropicDirections(rng, batch)
        positive, rejected_rays = body.IntersectRays(origins, directions)
        histogram.RecordRaysBatch(positive[~rejected_rays], slot=chunk)
        remaining -= int(np.count_nonzero(~rejected_rays))
        rejected += int(np.count_nonzero(rejected_rays))
    if rejected:
        logger.debug('Chunk {0:d}: {1:d} rays rejected and resampled'.format(
            chunk, rejected))
    return histogram


def _DistanceChunk(task):
    source, target, n_bins, l_max, n_slots, seed, chunk, size = task
    rng = sampling.RngStream(seed, chunk, 'pairs')
    histogram = estimators.DistanceHistogram(n_bins, l_max, n_slots)
    histogram.seed = seed
    for batch in _Batches(size):
        first = sampling.SamplePointsInBody(source, rng, batch)
        second = sampling.SamplePointsInBody(target, rng, batch)
        histogram.RecordDistances(np.linalg.norm(second - first, axis=1), slot=chunk)
    return histogram


def _ChordMatrixChunk(task):
    zone_set, bounding_sphere, n_bins, l_max, n_slots, seed, chunk, size, verify = task
    center, radius = bounding_sphere
    rng = sampling.RngStream(seed, chunk, 'lines')
    matrix = multibody.HistogramMatrix(zone_set, 'chord', n_bins, l_max, n_slots)
    matrix.seed = seed
    matrix.union.verify = verify
    for batch in _Batches(size):
        anchors, directions = sampling.SampleKinematicLines(center, radius, rng, batch)
        matrix.RecordLinesMultibody(
            multibody.IntersectZones(zone_set, anchors, directions), slot=chunk)
    return matrix


def _RayMatrixChunk(task):
    zone_set, n_bins, l_max, n_slots, seed, chunk, size = task
    rng = sampling.RngStream(seed, chunk, 'rays')
    matrix = multibody.HistogramMatrix(zone_set, 'ray', n_bins, l_max, n_slots)
    matrix.seed = seed
    union = zone_set.GetUnion()
    remaining = size
    while remaining > 0:
        batch = min(remaining, _BATCH)
        origins = sampling.SamplePointsInBody(union, rng, batch)
        directions = sampling.SampleIsotropicDirections(rng, batch)
        rejected = matrix.RecordRaysMultibody(
            multibody.IntersectZones(zone_set, origins, directions), slot=chunk)
        remaining -= int(np.count_nonzero(~rejected))
    return matrix


def _OracleChunk(task):
    kind, source, target, kernel, l_max, seed, chunk, size = task
    rng = sampling.RngStream(seed, chunk, 'oracle-' + kind)
    return estimators.OracleMoments(kind, source, target, kernel, size, rng, l_max)


def BuildChordHistogram(
    body, n_lines, n_bins, l_max=None, seed=0, workers=1, n_slots=32,
    mode='chord', bounding_sphere=None, verify=False):
    '''Samples invariant-measure lines through a body into a chord histogram.

    Args:
      body (Body): body to intersect.
      n_lines (int): number of lines sampled from the bounding sphere.
      n_bins (int): number of bins.
      l_max (Optional[float]): histogram range, the bounding-sphere diameter
          times 1.0001 by default.
      seed (Optional[int]): run seed.
      workers (Optional[int]): number of worker processes.
      n_slots (Optional[int]): replicate slots.
      mode (Optional[str]): chord, mcd or ocd.
      bounding_sphere (Optional[tuple[numpy.ndarray, float]]): sphere the
          lines are sampled from, the body bounding sphere by default.
      verify (Optional[bool]): True to check the per-line length identity.

    Returns:
      SignedHistogram: merged histogram.
    '''
    if bounding_sphere is None:
        bounding_sphere = geometry.GetSceneBoundingSphere([body])
    if l_max is None:
        l_max = GetDefaultLength(bounding_sphere)
    start_time = time.time()
    tasks = [
        (body, bounding_sphere, n_bins, l_max, n_slots, mode, seed, chunk, size, verify)
        for chunk, size in enumerate(_PlanChunks(n_lines, n_slots))]
    histogram = _Merge(_MapChunks(_ChordChunk, tasks, workers))
    logger.debug('{0:s} histogram: {1:d} lines, {2:d} hits in {3:.2f}s'.format(
        mode, n_lines, histogram.number_of_lines, time.time() - start_time))
    return histogram


def BuildRayHistogram(
    body, n_rays, n_bins, l_max=None, seed=0, workers=1, n_slots=32):
    '''Samples rays from uniform interior points into a ray histogram.

    Rays whose origin lies on the boundary are resampled, so the histogram
    holds exactly n_rays rays.
    '''
    if l_max is None:
        l_max = GetDefaultLength(geometry.GetSceneBoundingSphere([body]))
    tasks = [
        (body, n_bins, l_max, n_slots, seed, chunk, size)
        for chunk, size in enumerate(_PlanChunks(n_rays, n_slots))]
    return _Merge(_MapChunks(_RayChunk, tasks, workers))


def BuildDistanceHistogram(
    source, n_pairs, n_bins, l_max=None, seed=0, workers=1, n_slots=32,
    target=None):
    '''Samples distances between uniform points of source and target.

    Args:
      target (Optional[Body]): body of the second points, source by default.

    Returns:
      DistanceHistogram: merged histogram carrying both volumes.
    '''
    if target is None:
        target = source
    if l_max is None:
        l_max = GetDefaultLength(geometry.GetSceneBoundingSphere([source, target]))
    tasks = [
        (source, target, n_bins, l_max, n_slots, seed, chunk, size)
        for chunk, size in enumerate(_PlanChunks(n_pairs, n_slots))]
    histogram = _Merge(_MapChunks(_DistanceChunk, tasks, workers))
    histogram.source_volume = source.GetVolume()
    histogram.target_volume = target.GetVolume()
    histogram.volume_relative_error = math.hypot(
        estimators.GetVolumeRelativeError(source),
        estimators.GetVolumeRelativeError(target))
    return histogram


def BuildChordMatrix(
    zone_set, n_lines, n_bins, l_max=None, seed=0, workers=1, n_slots=32,
    verify=False):
    '''Samples lines through the scene sphere into a chord histogram matrix.

    The lines are those BuildChordHistogram samples for the scene bounding
    sphere with the same seed.
    '''
    bounding_sphere = zone_set.GetBoundingSphere()
    if l_max is None:
        l_max = GetDefaultLength(bounding_sphere)
    tasks = [
        (zone_set, bounding_sphere, n_bins, l_max, n_slots, seed, chunk, size, verify)
        for chunk, size in enumerate(_PlanChunks(n_lines, n_slots))]
    return _Merge(_MapChunks(_ChordMatrixChunk, tasks, workers))


def BuildRayMatrix(
    zone_set, n_rays, n_bins, l_max=None, seed=0, workers=1, n_slots=32):
    '''Samples rays from uniform points of the union into a ray matrix.'''
    if l_max is None:
        l_max = GetDefaultLength(zone_set.GetBoundingSphere())
    tasks = [
        (zone_set, n_bins, l_max, n_slots, seed, chunk, size)
        for chunk, size in enumerate(_PlanChunks(n_rays, n_slots))]
    return _Merge(_MapChunks(_RayMatrixChunk, tasks, workers))


def _RunOracle(kind, source, target, kernel, n, l_max, seed, workers, n_slots):
    start_time = time.time()
    tasks = [
        (kind, source, target, kernel, l_max, seed, chunk, size)
        for chunk, size in enumerate(_PlanChunks(n, n_slots))]
    moments = estimators.SampleMoments()
    for result in _MapChunks(_OracleChunk, tasks, workers):
        moments.Merge(result)
    return moments, time.time() - start_time


def RunOracleRadial(
    source, target, kernel, n, l_max=None, seed=0, workers=1, n_slots=32):
    '''Runs the radial oracle in chunks.

    Returns:
      EstimateReport: oracle-radial report.
    '''
    if l_max is None:
        l_max = estimators.GetPairLength(source, target)
    moments, runtime = _RunOracle(
        'radial', source, target, kernel, n, l_max, seed, workers, n_slots)
    return estimators.RadialOracleReport(
        moments, source, l_max, seed=seed, runtime=runtime)


def RunOraclePairwise(source, target, kernel, n, seed=0, workers=1, n_slots=32):
    '''Runs the pairwise oracle in chunks.

    Raises:
      UnsupportedConfigurationError: if the bodies coincide or overlap.
    '''
    estimators.CheckSeparated(source, target, seed=seed)
    moments, runtime = _RunOracle(
        'pairwise', source, target, kernel, n, None, seed, workers, n_slots)
    return estimators.OracleReport(
        moments, 'oracle-pairwise', source, target, seed=seed, runtime=runtime)


def _ChordReport(body, kernel, n_lines, n_bins, l_max, seed, workers, n_slots):
    histogram = BuildChordHistogram(
        body, n_lines, n_bins, l_max, seed, workers, n_slots)
    return estimators.ChordEstimate(histogram.NormalizeChord(), kernel, body)


def RunSubtractionIdentityCheck(
    first, second, kernel, n_lines, n_bins, l_max=None, seed=0, workers=1,
    n_slots=32):
    '''Compares A_12 from a chord matrix with three independent chord runs.

    Args:
      first (Body): labeled first body.
      second (Body): labeled second body, disjoint from the first.

    Returns:
      tuple[EstimateReport, EstimateReport]: the pair integral and the
          identity estimate (D_union - D_1 - D_2) / 2, whose metadata holds
          the z-score.
    '''
    zone_set = multibody.ZoneSet([first, second], seed=seed)
    if l_max is None:
        l_max = GetDefaultLength(zone_set.GetBoundingSphere())
    matrix = BuildChordMatrix(zone_set, n_lines, n_bins, l_max, seed, workers, n_slots)
    pair_report = multibody.PairIntegralChord(matrix, kernel, 0, 1)
    union_report = _ChordReport(
        zone_set.GetUnion(), kernel, n_lines, n_bins, l_max, seed + 1, workers, n_slots)
    first_report = _ChordReport(
        first, kernel, n_lines, n_bins, l_max, seed + 2, workers, n_slots)
    second_report = _ChordReport(
        second, kernel, n_lines, n_bins, l_max, seed + 3, workers, n_slots)
    identity_report = multibody.CompareSubtractionIdentity(
        pair_report, union_report, first_report, second_report)
    logger.info('Subtraction identity {0:s}: pair {1:.6g} identity {2:.6g} z={3:.2f}'.format(
        pair_report.label, pair_report.value, identity_report.value,
        identity_report.metadata['z']))
    return pair_report, identity_report


def RunOverlapPlan(
    first, second, kernel, n_lines, n_bins, l_max=None, seed=0, workers=1,
    n_slots=32):
    '''Estimates A_12 of two possibly overlapping bodies by decomposition.

    Every task of the plan gets an independent chord run.

    Returns:
      EstimateReport: overlap-decomposition report.
    '''
    plan = multibody.DecomposeOverlap(first, second, seed=seed)
    if l_max is None:
        l_max = GetDefaultLength(geometry.GetSceneBoundingSphere([first, second]))
    reports = {}
    for offset, (name, body) in enumerate(plan.tasks.items()):
        reports[name] = _ChordReport(
            body, kernel, n_lines, n_bins, l_max, seed + offset + 1, workers, n_slots)
    report = plan.Combine(reports)
    report.label = 'A[{0:s},{1:s}]'.format(first.label, second.label)
    return report
