# -*- coding: utf-8 -*-
'''Seeded random streams and measure-correct samplers.

Lines follow the motion-invariant measure: an isotropic direction first,
then an anchor uniform on the disk of radius R through the bounding-sphere
center perpendicular to that direction.
'''

import hashlib
import math

import numpy as np

from QuasiChord import errors
from QuasiChord import logger
from QuasiChord import resources


_MINIMUM_REJECTION_EFFICIENCY = 1e-6
_REJECTION_TRIALS_BEFORE_ABORT = 10000000
_MAXIMUM_BATCH = 1 << 18


def DeriveStreamKey(seed, module, stream_id):
    '''Returns a 128-bit Philox key for (seed, module, stream id).'''
    digest = hashlib.sha256(
        '{0:d}/{1:s}/{2:d}'.format(int(seed), module, int(stream_id)).encode(
            'utf-8')).digest()
    return int.from_bytes(digest[:16], 'little')


class RngStream(object):
    '''Counter-based random stream identified by (seed, module, stream id).'''

    def __init__(self, seed, stream_id=0, module=''):
        super(RngStream, self).__init__()
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.module = module
        self.generator = np.random.Generator(
            np.random.Philox(key=DeriveStreamKey(seed, module, stream_id)))


def SampleIsotropicDirections(rng, n):
    '''Samples n directions uniform on the unit sphere.

    Returns:
      numpy.ndarray: (n, 3) unit vectors.
    '''
    z = rng.generator.uniform(-1.0, 1.0, n)
    azimuth = rng.generator.uniform(0.0, 2.0 * math.pi, n)
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.column_stack((rho * np.cos(azimuth), rho * np.sin(azimuth), z))


def SampleIsotropicDirection(rng):
    return SampleIsotropicDirections(rng, 1)[0]


def SamplePointsInBody(body, rng, n):
    '''Samples n points uniform inside a body by rejection from its bounding box.

    Raises:
      DegenerateBodyError: if the acceptance rate falls below 1e-6.
    '''
    lo, hi = body.GetBoundingBox()
    accepted = []
    number_accepted = 0
    number_of_trials = 0
    efficiency = 0.5
    while number_accepted < n:
        batch = int(min(_MAXIMUM_BATCH, max(
            64, math.ceil(1.2 * (n - number_accepted) / efficiency))))
        candidates = rng.generator.uniform(lo, hi, (batch, 3))
        inside = candidates[body.Contains(candidates)]
        number_of_trials += batch
        if inside.size:
            accepted.append(inside)
            number_accepted += len(inside)
        efficiency = max(number_accepted / number_of_trials, 1e-3)
        if (number_of_trials >= _REJECTION_TRIALS_BEFORE_ABORT and
                number_accepted < _MINIMUM_REJECTION_EFFICIENCY * number_of_trials):
            raise errors.DegenerateBodyError(
                'Rejection efficiency {0:.3g} below {1:.0e} for body {2:s}'.format(
                    number_accepted / number_of_trials,
                    _MINIMUM_REJECTION_EFFICIENCY, body.label or repr(body)))

    if number_accepted / number_of_trials < 0.01:
        logger.warning(
            'Low rejection efficiency {0:.4f} sampling body {1:s}'.format(
                number_accepted / number_of_trials, body.label or repr(body)))
    return np.concatenate(accepted)[:n]


def SamplePointInBody(body, rng):
    return SamplePointsInBody(body, rng, 1)[0]


def _PerpendicularBasis(directions):
    '''Returns two unit vectors perpendicular to each direction and each other.'''
    helper = np.zeros_like(directions)
    use_x = np.abs(directions[:, 0]) < 0.9
    helper[use_x, 0] = 1.0
    helper[~use_x, 1] = 1.0
    first = np.cross(directions, helper)
    first /= np.linalg.norm(first, axis=1)[:, np.newaxis]
    second = np.cross(directions, first)
    return first, second


def SampleKinematicLines(center, radius, rng, n):
    '''Samples n lines meeting a sphere with the invariant line measure.

    Args:
      center (numpy.ndarray): bounding-sphere center.
      radius (float): bounding-sphere radius.
      rng (RngStream): random stream.
      n (int): number of lines.

    Returns:
      tuple[numpy.ndarray, numpy.ndarray]: (n, 3) anchors on the disk through
          the center and (n, 3) unit directions.
    '''
    if radius <= 0:
        raise errors.GeometryError('Bounding sphere radius must be positive')
    directions = SampleIsotropicDirections(rng, n)
    offset = radius * np.sqrt(rng.generator.uniform(0.0, 1.0, n))
    angle = rng.generator.uniform(0.0, 2.0 * math.pi, n)
    first, second = _PerpendicularBasis(directions)
    anchors = (np.asarray(center, dtype=np.float64) +
               (offset * np.cos(angle))[:, np.newaxis] * first +
               (offset * np.sin(angle))[:, np.newaxis] * second)
    return anchors, directions


def SampleKinematicLine(center, radius, rng, body=None):
    '''Samples one line; hit tells whether it meets the body when given.'''
    anchors, directions = SampleKinematicLines(center, radius, rng, 1)
    line = resources.Line(anchors[0], directions[0])
    hit = False
    if body is not None:
        crossings = body.IntersectLines(anchors, directions)
        hit = bool(np.isfinite(crossings[0]).any())
    return resources.LineSample(line, hit)


def GetLineMeasureTotal(radius):
    '''Measure of all lines meeting a sphere of the radius (pi times its area).'''
    return 4.0 * math.pi * math.pi * radius * radius


def EstimateLineMeasure(body, n_lines, rng, bounding_sphere=None):
    '''Estimates the measure of lines meeting a body.

    Args:
      body (Body): target body, inside the bounding sphere.
      n_lines (int): number of sampled lines.
      rng (RngStream): random stream.
      bounding_sphere (Optional[tuple[numpy.ndarray, float]]): sphere to
          sample from, the body bounding sphere by default.

    Returns:
      tuple[float, float]: measure and its standard error.
    '''
    if bounding_sphere is None:
        bounding_sphere = body.GetBoundingSphere()
    center, radius = bounding_sphere
    hits = 0
    remaining = n_lines
    while remaining > 0:
        batch = min(remaining, _MAXIMUM_BATCH)
        anchors, directions = SampleKinematicLines(center, radius, rng, batch)
        crossings = body.IntersectLines(anchors, directions)
        hits += int(np.count_nonzero(np.isfinite(crossings[:, 0])))
        remaining -= batch

    total = GetLineMeasureTotal(radius)
    fraction = hits / n_lines
    stderr = total * math.sqrt(fraction * (1.0 - fraction) / n_lines)
    return total * fraction, stderr
