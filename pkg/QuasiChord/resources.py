# -*- coding: utf-8 -*-
'''Several resource objects.'''

import math

import numpy as np

from QuasiChord import errors


_UNIT_NORM_TOLERANCE = 1e-12


def AsDirection(direction):
    '''Returns a direction as a float array, checking it is unit-norm.

    Raises:
      GeometryError: if the norm deviates from 1 by more than 1e-12.
    '''
    direction = np.asarray(direction, dtype=np.float64).reshape(3)
    norm = float(np.linalg.norm(direction))
    if abs(norm - 1.0) > _UNIT_NORM_TOLERANCE:
        raise errors.GeometryError(
            'Direction {0!s} is not unit-norm (|w| = {1:.17g})'.format(
                direction.tolist(), norm))
    return direction


class Line(object):
    '''Oriented straight line p(t) = anchor + t * direction.'''

    def __init__(self, anchor, direction):
        super(Line, self).__init__()
        self.anchor = np.asarray(anchor, dtype=np.float64).reshape(3)
        self.direction = AsDirection(direction)

    def GetPoint(self, t):
        return self.anchor + t * self.direction

    def Reversed(self):
        '''Returns the same line with the opposite orientation.'''
        return Line(self.anchor, -self.direction)


class CrossingList(object):
    '''Sorted boundary crossings of a line with a body.

    Consecutive pairs (t_2k, t_2k+1) are the in-body intervals; a tangent
    contact shows up as a duplicated value.
    '''

    def __init__(self, params):
        super(CrossingList, self).__init__()
        params = np.asarray(params, dtype=np.float64).ravel()
        if params.size % 2:
            raise errors.InternalError(
                'Odd number of crossings: {0:d}'.format(params.size))
        if params.size > 1 and np.any(np.diff(params) < 0):
            raise errors.InternalError('Crossings are not sorted')
        self.params = params

    @property
    def count(self):
        return int(self.params.size)

    def GetIntervals(self):
        '''Returns the in-body intervals as an (n, 2) array.'''
        return self.params.reshape(-1, 2)

    def GetChordLengths(self):
        intervals = self.GetIntervals()
        return intervals[:, 1] - intervals[:, 0]

    def Reversed(self):
        '''Returns the crossings seen from the reversed line.'''
        return CrossingList(-self.params[::-1])

    def __len__(self):
        return self.count


class LineSample(object):
    '''Sampled line and whether it meets the target bodies.'''

    def __init__(self, line, hit):
        super(LineSample, self).__init__()
        self.line = line
        self.hit = hit


class EstimateReport(object):
    '''Integral estimate with its standard error and provenance.'''

    METHODS = (
        'chord', 'ray', 'ray-derivative', 'dd', 'oracle-radial',
        'oracle-pairwise', 'identity', 'overlap-decomposition')
    NORMALIZERS = ('V-over-meanl', 'S-over-4', 'none')

    def __init__(
        self, value, stderr, method, n_samples, normalizer_used='none',
        seed=None, runtime=0.0):
        '''Initializes an estimate report.

        Raises:
          EstimationError: if the value is not finite or the standard error
              is negative or not finite.
        '''
        super(EstimateReport, self).__init__()
        value = float(value)
        stderr = float(stderr)
        if not math.isfinite(value):
            raise errors.EstimationError(
                'Non-finite {0:s} estimate: {1!s}'.format(method, value))
        if not math.isfinite(stderr) or stderr < 0:
            raise errors.EstimationError(
                'Invalid {0:s} standard error: {1!s}'.format(method, stderr))
        if normalizer_used not in self.NORMALIZERS:
            raise ValueError('Unsupported normalizer {0:s}'.format(normalizer_used))

        self.value = value
        self.stderr = stderr
        self.method = method
        self.n_samples = int(n_samples)
        self.normalizer_used = normalizer_used
        self.seed = seed
        self.runtime = runtime
        self.label = ''
        self.alternatives = {}
        self.metadata = {}

    def GetZScore(self, other):
        '''Returns |self - other| in units of the combined standard error.'''
        combined = math.hypot(self.stderr, other.stderr)
        difference = abs(self.value - other.value)
        if combined == 0:
            return 0.0 if difference == 0 else math.inf
        return difference / combined

    def ToDict(self):
        return {
            'label': self.label,
            'method': self.method,
            'value': self.value,
            'stderr': self.stderr,
            'n_samples': self.n_samples,
            'normalizer': self.normalizer_used,
            'seed': self.seed,
            'runtime': self.runtime,
            'alternatives': self.alternatives,
            'metadata': self.metadata}


class RunConfig(object):
    '''Settings of a batch run.'''

    METHODS = ('chord', 'ray', 'dd', 'oracle')
    OUTPUT_FORMATS = ('JSON', 'SQLITE')

    def __init__(
        self, scene_path='', methods=METHODS, n_lines=1000000,
        n_rays=1000000, n_pairs=1000000, n_bins=512, l_max=None, seed=0,
        workers=1, output_path='', output_format='JSON', n_slots=32):
        super(RunConfig, self).__init__()
        self.scene_path = scene_path
        self.methods = tuple(methods)
        self.n_lines = n_lines
        self.n_rays = n_rays
        self.n_pairs = n_pairs
        self.n_bins = n_bins
        self.l_max = l_max
        self.seed = seed
        self.workers = workers
        self.output_path = output_path
        self.output_format = output_format
        self.n_slots = n_slots

    def Validate(self, scene_diameter=None):
        '''Checks the settings.

        Args:
          scene_diameter (Optional[float]): diameter of the scene bounding
              sphere, used to check an l_max override.

        Raises:
          ConfigurationError: if a setting is out of range.
        '''
        unknown = [method for method in self.methods if method not in self.METHODS]
        if unknown or not self.methods:
            raise errors.ConfigurationError(
                'Unsupported methods: {0!s}'.format(unknown or 'none given'))
        for name in ('n_lines', 'n_rays', 'n_pairs', 'workers', 'n_slots'):
            if getattr(self, name) < 1:
                raise errors.ConfigurationError('{0:s} must be >= 1'.format(name))
        if self.n_bins < 2:
            raise errors.ConfigurationError('n_bins must be >= 2')
        if self.output_format not in self.OUTPUT_FORMATS:
            raise errors.ConfigurationError(
                'Unsupported output format {0:s}'.format(self.output_format))
        if self.l_max is not None:
            if self.l_max <= 0:
                raise errors.ConfigurationError('l_max must be positive')
            if scene_diameter is not None and self.l_max < scene_diameter:
                raise errors.ConfigurationError(
                    'l_max {0:.6g} is smaller than the scene diameter {1:.6g}'.format(
                        self.l_max, scene_diameter))
