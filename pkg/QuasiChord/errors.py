# -*- coding: utf-8 -*-
'''The error objects.'''


class Error(Exception):
    '''Base class for all QuasiChord errors.'''


class ConfigurationError(Error):
    '''Invalid run configuration.'''


class GeometryError(Error):
    '''Malformed body or line.'''


class DegenerateBodyError(GeometryError):
    '''Body with zero volume or hopeless rejection efficiency.'''


class RejectedSampleError(Error):
    '''Sample that must be drawn again, e.g. a ray origin on a boundary.'''


class HistogramOverflowError(Error):
    '''Length beyond the histogram range; l_max is smaller than the scene.'''


class NoDataError(Error):
    '''Histogram without recorded lines or chords.'''


class EstimationError(Error):
    '''Estimate that cannot be formed from the given data.'''


class KernelEvaluationError(Error):
    '''Kernel returning NaN or evaluated at a negative distance.'''


class UnsupportedConfigurationError(Error):
    '''Method not applicable to the given bodies.'''


class SceneFormatError(Error):
    '''Scene document violating the schema.

    Attributes:
      field (str): path of the offending field, e.g. bodies[1].shape.radius.
      line (int): line number of a syntax error or None.
    '''

    def __init__(self, message, field='', line=None):
        super(SceneFormatError, self).__init__(message)
        self.field = field
        self.line = line


class InternalError(Error):
    '''Violated count identity or unlabeled crossing.'''
