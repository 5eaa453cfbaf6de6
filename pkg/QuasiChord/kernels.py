# -*- coding: utf-8 -*-
'''Point kernels phi(x) with their single and double antiderivatives.

I1(l) is the integral of phi over [0, l] and I2(l) the integral of I1 over
[0, l]. Kernels without closed forms are integrated numerically with
cumulative Simpson sums.
'''

import math
import os

import numpy as np
from numpy.polynomial import polynomial
from scipy import integrate
from scipy import special

from QuasiChord import errors
from QuasiChord import logger


# Refinement of the bin-midpoint grid for tabulated antiderivatives.
GRID_REFINEMENT = 8

_DEFAULT_GRID_POINTS = 8193


def _CheckArguments(values):
    values = np.asarray(values, dtype=np.float64)
    if values.size and (np.any(values < 0) or np.any(np.isnan(values))):
        raise errors.KernelEvaluationError(
            'Kernel evaluated at a negative or NaN distance')
    return values


def _CheckResults(values, name):
    if np.any(np.isnan(values)):
        raise errors.KernelEvaluationError('Kernel {0:s} returned NaN'.format(name))
    return values


def NumericAntiderivatives(phi, grid):
    '''Tabulates I1 and I2 with cumulative composite Simpson sums.

    Args:
      phi (callable|numpy.ndarray): kernel function or its values on the grid.
      grid (numpy.ndarray): increasing distances; integration starts at grid[0].

    Returns:
      tuple[numpy.ndarray, numpy.ndarray]: I1 and I2 on the grid.

    Raises:
      KernelEvaluationError: if the grid holds negative distances or phi
          returns NaN.
    '''
    grid = _CheckArguments(grid)
    if grid.size < 3 or np.any(np.diff(grid) <= 0):
        raise errors.KernelEvaluationError(
            'Grid must hold at least three increasing distances')
    values = phi(grid) if callable(phi) else np.asarray(phi, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise errors.KernelEvaluationError('Kernel is not finite on the grid')
    first = integrate.cumulative_simpson(values, x=grid, initial=0.0)
    second = integrate.cumulative_simpson(first, x=grid, initial=0.0)
    return first, second


class Kernel(object):
    '''Point kernel.'''

    NAME = ''

    HAS_ANALYTIC_ANTIDERIVATIVES = False

    def Phi(self, x):
        '''Evaluates phi at distances x >= 0.'''
        raise NotImplementedError()

    def ToDict(self):
        raise NotImplementedError()

    def _Tabulate(self, upper):
        grid = np.linspace(0.0, upper, _DEFAULT_GRID_POINTS)
        first, second = NumericAntiderivatives(self.Phi, grid)
        return grid, first, second

    def IntegralFirst(self, l):
        '''Evaluates I1(l), the integral of phi over [0, l].'''
        l = _CheckArguments(l)
        grid, first, _ = self._Tabulate(max(float(np.max(l, initial=0.0)), 1e-12))
        return np.interp(l, grid, first)

    def IntegralSecond(self, l):
        '''Evaluates I2(l), the integral of I1 over [0, l].'''
        l = _CheckArguments(l)
        grid, _, second = self._Tabulate(max(float(np.max(l, initial=0.0)), 1e-12))
        return np.interp(l, grid, second)

    def EvaluateOnBins(self, edges):
        '''Evaluates phi, I1 and I2 at the bin midpoints.

        Numeric antiderivatives use the midpoint grid refined 8 times, whose
        nodes include every midpoint.

        Args:
          edges (numpy.ndarray): bin edges starting at 0.

        Returns:
          tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]: phi, I1 and I2.
        '''
        edges = np.asarray(edges, dtype=np.float64)
        midpoints = 0.5 * (edges[:-1] + edges[1:])
        phi = _CheckResults(self.Phi(midpoints), self.NAME)
        if self.HAS_ANALYTIC_ANTIDERIVATIVES:
            return phi, self.IntegralFirst(midpoints), self.IntegralSecond(midpoints)

        number_of_bins = len(midpoints)
        grid = np.linspace(
            edges[0], edges[-1], GRID_REFINEMENT * number_of_bins + 1)
        first, second = NumericAntiderivatives(self.Phi, grid)
        nodes = GRID_REFINEMENT * np.arange(number_of_bins) + GRID_REFINEMENT // 2
        return phi, first[nodes], second[nodes]


class ExponentialKernel(Kernel):
    '''phi(x) = sigma exp(-sigma x).'''

    NAME = 'exponential'

    HAS_ANALYTIC_ANTIDERIVATIVES = True

    def __init__(self, sigma):
        if not sigma > 0 or not math.isfinite(sigma):
            raise ValueError('sigma must be positive, got {0!s}'.format(sigma))
        super(ExponentialKernel, self).__init__()
        self.sigma = float(sigma)

    def Phi(self, x):
        x = _CheckArguments(x)
        return self.sigma * np.exp(-self.sigma * x)

    def IntegralFirst(self, l):
        l = _CheckArguments(l)
        return -np.expm1(-self.sigma * l)

    def IntegralSecond(self, l):
        l = _CheckArguments(l)
        return l + np.expm1(-self.sigma * l) / self.sigma

    def ToDict(self):
        return {'type': self.NAME, 'sigma': self.sigma}


class ConstantKernel(Kernel):
    '''phi(x) = value; value 0 gives the zero kernel.'''

    NAME = 'constant'

    HAS_ANALYTIC_ANTIDERIVATIVES = True

    def __init__(self, value=1.0):
        if not math.isfinite(value):
            raise ValueError('value must be finite')
        super(ConstantKernel, self).__init__()
        self.value = float(value)

    def Phi(self, x):
        x = _CheckArguments(x)
        return np.full_like(x, self.value)

    def IntegralFirst(self, l):
        l = _CheckArguments(l)
        return self.value * l

    def IntegralSecond(self, l):
        l = _CheckArguments(l)
        return 0.5 * self.value * l * l

    def ToDict(self):
        return {'type': self.NAME, 'value': self.value}


class BuildUpKernel(Kernel):
    '''phi(x) = B(x) sigma exp(-sigma x) with a polynomial build-up factor B.

    The antiderivatives are sums of regularized lower incomplete gamma
    functions P(a, x):

      I1(l) = sum_k b_k k! / sigma**k P(k + 1, sigma l)
      I2(l) = sum_k b_k k! / sigma**k
              [l P(k + 1, sigma l) - (k + 1) / sigma P(k + 2, sigma l)]
    '''

    NAME = 'buildup'

    HAS_ANALYTIC_ANTIDERIVATIVES = True

    def __init__(self, sigma, coefficients):
        '''Initializes a build-up kernel.

        Args:
          sigma (float): attenuation coefficient, positive.
          coefficients (list[float]): coefficients of B in ascending powers,
              the first one equal to 1.

        Raises:
          ValueError: if sigma is not positive or B(0) is not 1.
        '''
        coefficients = [float(value) for value in coefficients]
        if not sigma > 0 or not math.isfinite(sigma):
            raise ValueError('sigma must be positive, got {0!s}'.format(sigma))
        if not coefficients or coefficients[0] != 1.0:
            raise ValueError('Build-up factor must satisfy B(0) = 1')
        super(BuildUpKernel, self).__init__()
        self.sigma = float(sigma)
        self.coefficients = coefficients

    def _Weights(self):
        return [
            (power, value * math.factorial(power) / self.sigma ** power)
            for power, value in enumerate(self.coefficients)]

    def Phi(self, x):
        x = _CheckArguments(x)
        return polynomial.polyval(x, self.coefficients) * self.sigma * np.exp(
            -self.sigma * x)

    def IntegralFirst(self, l):
        l = _CheckArguments(l)
        result = np.zeros_like(l)
        for power, weight in self._Weights():
            result = result + weight * special.gammainc(power + 1, self.sigma * l)
        return result

    def IntegralSecond(self, l):
        l = _CheckArguments(l)
        result = np.zeros_like(l)
        for power, weight in self._Weights():
            result = result + weight * (
                l * special.gammainc(power + 1, self.sigma * l) -
                (power + 1) / self.sigma * special.gammainc(power + 2, self.sigma * l))
        return result

    def ToDict(self):
        return {
            'type': self.NAME, 'sigma': self.sigma,
            'coefficients': list(self.coefficients)}


class TabulatedKernel(Kernel):
    '''Kernel given by samples (x, phi), linear in between, 0 past the table.'''

    NAME = 'table'

    def __init__(self, distances, values, path=''):
        distances = np.asarray(distances, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if distances.ndim != 1 or distances.shape != values.shape or distances.size < 2:
            raise ValueError('Kernel table needs two columns of equal length >= 2')
        if distances[0] < 0 or np.any(np.diff(distances) <= 0):
            raise ValueError('Kernel table distances must be increasing and >= 0')
        if not np.all(np.isfinite(values)):
            raise ValueError('Kernel table values must be finite')
        super(TabulatedKernel, self).__init__()
        self.distances = distances
        self.values = values
        self.path = path

    def Phi(self, x):
        x = _CheckArguments(x)
        return np.interp(x, self.distances, self.values, right=0.0)

    def ToDict(self):
        return {'type': self.NAME, 'path': self.path}


def ReadKernelTable(path):
    '''Reads a two-column CSV kernel table (x, phi), header line optional.

    Raises:
      IOError: if the file cannot be read.
      ValueError: if the table is malformed.
    '''
    logger.debug('Reading kernel table {0:s}'.format(path))
    try:
        table = np.loadtxt(path, delimiter=',', comments='#', ndmin=2)
    except ValueError:
        table = np.loadtxt(path, delimiter=',', comments='#', ndmin=2, skiprows=1)
    if table.shape[1] != 2:
        raise ValueError('Kernel table {0:s} must have two columns'.format(
            os.path.basename(path)))
    return TabulatedKernel(table[:, 0], table[:, 1], path=path)
