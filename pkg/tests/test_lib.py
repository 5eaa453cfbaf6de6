# -*- coding: utf-8 -*-
"""Functions and classes for testing."""

from __future__ import unicode_literals

import math
import os
import unittest


class BaseTestCase(unittest.TestCase):
  """The base test case."""

  _TEST_DATA_PATH = os.path.join(os.getcwd(), 'test_data')

  # Show full diff results, part of TestCase so does not follow our naming
  # conventions.
  maxDiff = None

  def _GetTestFilePath(self, path_segments):
    """Retrieves the path of a test file relative to the test data directory.

    Args:
      path_segments (list[str]): path segments inside the test data directory.

    Returns:
      str: a path of the test file.
    """
    # Note that we need to pass the individual path segments to os.path.join
    # and not a list.
    return os.path.join(self._TEST_DATA_PATH, *path_segments)

  def _SkipIfPathNotExists(self, path):
    """Skips the test if the path does not exist.

    Args:
      path (str): path of a test file.

    Raises:
      SkipTest: if the path does not exist.
    """
    if not os.path.exists(path):
      filename = os.path.basename(path)
      raise unittest.SkipTest('missing test file: {0:s}'.format(filename))

  def assertReportsAgree(self, first, second, number_of_errors=4.0):
    """Asserts two estimate reports agree within combined standard errors.

    Args:
      first (EstimateReport): first estimate.
      second (EstimateReport): second estimate.
      number_of_errors (Optional[float]): allowed z-score.
    """
    combined = math.hypot(first.stderr, second.stderr)
    self.assertGreater(combined, 0.0)
    z_score = abs(first.value - second.value) / combined
    self.assertLessEqual(z_score, number_of_errors, (
        '{0:s} {1:.8g} +- {2:.3g} and {3:s} {4:.8g} +- {5:.3g} differ by '
        'z = {6:.2f}').format(
            first.method, first.value, first.stderr, second.method,
            second.value, second.stderr, z_score))

  def assertWithinStandardErrors(
      self, report, expected, number_of_errors=4.0):
    """Asserts an estimate is within standard errors of an exact value.

    Args:
      report (EstimateReport): estimate.
      expected (float): exact value.
      number_of_errors (Optional[float]): allowed z-score.
    """
    self.assertGreater(report.stderr, 0.0)
    z_score = abs(report.value - expected) / report.stderr
    self.assertLessEqual(z_score, number_of_errors, (
        '{0:s} {1:.8g} +- {2:.3g} differs from {3:.8g} by z = {4:.2f}').format(
            report.method, report.value, report.stderr, expected, z_score))
