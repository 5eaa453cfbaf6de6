#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Installation and deployment script."""

import glob
import os
import sys

try:
  from setuptools import find_packages, setup
except ImportError:
  from distutils.core import find_packages, setup

# Change PYTHONPATH to include QuasiChord so that we can get the version.
sys.path.insert(0, '.')

import QuasiChord  # pylint: disable=wrong-import-position


quasichord_description = (
    'Monte Carlo point-kernel integrals from signed chord and ray length '
    'distributions.')

quasichord_long_description = (
    'Estimates integrals of point kernels over pairs of points in 3-D bodies '
    'from signed chord and ray length distributions, with distance '
    'distribution and direct Monte Carlo estimators to compare against.')

setup(
    name='QuasiChord',
    version=QuasiChord.__version__,
    description=quasichord_description,
    long_description=quasichord_long_description,
    license='MIT',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        "License :: OSI Approved :: MIT License",
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    python_requires='>=3.9',
    packages=find_packages('.', exclude=[
        'tests', 'tests.*']),
    package_dir={
        'QuasiChord': 'QuasiChord'
    },
    scripts=glob.glob(os.path.join('scripts', '[A-Za-z]*.py')),
    data_files=[
        ('share/doc/QuasiChord', [
            'LICENSE.md', 'README.md']),
    ],
    install_requires=[
        "numpy >= 1.22",
        "scipy >= 1.12"
    ],
)
