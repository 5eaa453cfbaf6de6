# -*- coding: utf-8 -*-
"""Monte Carlo point-kernel integrals over 3-D bodies using signed chord and ray length distributions."""

__version__ = '0.1'
