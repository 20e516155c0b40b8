"""Cubature rules for Gaussian-weighted, exponential-weighted and unit-ball integrals."""

from _cubature import *  # noqa: F401,F403
