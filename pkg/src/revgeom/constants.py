"""Dimensional constants for unit balls and spheres."""

import math


def kappa(j):
    """Volume of the j-dimensional unit ball (kappa_0 = 1)."""
    return math.pi ** (j / 2.0) / math.gamma(j / 2.0 + 1.0)


def omega(j):
    """Surface area of the (j-1)-sphere in R^j, omega_j = j * kappa_j."""
    return j * kappa(j)
