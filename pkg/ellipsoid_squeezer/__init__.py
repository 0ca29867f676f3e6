"""
Ellipsoid Squeezer - numerical lower bounds for the squeezing function of general complex ellipsoids.
"""

__version__ = "0.1.0"
