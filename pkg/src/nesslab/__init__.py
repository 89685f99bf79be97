"""Finite-size numerics for superfluid and superconducting states.

Subpackages cover the boosted Tonks-Girardeau spectrum, finite-dimensional
KMS and Bloch checks, and the self-consistent Meissner profile of a
cylinder of charged bosons.
"""

__version__ = "0.1.0"
