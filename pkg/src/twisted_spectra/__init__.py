"""Twisted-sum topologies and spectra of function-algebra sums, in decidable models."""

__version__ = "0.1.0"
