"""Simulation and certification of high-dimensional pixel entanglement."""

__version__ = "0.1.0"
