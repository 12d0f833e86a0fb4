"""Boundary integral solver for eddy current scattering on surfaces of
revolution, built on an eight-component Dirac formulation."""

__version__ = "0.1.0"
