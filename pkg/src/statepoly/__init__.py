"""Optimization of state, trace and moment polynomials by moment relaxations."""
__version__ = "0.1.0"
