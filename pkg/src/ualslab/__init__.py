"""Exact finite computations for sequence-space norms, plegma families and UALS counterexamples."""
__version__ = "0.1.0"
