"""Quantum cluster algebras over R = Q[q^(+-1/2)]: tori, seeds, gradings and q=1 checks."""

__version__ = "0.1.0"
