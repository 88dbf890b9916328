"""Equivariant cyclic covers of P^1: validity checks, closed-form counts, numerical checks."""

__version__ = "0.1.0"
