"""isofilt: exact p-adic linear algebra for isocrystal slope theory,
Galois-stable admissible Lagrangian filtrations, and Minkowski-bound
arithmetic."""

__version__ = "0.1.0"
