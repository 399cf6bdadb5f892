"""Exact arithmetic for pseudo-lattices with real multiplication.

Jacobi-Perron continued fractions over exact algebraic reals, weight-2
modular symbols with Hecke eigenvector extraction, real quadratic orders
with their form class groups, and an end-to-end pipeline that ties them
into auditable per-level reports.
"""

__version__ = "0.1.0"
