"""Exact finite-group machinery: Heisenberg p-groups and their representations,
Weil representation linearization, quadratic forms in characteristic 2, and
root-datum genericity and torsion-prime checks.
"""

__version__ = "0.1.0"
