"""Exact reliability engine for recursively generated graph families.

Transfer-matrix products give the two-terminal and all-terminal
reliability of ladder/cylinder strips with per-element reliabilities;
the analysis layers derive generating functions, spectral scaling laws,
complex-zero structures, critical node-reliability values, and small-rho
asymptotics.
"""

__version__ = "1.0.0"
