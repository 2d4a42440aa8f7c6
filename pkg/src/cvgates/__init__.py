"""Continuous-variable and hybrid qubit-boson gates in two backends.

``phase_space`` holds the exact symplectic representation, ``fock`` the truncated
Fock-space numerics, ``lang`` the circuit DSL and equivalence checker, ``suites``
the identity catalogue driven by the ``cvgates`` command line.
"""

__version__ = "0.1.0"
