"""
Finite-temperature thermodynamic formalism for Walters-class potentials on the
full 2-shift, and the zero-temperature limits extracted from it.
"""

__version__ = "0.1.0"
