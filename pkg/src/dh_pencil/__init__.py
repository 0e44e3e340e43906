"""Analysis and structure-preserving stabilization of dissipative Hamiltonian pencils."""

__version__ = "0.1.0"
