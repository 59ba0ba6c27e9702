"""Catalytic state transitions: exact classical certificates, dephasing-assisted
quantum constructions, bounded witness search and a catalytic cooling demo."""

__version__ = "0.1.0"
