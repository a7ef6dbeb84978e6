"""Exact calculator for mode algebras: Newton differences, formal series,
PBW module actions, locality orders, OPEs and vertex-operator identity
verification over Q[K, C]."""

__version__ = "0.1.0"
