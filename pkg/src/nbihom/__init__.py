"""Exact-arithmetic workbench for n-BiHom-Lie algebras."""
