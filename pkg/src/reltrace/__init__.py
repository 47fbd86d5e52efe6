"""Relative fixed-point invariants for self-maps of pairs of finite complexes."""
