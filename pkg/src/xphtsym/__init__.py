"""Symmetry scores of planar binary shapes from the extended persistent homology transform."""
