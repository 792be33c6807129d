"""Combinatorial workbench for Coxeter diagrams, their finite symmetry
groups, typed chamber complexes, and the poset / graph machinery used to
reduce aspherical-classifying-space questions on tree diagrams to a short
list of elementary pieces."""

__version__ = "0.1.0"
