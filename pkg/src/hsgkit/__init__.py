"""Finite-scale kernel for state grids, adjunction checks, axiom registries and
delayed neuron simulation."""

__version__ = "0.1.0"
